//! Consistency predicates a lieutenant applies to command vectors and bit
//! vectors it receives.

use super::{BitVector, CommandVector, IndexScheme};

/// Acceptance thresholds for the consistency checks.
///
/// `theta`: a vector's revealed-tuple count `r` must satisfy
/// `|r - M/2| <= theta * M`. `epsilon`: maximum tolerated fraction of
/// revealed tuples that break the expected anticorrelation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckTolerances {
    pub theta: f64,
    pub epsilon: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        Self {
            theta: 0.25,
            epsilon: 0.0,
        }
    }
}

impl CheckTolerances {
    pub fn count_ok(&self, revealed: usize, tuples: usize) -> bool {
        let m = tuples as f64;
        (revealed as f64 - m / 2.0).abs() <= self.theta * m + 1e-9
    }

    fn fraction_ok(&self, mismatches: usize, revealed: usize) -> bool {
        if revealed == 0 {
            return mismatches == 0;
        }
        mismatches as f64 <= self.epsilon * revealed as f64 + 1e-9
    }
}

fn shape_ok(scheme: &IndexScheme, v: &CommandVector) -> bool {
    v.matches_scheme(scheme)
}

/// Checks the commander's vector `v` against lieutenant `i`'s own record.
pub fn check_alice(
    scheme: &IndexScheme,
    i: usize,
    l_i: &BitVector,
    v: &CommandVector,
    tol: &CheckTolerances,
) -> bool {
    if i >= scheme.lieutenants() || !shape_ok(scheme, v) || l_i.len() != scheme.stream_len() {
        return false;
    }
    let r = v.revealed_count();
    if !tol.count_ok(r, scheme.tuples()) {
        return false;
    }
    let c = v.order();
    let mut mismatches = 0;
    for k in v.revealed_tuples() {
        let p = scheme.index(i, k);
        if v.bit(p) != c {
            return false;
        }
        if l_i.get(p) != 1 - c {
            mismatches += 1;
        }
    }
    tol.fraction_ok(mismatches, r)
}

/// Checks peer `j`'s command vector against lieutenant `i`'s record: the
/// revealed commander bits at `i`'s pairs must anticorrelate with `l_i`.
pub fn check_lt_cv(
    scheme: &IndexScheme,
    i: usize,
    l_i: &BitVector,
    j: usize,
    v_j: &CommandVector,
    tol: &CheckTolerances,
) -> bool {
    let n_lt = scheme.lieutenants();
    if i == j || i >= n_lt || j >= n_lt {
        return false;
    }
    if !shape_ok(scheme, v_j) || l_i.len() != scheme.stream_len() {
        return false;
    }
    let r = v_j.revealed_count();
    if !tol.count_ok(r, scheme.tuples()) {
        return false;
    }
    let c = v_j.order();
    let mut mismatches = 0;
    for k in v_j.revealed_tuples() {
        if v_j.bit(scheme.index(j, k)) != c {
            return false;
        }
        let p = scheme.index(i, k);
        if v_j.bit(p) != 1 - l_i.get(p) {
            mismatches += 1;
        }
    }
    tol.fraction_ok(mismatches, r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitVectorVerdict {
    Pass,
    Fail,
    /// `v_own` revealed nothing, so there was nothing to compare.
    Vacuous,
}

pub fn check_lt_bv_verdict(
    scheme: &IndexScheme,
    i: usize,
    v_own: &CommandVector,
    j: usize,
    l_j_claimed: &BitVector,
    tol: &CheckTolerances,
) -> BitVectorVerdict {
    let n_lt = scheme.lieutenants();
    if i == j || i >= n_lt || j >= n_lt {
        return BitVectorVerdict::Fail;
    }
    if !shape_ok(scheme, v_own) || l_j_claimed.len() != scheme.stream_len() {
        return BitVectorVerdict::Fail;
    }
    let r = v_own.revealed_count();
    if r == 0 {
        return BitVectorVerdict::Vacuous;
    }
    let mismatches = v_own
        .revealed_tuples()
        .map(|k| scheme.index(j, k))
        .filter(|&p| l_j_claimed.get(p) != 1 - v_own.bit(p))
        .count();
    if tol.fraction_ok(mismatches, r) {
        BitVectorVerdict::Pass
    } else {
        BitVectorVerdict::Fail
    }
}

/// Checks peer `j`'s claimed record against the commander bits that
/// lieutenant `i` holds proof of. Vacuously true when `v_own` reveals nothing.
pub fn check_lt_bv(
    scheme: &IndexScheme,
    i: usize,
    v_own: &CommandVector,
    j: usize,
    l_j_claimed: &BitVector,
    tol: &CheckTolerances,
) -> bool {
    check_lt_bv_verdict(scheme, i, v_own, j, l_j_claimed, tol) != BitVectorVerdict::Fail
}
