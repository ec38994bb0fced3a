//! Exhaustive forgery enumeration at M = 16, N = 3.
//!
//! Lieutenant 0 is loyal and holds `l_0`; lieutenant 1 forges. A forged
//! command vector is a choice of revealed tuples plus the bits shown at
//! lieutenant 0's slots. Every one of the 3^16 (mask, bits) pairs is checked.

use qdba_core::protocol::{
    check_lt_bv, check_lt_cv, BitVector, CheckTolerances, CommandVector, IndexScheme,
};

const M: usize = 16;

fn scheme() -> IndexScheme {
    IndexScheme::new(3, M).unwrap()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn in_window(r: usize) -> bool {
    (4..=12).contains(&r)
}

/// Enumerates every `bits` assignment over the revealed tuples of `mask`
/// and returns how many pass `pass`.
fn count_passes(mask: u32, mut pass: impl FnMut(u32, u32) -> bool) -> u64 {
    let r = mask.count_ones();
    (0..1u32 << r).filter(|&bits| pass(mask, bits)).count() as u64
}

/// Spreads the low `popcount(mask)` bits of `bits` over the set bits of `mask`.
fn deposit(mask: u32, bits: u32) -> u32 {
    let mut out = 0;
    let mut b = 0;
    for k in 0..M as u32 {
        if mask >> k & 1 == 1 {
            out |= (bits >> b & 1) << k;
            b += 1;
        }
    }
    out
}

#[test]
fn forged_command_vectors_pass_with_probability_two_to_minus_r() {
    let s = scheme();
    let tol = CheckTolerances::default();
    // Arbitrary fixed loyal record.
    let l0: Vec<u8> = (0..2 * M).map(|p| ((p * 7 + p / 5) % 2) as u8).collect();
    let l0v = BitVector::new(l0.clone()).unwrap();
    let order = 1u8;
    let mut entries = vec![None; 2 * M];
    let mut passes_by_r = [0u64; M + 1];
    for mask in 0..1u32 << M {
        let passes = count_passes(mask, |mask, bits| {
            let shown = deposit(mask, bits);
            for k in 0..M {
                let (p0, p1) = (s.anticorrelated_index(0, k).unwrap(), s.anticorrelated_index(1, k).unwrap());
                if mask >> k & 1 == 1 {
                    entries[p0] = Some((shown >> k & 1) as u8);
                    entries[p1] = Some(order);
                } else {
                    entries[p0] = None;
                    entries[p1] = None;
                }
            }
            let v = CommandVector::from_entries(&s, 1, order, &entries).unwrap();
            check_lt_cv(&s, 0, &l0v, 1, &v, &tol)
        });
        let r = mask.count_ones() as usize;
        let expected = u64::from(in_window(r));
        assert_eq!(passes, expected, "mask {mask:#x}");
        passes_by_r[r] += passes;
    }
    // Pass rate of a uniformly random forged vector, exact.
    let total: f64 = (0..=M)
        .map(|r| passes_by_r[r] as f64 / (1u64 << M) as f64 / (1u64 << r) as f64)
        .sum();
    let bound: f64 = (0..=M)
        .filter(|&r| in_window(r))
        .map(|r| binomial(M as u64, r as u64) as f64 / (1u64 << M) as f64 * 0.5f64.powi(r as i32))
        .sum();
    assert!((total - bound).abs() < 1e-15);
    assert!(total <= 0.5f64.powi(4));
}

#[test]
fn forged_bit_vectors_pass_with_probability_two_to_minus_r() {
    let s = scheme();
    let tol = CheckTolerances::default();
    let order = 0u8;
    // Commander bits at lieutenant 1's slots; the mask decides lieutenant 0's.
    let a1: Vec<u8> = (0..M).map(|k| ((k * 5 + 1) % 3 % 2) as u8).collect();
    let mut entries = vec![None; 2 * M];
    let mut claim = BitVector::zeros(2 * M);
    for mask in 0..1u32 << M {
        for k in 0..M {
            let (p0, p1) = (s.anticorrelated_index(0, k).unwrap(), s.anticorrelated_index(1, k).unwrap());
            if mask >> k & 1 == 1 {
                entries[p0] = Some(order);
                entries[p1] = Some(a1[k]);
            } else {
                entries[p0] = None;
                entries[p1] = None;
            }
        }
        let v_own = CommandVector::from_entries(&s, 0, order, &entries).unwrap();
        let r = mask.count_ones();
        let passes = count_passes(mask, |mask, bits| {
            let claimed = deposit(mask, bits);
            for k in 0..M {
                claim.set(s.anticorrelated_index(1, k).unwrap(), (claimed >> k & 1) as u8);
            }
            check_lt_bv(&s, 0, &v_own, 1, &claim, &tol)
        });
        // Exactly the genuine anticorrelated claim survives; nothing to
        // compare against when no tuple is revealed.
        assert_eq!(passes, 1, "mask {mask:#x} (r = {r})");
    }
}
