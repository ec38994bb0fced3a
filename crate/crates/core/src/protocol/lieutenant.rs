//! The three-round classical phase run by each loyal lieutenant.

use std::collections::BTreeMap;

use super::checks::{check_alice, check_lt_bv_verdict, check_lt_cv, BitVectorVerdict};
use super::{contradicts, BitVector, CheckTolerances, CommandVector, IndexScheme, ProtocolError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Decision {
    Zero,
    One,
    Abort,
}

impl Decision {
    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Decision::Zero
        } else {
            Decision::One
        }
    }

    pub fn bit(self) -> Option<u8> {
        match self {
            Decision::Zero => Some(0),
            Decision::One => Some(1),
            Decision::Abort => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Zero => "0",
            Decision::One => "1",
            Decision::Abort => "abort",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundMessage {
    pub sender: usize,
    pub round: u8,
    pub decision: Decision,
    pub proofs: Vec<CommandVector>,
    pub bitvector_proof: Option<BitVector>,
}

/// Everything a loyal lieutenant knows, plus its decisions so far.
#[derive(Debug, Clone)]
pub struct LieutenantState {
    pub id: usize,
    pub scheme: IndexScheme,
    pub record: BitVector,
    pub order: u8,
    pub vector: CommandVector,
    decisions: [Option<Decision>; 3],
    vacuous_bv_checks: usize,
}

impl LieutenantState {
    pub fn new(
        id: usize,
        scheme: IndexScheme,
        record: BitVector,
        order: u8,
        vector: CommandVector,
    ) -> Self {
        Self {
            id,
            scheme,
            record,
            order,
            vector,
            decisions: [None; 3],
            vacuous_bv_checks: 0,
        }
    }

    /// Decision reached in `round` (1-based), if that round has run.
    pub fn decision(&self, round: u8) -> Option<Decision> {
        self.decisions.get(round as usize - 1).copied().flatten()
    }

    /// How many bit-vector checks passed only because the lieutenant's own
    /// command vector revealed nothing.
    pub fn vacuous_bv_checks(&self) -> usize {
        self.vacuous_bv_checks
    }

    fn cons_peer(&self, j: usize, v: &CommandVector, tol: &CheckTolerances) -> bool {
        check_lt_cv(&self.scheme, self.id, &self.record, j, v, tol)
    }

    /// Consistency of a forwarded proof, judged against the lieutenant it
    /// was addressed to.
    fn cons_forwarded(&self, v: &CommandVector, tol: &CheckTolerances) -> bool {
        if v.recipient() == self.id {
            check_alice(&self.scheme, self.id, &self.record, v, tol)
        } else {
            self.cons_peer(v.recipient(), v, tol)
        }
    }

    /// A round-1 claim is justified when its proof decodes to the claimed
    /// order and checks out (0/1), or the attached record checks out (abort).
    fn claim_validates(&mut self, msg: &RoundMessage, tol: &CheckTolerances) -> bool {
        match msg.decision.bit() {
            Some(x) => msg
                .proofs
                .first()
                .is_some_and(|v| v.order() == x && self.cons_peer(msg.sender, v, tol)),
            None => match &msg.bitvector_proof {
                Some(l_j) => {
                    let verdict = check_lt_bv_verdict(
                        &self.scheme,
                        self.id,
                        &self.vector,
                        msg.sender,
                        l_j,
                        tol,
                    );
                    if verdict == BitVectorVerdict::Vacuous {
                        self.vacuous_bv_checks += 1;
                    }
                    verdict != BitVectorVerdict::Fail
                }
                None => false,
            },
        }
    }

    fn peer_messages<'a>(
        &self,
        round: u8,
        inbox: &'a [RoundMessage],
    ) -> Result<Vec<&'a RoundMessage>, ProtocolError> {
        let mut by_sender: BTreeMap<usize, &RoundMessage> = BTreeMap::new();
        for msg in inbox.iter().filter(|m| m.round == round && m.sender != self.id) {
            by_sender.entry(msg.sender).or_insert(msg);
        }
        if let Some(missing) = (0..self.scheme.lieutenants())
            .filter(|&j| j != self.id)
            .find(|j| !by_sender.contains_key(j))
        {
            return Err(ProtocolError::Desync {
                lieutenant: self.id,
                round,
                missing,
            });
        }
        Ok(by_sender.into_values().collect())
    }

    fn message(&self, round: u8, decision: Decision, proofs: Vec<CommandVector>) -> RoundMessage {
        RoundMessage {
            sender: self.id,
            round,
            decision,
            proofs,
            bitvector_proof: (decision == Decision::Abort).then(|| self.record.clone()),
        }
    }
}

/// Runs one round for a loyal lieutenant. `inbox` must contain every peer's
/// messages from all earlier rounds; round 3 produces no outgoing message.
pub fn lieutenant_step(
    state: &mut LieutenantState,
    round: u8,
    inbox: &[RoundMessage],
    tol: &CheckTolerances,
) -> Result<(Decision, Option<RoundMessage>), ProtocolError> {
    match round {
        1 => {
            let d1 = if check_alice(&state.scheme, state.id, &state.record, &state.vector, tol) {
                Decision::from_bit(state.order)
            } else {
                Decision::Abort
            };
            state.decisions[0] = Some(d1);
            let msg = state.message(1, d1, vec![state.vector.clone()]);
            Ok((d1, Some(msg)))
        }
        2 => {
            let d1 = state.decisions[0].ok_or(ProtocolError::OutOfOrder { round })?;
            let r1 = state.peer_messages(1, inbox)?;
            let c = Decision::from_bit(state.order);
            let opposite = Decision::from_bit(1 - state.order);

            let mut validated = Vec::with_capacity(r1.len());
            for msg in &r1 {
                validated.push(state.claim_validates(msg, tol));
            }

            let challenged = d1 == c
                && r1
                    .iter()
                    .zip(&validated)
                    .any(|(m, &ok)| m.decision == opposite && ok);
            let unanimous = r1
                .first()
                .map(|m| m.decision)
                .filter(|&x| r1.iter().all(|m| m.decision == x))
                .filter(|_| validated.iter().all(|&ok| ok));

            // A unanimous abort claim only proves the claimants hold genuine
            // records, so it never overrides an order this node validated.
            let d2 = match unanimous {
                _ if challenged => Decision::Abort,
                Some(x) if x != Decision::Abort || d1 == Decision::Abort => x,
                _ => d1,
            };
            state.decisions[1] = Some(d2);

            let mut proofs = vec![state.vector.clone()];
            proofs.extend(
                r1.iter()
                    .filter_map(|m| m.proofs.first().map(|v| (m.sender, v)))
                    .filter(|(j, v)| state.cons_peer(*j, v, tol))
                    .map(|(_, v)| v.clone()),
            );
            Ok((d2, Some(state.message(2, d2, proofs))))
        }
        3 => {
            state.decisions[0].ok_or(ProtocolError::OutOfOrder { round })?;
            let own_order = Decision::from_bit(state.order);
            let d2 = state.decisions[1].ok_or(ProtocolError::OutOfOrder { round })?;
            let r1 = state.peer_messages(1, inbox)?;
            let r2 = state.peer_messages(2, inbox)?;

            let d3 = if d2 == Decision::Abort {
                Decision::Abort
            } else {
                let contradiction_shown = r2
                    .iter()
                    .filter(|m| m.decision == Decision::Abort)
                    .any(|m| {
                        let valid: Vec<&CommandVector> = m
                            .proofs
                            .iter()
                            .filter(|v| state.cons_forwarded(v, tol))
                            .collect();
                        valid.iter().enumerate().any(|(a, v1)| {
                            valid[a + 1..].iter().any(|v2| contradicts(v1, v2))
                        })
                    });
                let mut conflicting_claim = false;
                for msg in &r1 {
                    // Compared with the order received rather than d1, so a
                    // round-2 recovery survives but equivocation does not.
                    if msg.decision != Decision::Abort
                        && msg.decision != own_order
                        && state.claim_validates(msg, tol)
                    {
                        conflicting_claim = true;
                        break;
                    }
                }
                if contradiction_shown || conflicting_claim {
                    Decision::Abort
                } else {
                    d2
                }
            };
            state.decisions[2] = Some(d3);
            Ok((d3, None))
        }
        _ => Err(ProtocolError::OutOfOrder { round }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::build_command_vector;

    /// N=3 noiseless setup around a fixed commander record.
    struct Fixture {
        scheme: IndexScheme,
        a: BitVector,
        records: Vec<BitVector>,
    }

    fn fixture(m: usize) -> Fixture {
        let scheme = IndexScheme::new(3, m).unwrap();
        // Balanced record so that both orders reveal exactly m/2 tuples per lieutenant.
        let a: Vec<u8> = (0..scheme.stream_len())
            .map(|p| ((scheme.tuple(p) + scheme.slot(p)) % 2) as u8)
            .collect();
        let records = (0..2)
            .map(|i| {
                BitVector::new(
                    (0..a.len())
                        .map(|p| if scheme.slot(p) == i { 1 - a[p] } else { 0 })
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        Fixture {
            scheme,
            a: BitVector::new(a).unwrap(),
            records,
        }
    }

    fn loyal(f: &Fixture, i: usize, c: u8) -> LieutenantState {
        let v = build_command_vector(&f.a, &f.scheme, i, c).unwrap();
        LieutenantState::new(i, f.scheme, f.records[i].clone(), c, v)
    }

    fn run_all(states: &mut [LieutenantState], tol: &CheckTolerances) -> Vec<Decision> {
        let mut log = Vec::new();
        for round in 1..=3 {
            let mut out = Vec::new();
            for s in states.iter_mut() {
                let (_, msg) = lieutenant_step(s, round, &log, tol).unwrap();
                out.extend(msg);
            }
            log.extend(out);
        }
        states.iter().map(|s| s.decision(3).unwrap()).collect()
    }

    #[test]
    fn loyal_everyone_agrees() {
        let f = fixture(16);
        let tol = CheckTolerances::default();
        for c in 0..2 {
            let mut states = vec![loyal(&f, 0, c), loyal(&f, 1, c)];
            let d = run_all(&mut states, &tol);
            assert_eq!(d, vec![Decision::from_bit(c); 2]);
            for s in &states {
                assert_eq!(s.decision(1), Some(Decision::from_bit(c)));
                assert_eq!(s.decision(2), Some(Decision::from_bit(c)));
            }
        }
    }

    #[test]
    fn split_orders_from_traitorous_commander_abort() {
        let f = fixture(16);
        let tol = CheckTolerances::default();
        let mut states = vec![loyal(&f, 0, 0), loyal(&f, 1, 1)];
        let d = run_all(&mut states, &tol);
        assert_eq!(d, vec![Decision::Abort; 2]);
        // Each lieutenant accepted its own order first, then aborted in round 2.
        assert_eq!(states[0].decision(1), Some(Decision::Zero));
        assert_eq!(states[1].decision(1), Some(Decision::One));
        assert_eq!(states[0].decision(2), Some(Decision::Abort));
    }

    #[test]
    fn unanimous_peer_recovers_failed_check() {
        let f = fixture(16);
        let tol = CheckTolerances::default();
        let c = 1;
        let mut s0 = loyal(&f, 0, c);
        // Corrupt one live bit so the lieutenant's own check fails.
        let k = s0.vector.revealed_tuples().next().unwrap();
        let p = f.scheme.index(0, k);
        let flipped = 1 - s0.record.get(p);
        s0.record.set(p, flipped);
        let (d1, own_msg) = lieutenant_step(&mut s0, 1, &[], &tol).unwrap();
        let own_msg = own_msg.unwrap();
        assert_eq!(d1, Decision::Abort);
        assert!(own_msg.bitvector_proof.is_some());

        let mut s1 = loyal(&f, 1, c);
        let (_, peer_msg) = lieutenant_step(&mut s1, 1, &[], &tol).unwrap();
        let peer_msg = peer_msg.unwrap();
        assert_eq!(peer_msg.decision, Decision::One);
        assert!(peer_msg.bitvector_proof.is_none());
        let mut log = vec![own_msg, peer_msg];
        let (d2, m0) = lieutenant_step(&mut s0, 2, &log, &tol).unwrap();
        assert_eq!(d2, Decision::One);
        let (_, m1) = lieutenant_step(&mut s1, 2, &log, &tol).unwrap();
        log.extend([m0.unwrap(), m1.unwrap()]);
        // The recovery survives the final round for both.
        assert_eq!(lieutenant_step(&mut s0, 3, &log, &tol).unwrap().0, Decision::One);
        assert_eq!(lieutenant_step(&mut s1, 3, &log, &tol).unwrap().0, Decision::One);
    }

    #[test]
    fn mismatched_claim_is_not_a_challenge() {
        // A peer claiming the opposite order with a proof for c must not
        // unsettle a loyal lieutenant.
        let f = fixture(16);
        let tol = CheckTolerances::default();
        let mut s0 = loyal(&f, 0, 1);
        let v1 = build_command_vector(&f.a, &f.scheme, 1, 1).unwrap();
        let liar = RoundMessage {
            sender: 1,
            round: 1,
            decision: Decision::Zero,
            proofs: vec![v1],
            bitvector_proof: None,
        };
        lieutenant_step(&mut s0, 1, &[], &tol).unwrap();
        let (d2, _) = lieutenant_step(&mut s0, 2, std::slice::from_ref(&liar), &tol).unwrap();
        assert_eq!(d2, Decision::One);
    }

    #[test]
    fn recovery_toward_another_order_aborts() {
        // Lieutenant 0 was sent order 0 with a vector it rejects; the peer
        // holds a genuine vector for order 1.
        let f = fixture(16);
        let tol = CheckTolerances::default();
        let mut s0 = loyal(&f, 0, 0);
        s0.vector = build_command_vector(&f.a, &f.scheme, 1, 0).unwrap();
        let mut states = vec![s0, loyal(&f, 1, 1)];
        run_all(&mut states, &tol);
        assert_eq!(states[0].decision(1), Some(Decision::Abort));
        assert_eq!(states[0].decision(2), Some(Decision::One));
        assert_eq!(states[0].decision(3), Some(Decision::Abort));
    }

    #[test]
    fn genuine_abort_claim_keeps_validated_order() {
        let f = fixture(16);
        let tol = CheckTolerances::default();
        let mut s0 = loyal(&f, 0, 0);
        let abort = RoundMessage {
            sender: 1,
            round: 1,
            decision: Decision::Abort,
            proofs: vec![build_command_vector(&f.a, &f.scheme, 1, 0).unwrap()],
            bitvector_proof: Some(f.records[1].clone()),
        };
        lieutenant_step(&mut s0, 1, &[], &tol).unwrap();
        let (d2, _) = lieutenant_step(&mut s0, 2, std::slice::from_ref(&abort), &tol).unwrap();
        assert_eq!(d2, Decision::Zero);
    }

    #[test]
    fn missing_messages_desync() {
        let f = fixture(16);
        let tol = CheckTolerances::default();
        let mut s0 = loyal(&f, 0, 0);
        lieutenant_step(&mut s0, 1, &[], &tol).unwrap();
        let err = lieutenant_step(&mut s0, 2, &[], &tol).unwrap_err();
        assert_eq!(
            err,
            ProtocolError::Desync {
                lieutenant: 0,
                round: 1,
                missing: 1
            }
        );
        let mut fresh = loyal(&f, 0, 0);
        assert!(matches!(
            lieutenant_step(&mut fresh, 3, &[], &tol),
            Err(ProtocolError::OutOfOrder { .. })
        ));
    }
}
