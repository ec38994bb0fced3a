use rand::Rng;

use super::{BitVector, CommandVector, Decision, RoundMessage};
use crate::des::RngStream;

/// What a traitorous lieutenant genuinely holds.
#[derive(Debug, Clone)]
pub struct TraitorView {
    pub id: usize,
    pub record: BitVector,
    pub order: u8,
    pub vector: CommandVector,
}

/// Pluggable behavior for traitorous lieutenants.
///
/// A traitor must answer every round (silence would desynchronize loyal
/// nodes); what it says is up to the strategy.
pub trait TraitorStrategy: Send {
    fn message(&mut self, view: &TraitorView, round: u8, inbox: &[RoundMessage]) -> RoundMessage;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Loyal,
    RandomTraitor,
}

/// Picks a uniform decision from {0, 1, abort} each round and backs it with
/// the proof material it actually received.
#[derive(Debug, Clone)]
pub struct RandomTraitor {
    rng: RngStream,
}

impl RandomTraitor {
    pub fn new(rng: RngStream) -> Self {
        Self { rng }
    }
}

impl TraitorStrategy for RandomTraitor {
    fn message(&mut self, view: &TraitorView, round: u8, _inbox: &[RoundMessage]) -> RoundMessage {
        let decision = match self.rng.random_range(0..3u8) {
            0 => Decision::Zero,
            1 => Decision::One,
            _ => Decision::Abort,
        };
        RoundMessage {
            sender: view.id,
            round,
            decision,
            proofs: vec![view.vector.clone()],
            bitvector_proof: (decision == Decision::Abort).then(|| view.record.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{build_command_vector, IndexScheme};

    #[test]
    fn random_traitor_is_seeded_and_uniformish() {
        let s = IndexScheme::new(3, 4).unwrap();
        let a = BitVector::new(vec![0, 1, 1, 0, 0, 1, 1, 0]).unwrap();
        let view = TraitorView {
            id: 1,
            record: a.clone(),
            order: 0,
            vector: build_command_vector(&a, &s, 1, 0).unwrap(),
        };
        let run = |seed| {
            let mut t = RandomTraitor::new(RngStream::new(seed));
            (0..3000)
                .map(|r| t.message(&view, (r % 3 + 1) as u8, &[]))
                .collect::<Vec<_>>()
        };
        let a_msgs = run(5);
        assert_eq!(a_msgs, run(5));
        for d in [Decision::Zero, Decision::One, Decision::Abort] {
            let n = a_msgs.iter().filter(|m| m.decision == d).count();
            assert!((800..1200).contains(&n), "{d:?}: {n}");
        }
        assert!(a_msgs
            .iter()
            .all(|m| m.bitvector_proof.is_some() == (m.decision == Decision::Abort)));
        assert!(a_msgs.iter().all(|m| m.proofs == vec![view.vector.clone()]));
    }
}
