//! Classical side of the agreement protocol: stream layout, command and bit
//! vectors, consistency checks, the lieutenant state machine, traitor
//! strategies and the per-shot driver.

mod adversary;
mod checks;
mod index;
mod lieutenant;
mod shot;
mod vectors;

pub use adversary::{RandomTraitor, StrategyKind, TraitorStrategy, TraitorView};
pub use checks::{
    check_alice, check_lt_bv, check_lt_bv_verdict, check_lt_cv, BitVectorVerdict,
    CheckTolerances,
};
pub use index::{anticorrelated_index, IndexScheme};
pub use lieutenant::{lieutenant_step, Decision, LieutenantState, RoundMessage};
pub use shot::{
    run_shot, run_shot_traced, run_shot_with_stream, LieutenantRecord, ShotConfig, ShotOutcome,
    TraitorPlacement,
};
pub use vectors::{build_command_vector, contradicts, decode_order, BitVector, CommandVector};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProtocolError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid vector: {0}")]
    InvalidVector(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("lieutenant {lieutenant} has no round {round} message from lieutenant {missing}")]
    Desync {
        lieutenant: usize,
        round: u8,
        missing: usize,
    },
    #[error("round {round} processed out of order")]
    OutOfOrder { round: u8 },
}
