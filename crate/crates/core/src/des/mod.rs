//! Deterministic discrete-event engine: event queue, quantum links and
//! reproducible random streams.

mod engine;
mod link;
mod rng;

pub use engine::{run_until_idle, schedule, Event, EventId, EventQueue, TraceEntry};
pub use link::{apply_hooks, transmit_qubit, ArrivalRecord, LossMode, NoiseHook, QuantumLink};
pub use rng::{fork_stream, RngStream};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchedulingError {
    #[error("cannot schedule at t={time} before the current clock t={now}")]
    InPast { time: f64, now: f64 },
}
