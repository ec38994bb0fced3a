//! Discrete-event simulator for an entanglement-assisted detectable
//! Byzantine agreement protocol.

pub mod des;
pub mod experiments;
pub mod hardware;
pub mod protocol;
pub mod quantum;

/// Any failure surfaced by a simulation run.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Quantum(#[from] quantum::QuantumError),
    #[error(transparent)]
    Scheduling(#[from] des::SchedulingError),
    #[error(transparent)]
    Protocol(#[from] protocol::ProtocolError),
    #[error(transparent)]
    Hardware(#[from] hardware::HardwareError),
    #[error(transparent)]
    Config(#[from] experiments::ConfigError),
    #[error(transparent)]
    Metrics(#[from] experiments::MetricsError),
    #[error(transparent)]
    Output(#[from] experiments::OutputError),
    #[error("{0}")]
    Runtime(String),
}
