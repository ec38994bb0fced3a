//! Exact density-matrix kernel for single qubits and EPR pairs.

mod channel;
mod state;

pub use channel::{
    apply_channel, decoherence_params, make_channel, survival_probability, ChannelKind,
    ChannelSpec, DecoherenceParams, KrausChannel, PauliParams, COMPLETENESS_TOL,
};
pub use state::{
    lose_qubit, make_state, DensityMatrix, StateKind, HERMITIAN_TOL, PSD_TOL, TRACE_TOL,
};

use rand::Rng;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
}

/// A terminal Z-basis measurement of every qubit in a state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    /// One bit per qubit, qubit 0 first.
    pub bits: Vec<u8>,
    pub probability: f64,
}

/// Samples a computational-basis outcome from the state's diagonal.
pub fn measure_z_all<R: Rng + ?Sized>(state: DensityMatrix, rng: &mut R) -> MeasurementOutcome {
    let populations: Vec<f64> = state.diagonal().into_iter().map(|p| p.max(0.0)).collect();
    let total: f64 = populations.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut picked = populations.len() - 1;
    for (k, p) in populations.iter().enumerate() {
        acc += p;
        if u < acc {
            picked = k;
            break;
        }
    }
    // Never report a zero-probability outcome because of rounding at the tail.
    while populations[picked] == 0.0 && picked > 0 {
        picked -= 1;
    }
    let n = state.num_qubits();
    let bits = (0..n).map(|q| ((picked >> (n - 1 - q)) & 1) as u8).collect();
    MeasurementOutcome {
        bits,
        probability: populations[picked] / total,
    }
}
