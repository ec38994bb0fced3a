//! Physical settings mapped onto link noise and detector noise.
//!
//! * Logical: ideal links; a Pauli channel hits each lieutenant-side qubit
//!   right before it is measured. Commander qubits stay clean.
//! * Superconducting: every transmitted qubit decays with amplitude damping
//!   then dephasing, with strengths set by the transit time.
//! * Photonic: every photon survives the fiber with probability
//!   `10^(-alpha L / 10)`. Unheralded losses read as bit 0; heralded ones
//!   are re-emitted.

use crate::des::{LossMode, NoiseHook, QuantumLink};
use crate::protocol::IndexScheme;
use crate::quantum::{
    decoherence_params, make_channel, survival_probability, ChannelSpec, PauliParams,
    QuantumError,
};

/// Group velocity of light in standard fiber, km/s.
pub const FIBER_LIGHT_SPEED_KM_PER_S: f64 = 2.0e5;

/// Bit recorded by a detector whose photon never arrived.
pub const LOST_PHOTON_BIT: u8 = 0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HardwareError {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HardwareProfile {
    Logical {
        pauli: PauliParams,
    },
    Superconducting {
        t1: f64,
        t2: f64,
        transit: f64,
        /// Replaces the T1/T2-derived dephasing strength when set.
        gamma2_override: Option<f64>,
    },
    Photonic {
        alpha: f64,
        length: f64,
        loss_mode: LossMode,
    },
}

impl HardwareProfile {
    pub fn noiseless() -> Self {
        HardwareProfile::Logical {
            pauli: PauliParams::noiseless(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            HardwareProfile::Logical { .. } => "logical",
            HardwareProfile::Superconducting { .. } => "superconducting",
            HardwareProfile::Photonic { .. } => "photonic",
        }
    }

    pub fn validate(&self) -> Result<(), HardwareError> {
        match *self {
            HardwareProfile::Logical { pauli } => {
                PauliParams::new(pauli.p0, pauli.px, pauli.py, pauli.pz)?;
            }
            HardwareProfile::Superconducting {
                t1,
                t2,
                transit,
                gamma2_override,
            } => {
                decoherence_params(transit, t1, t2)?;
                if let Some(g) = gamma2_override {
                    if !(0.0..=1.0).contains(&g) {
                        return Err(HardwareError::InvalidProfile(format!(
                            "gamma2 override {g} outside [0, 1]"
                        )));
                    }
                }
            }
            HardwareProfile::Photonic {
                alpha,
                length,
                loss_mode,
            } => {
                if !(alpha >= 0.0) {
                    return Err(HardwareError::InvalidProfile(format!("alpha {alpha} < 0")));
                }
                if !(length > 0.0) {
                    return Err(HardwareError::InvalidProfile(format!(
                        "fiber length {length} must be positive"
                    )));
                }
                if loss_mode == LossMode::None {
                    return Err(HardwareError::InvalidProfile(
                        "photonic profile needs heralded or unheralded loss".into(),
                    ));
                }
                if loss_mode == LossMode::Heralded && survival_probability(alpha, length)? == 0.0 {
                    return Err(HardwareError::InvalidProfile(
                        "heralded loss with zero survival never delivers a pair".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// One-way distributor-to-node latency.
    pub fn link_delay(&self) -> f64 {
        match *self {
            HardwareProfile::Logical { .. } => 0.0,
            HardwareProfile::Superconducting { transit, .. } => transit,
            HardwareProfile::Photonic { length, .. } => length / FIBER_LIGHT_SPEED_KM_PER_S,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Commander,
    Lieutenant,
}

/// Ordered noise hooks installed for one side of the network.
pub fn noise_hooks_for(
    profile: &HardwareProfile,
    side: Side,
    transit: f64,
) -> Result<Vec<NoiseHook>, HardwareError> {
    profile.validate()?;
    Ok(match *profile {
        HardwareProfile::Logical { pauli } => match side {
            Side::Commander => Vec::new(),
            Side::Lieutenant => vec![NoiseHook::Channel(make_channel(ChannelSpec::Pauli(pauli))?)],
        },
        HardwareProfile::Superconducting {
            t1,
            t2,
            gamma2_override,
            ..
        } => {
            let (gamma1, gamma2) = decoherence_params(transit, t1, t2)?;
            let gamma2 = gamma2_override.unwrap_or(gamma2);
            vec![
                NoiseHook::Channel(make_channel(ChannelSpec::AmplitudeDamping { gamma: gamma1 })?),
                NoiseHook::Channel(make_channel(ChannelSpec::Dephasing { gamma: gamma2 })?),
            ]
        }
        HardwareProfile::Photonic { alpha, length, .. } => vec![NoiseHook::Loss {
            survival: survival_probability(alpha, length)?,
        }],
    })
}

/// Node numbering: 0 is the commander, `i + 1` is lieutenant `i`, and the
/// distributor sits at `n`.
#[derive(Debug, Clone)]
pub struct Network {
    pub players: usize,
    /// Distributor-to-node link for each player.
    pub links: Vec<QuantumLink>,
    /// Applied to each node's qubits just before measurement.
    pub measurement_hooks: Vec<Vec<NoiseHook>>,
    pub loss_mode: LossMode,
    pub lost_bit: u8,
}

impl Network {
    pub fn distributor(&self) -> usize {
        self.players
    }

    pub fn commander_node() -> usize {
        0
    }

    pub fn lieutenant_node(i: usize) -> usize {
        i + 1
    }
}

pub fn build_network(
    profile: &HardwareProfile,
    scheme: &IndexScheme,
) -> Result<Network, HardwareError> {
    profile.validate()?;
    let n = scheme.players();
    let delay = profile.link_delay();
    let side_of = |node: usize| if node == 0 { Side::Commander } else { Side::Lieutenant };
    let loss_mode = match profile {
        HardwareProfile::Photonic { loss_mode, .. } => *loss_mode,
        _ => LossMode::None,
    };
    let mut links = Vec::with_capacity(n);
    let mut measurement_hooks = Vec::with_capacity(n);
    for node in 0..n {
        let hooks = noise_hooks_for(profile, side_of(node), delay)?;
        let (link_hooks, meas_hooks) = match profile {
            HardwareProfile::Logical { .. } => (Vec::new(), hooks),
            _ => (hooks, Vec::new()),
        };
        links.push(QuantumLink {
            from: n,
            to: node,
            delay,
            hooks: link_hooks,
            loss_mode,
        });
        measurement_hooks.push(meas_hooks);
    }
    Ok(Network {
        players: n,
        links,
        measurement_hooks,
        loss_mode,
        lost_bit: LOST_PHOTON_BIT,
    })
}
