use rand::Rng;

use crate::quantum::{apply_channel, lose_qubit, DensityMatrix, KrausChannel, QuantumError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossMode {
    None,
    Heralded,
    Unheralded,
}

/// One step of per-qubit noise on a link or in front of a detector.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseHook {
    Channel(KrausChannel),
    /// The qubit survives with this probability.
    Loss { survival: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumLink {
    pub from: usize,
    pub to: usize,
    pub delay: f64,
    pub hooks: Vec<NoiseHook>,
    pub loss_mode: LossMode,
}

impl QuantumLink {
    pub fn identity(from: usize, to: usize) -> Self {
        Self {
            from,
            to,
            delay: 0.0,
            hooks: Vec::new(),
            loss_mode: LossMode::None,
        }
    }

    pub fn survival(&self) -> f64 {
        self.hooks
            .iter()
            .map(|h| match h {
                NoiseHook::Loss { survival } => *survival,
                NoiseHook::Channel(_) => 1.0,
            })
            .product()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalRecord {
    /// What remains of the transmitted system. When the qubit is lost this
    /// is the partner's reduced state, or `None` for a lone qubit.
    pub state: Option<DensityMatrix>,
    pub lost: bool,
    pub arrival_time: f64,
}

/// Sends qubit `target` of `state` across `link`, applying the hooks in order.
pub fn apply_hooks<R: Rng + ?Sized>(
    hooks: &[NoiseHook],
    loss_mode: LossMode,
    state: DensityMatrix,
    target: usize,
    rng: &mut R,
) -> Result<(Option<DensityMatrix>, bool), QuantumError> {
    let mut state = state;
    for hook in hooks {
        match hook {
            NoiseHook::Channel(ch) => state = apply_channel(&state, ch, target)?,
            NoiseHook::Loss { survival } => {
                if loss_mode == LossMode::None {
                    continue;
                }
                if rng.random::<f64>() >= *survival {
                    let rest = if state.num_qubits() == 2 {
                        Some(lose_qubit(&state, target)?)
                    } else {
                        None
                    };
                    return Ok((rest, true));
                }
            }
        }
    }
    Ok((Some(state), false))
}

pub fn transmit_qubit<R: Rng + ?Sized>(
    link: &QuantumLink,
    state: DensityMatrix,
    target: usize,
    now: f64,
    rng: &mut R,
) -> Result<ArrivalRecord, QuantumError> {
    let (state, lost) = apply_hooks(&link.hooks, link.loss_mode, state, target, rng)?;
    Ok(ArrivalRecord {
        state,
        lost,
        arrival_time: now + link.delay,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::des::RngStream;
    use crate::quantum::{
        decoherence_params, make_channel, make_state, measure_z_all, ChannelSpec, StateKind,
    };

    #[test]
    fn identity_link_is_transparent() {
        let mut rng = RngStream::new(1);
        let link = QuantumLink { delay: 2.5, ..QuantumLink::identity(0, 1) };
        let rho = make_state(StateKind::PsiPlus);
        let rec = transmit_qubit(&link, rho.clone(), 1, 1.0, &mut rng).unwrap();
        assert_eq!(rec.state, Some(rho));
        assert!(!rec.lost);
        assert_eq!(rec.arrival_time, 3.5);
    }

    #[test]
    fn certain_loss_leaves_mixed_partner() {
        let mut rng = RngStream::new(2);
        let link = QuantumLink {
            hooks: vec![NoiseHook::Loss { survival: 0.0 }],
            loss_mode: LossMode::Unheralded,
            ..QuantumLink::identity(0, 1)
        };
        for _ in 0..20 {
            let rec = transmit_qubit(&link, make_state(StateKind::PsiPlus), 1, 0.0, &mut rng).unwrap();
            assert!(rec.lost);
            let partner = rec.state.unwrap();
            assert_eq!(partner.dim(), 2);
            assert!((partner.entry(0, 0).re - 0.5).abs() < 1e-15);
            assert!(partner.entry(0, 1).norm() < 1e-15);
        }
        let rec = transmit_qubit(&link, make_state(StateKind::Plus), 0, 0.0, &mut rng).unwrap();
        assert!(rec.lost && rec.state.is_none());
    }

    #[test]
    fn loss_rate_matches_survival() {
        let p = 0.63;
        let n = 10_000;
        let mut rng = RngStream::new(3);
        let link = QuantumLink {
            hooks: vec![NoiseHook::Loss { survival: p }],
            loss_mode: LossMode::Heralded,
            ..QuantumLink::identity(0, 1)
        };
        let lost = (0..n)
            .filter(|_| {
                transmit_qubit(&link, make_state(StateKind::Plus), 0, 0.0, &mut rng)
                    .unwrap()
                    .lost
            })
            .count();
        let rate = lost as f64 / n as f64;
        assert!((rate - (1.0 - p)).abs() <= 4.0 * (p * (1.0 - p) / n as f64).sqrt());
    }

    #[test]
    fn loss_hooks_ignored_without_loss_mode() {
        let mut rng = RngStream::new(4);
        let link = QuantumLink {
            hooks: vec![NoiseHook::Loss { survival: 0.0 }],
            ..QuantumLink::identity(0, 1)
        };
        let rec = transmit_qubit(&link, make_state(StateKind::Plus), 0, 0.0, &mut rng).unwrap();
        assert!(!rec.lost);
    }

    #[test]
    fn damping_link_matches_closed_form() {
        // T1 chosen so the transit gives gamma1 = 0.5: P(00)=.25, P(01)=.25, P(10)=.5.
        let delay = 1e-6;
        let t1 = delay / std::f64::consts::LN_2;
        let (g1, _) = decoherence_params(delay, t1, t1).unwrap();
        assert!((g1 - 0.5).abs() < 1e-12);
        let link = QuantumLink {
            delay,
            hooks: vec![NoiseHook::Channel(
                make_channel(ChannelSpec::AmplitudeDamping { gamma: g1 }).unwrap(),
            )],
            ..QuantumLink::identity(0, 1)
        };
        let mut rng = RngStream::new(5);
        let rec = transmit_qubit(&link, make_state(StateKind::PsiPlus), 1, 0.0, &mut rng).unwrap();
        let diag = rec.state.clone().unwrap().diagonal();
        let expected = [0.25, 0.25, 0.5, 0.0];
        for (d, e) in diag.iter().zip(expected) {
            assert!((d - e).abs() < 1e-12);
        }
        let n = 10_000;
        let mut counts = [0usize; 4];
        for _ in 0..n {
            let out = measure_z_all(rec.state.clone().unwrap(), &mut rng);
            counts[(out.bits[0] * 2 + out.bits[1]) as usize] += 1;
        }
        for (c, p) in counts.iter().zip(expected) {
            let f = *c as f64 / n as f64;
            assert!((f - p).abs() <= 4.0 * (p * (1.0 - p) / n as f64).sqrt() + 1e-12);
        }
    }
}
