//! Kraus-form noise channels on a single qubit, plus the physical parameter
//! laws (T1/T2 decay, fiber attenuation) that feed them.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{DensityMatrix, QuantumError};

pub const COMPLETENESS_TOL: f64 = 1e-12;
const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Identity,
    Pauli,
    AmplitudeDamping,
    Dephasing,
    Composite,
}

/// Probabilities of applying I, X, Y, Z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliParams {
    pub p0: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl PauliParams {
    pub fn new(p0: f64, px: f64, py: f64, pz: f64) -> Result<Self, QuantumError> {
        for (name, v) in [("p0", p0), ("px", px), ("py", py), ("pz", pz)] {
            check_unit(name, v)?;
        }
        let sum = p0 + px + py + pz;
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(QuantumError::InvalidParameter {
                name: "p0+px+py+pz",
                value: sum,
            });
        }
        Ok(Self { p0, px, py, pz })
    }

    pub fn noiseless() -> Self {
        Self { p0: 1.0, px: 0.0, py: 0.0, pz: 0.0 }
    }
}

/// Parameterization accepted by [`make_channel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    Identity,
    Pauli(PauliParams),
    AmplitudeDamping { gamma: f64 },
    Dephasing { gamma: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    kind: ChannelKind,
    operators: Vec<DMatrix<Complex64>>,
}

impl KrausChannel {
    /// Builds a channel from raw operators, enforcing `sum K^dag K = I`.
    pub fn from_operators(
        kind: ChannelKind,
        operators: Vec<DMatrix<Complex64>>,
    ) -> Result<Self, QuantumError> {
        let dim = operators
            .first()
            .map(|k| k.nrows())
            .ok_or_else(|| QuantumError::Shape("empty Kraus set".into()))?;
        if operators.iter().any(|k| k.shape() != (dim, dim)) {
            return Err(QuantumError::Shape("Kraus operators differ in shape".into()));
        }
        let channel = Self { kind, operators };
        let err = channel.completeness_error();
        if err > COMPLETENESS_TOL {
            return Err(QuantumError::Constraint(format!(
                "Kraus set is not trace preserving (deviation {err:e})"
            )));
        }
        Ok(channel)
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn operators(&self) -> &[DMatrix<Complex64>] {
        &self.operators
    }

    /// Max-entry deviation of `sum K^dag K` from the identity.
    pub fn completeness_error(&self) -> f64 {
        let dim = self.operators[0].nrows();
        let sum = self
            .operators
            .iter()
            .fold(DMatrix::<Complex64>::zeros(dim, dim), |acc, k| acc + k.adjoint() * k);
        (sum - DMatrix::<Complex64>::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Sequential composition: `self` acts first, then `next`.
    pub fn then(&self, next: &KrausChannel) -> Result<KrausChannel, QuantumError> {
        let operators = next
            .operators
            .iter()
            .flat_map(|b| self.operators.iter().map(move |a| b * a))
            .collect();
        KrausChannel::from_operators(ChannelKind::Composite, operators)
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<(), QuantumError> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(QuantumError::InvalidParameter { name, value });
    }
    Ok(())
}

fn mat2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[a, b, c, d])
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn make_channel(spec: ChannelSpec) -> Result<KrausChannel, QuantumError> {
    let zero = re(0.0);
    let one = re(1.0);
    match spec {
        ChannelSpec::Identity => KrausChannel::from_operators(
            ChannelKind::Identity,
            vec![DMatrix::identity(2, 2)],
        ),
        ChannelSpec::Pauli(p) => {
            let p = PauliParams::new(p.p0, p.px, p.py, p.pz)?;
            let i = Complex64::new(0.0, 1.0);
            let paulis = [
                (p.p0, mat2(one, zero, zero, one)),
                (p.px, mat2(zero, one, one, zero)),
                (p.py, mat2(zero, -i, i, zero)),
                (p.pz, mat2(one, zero, zero, -one)),
            ];
            // Zero-weight terms are dropped; they contribute nothing.
            let ops = paulis
                .into_iter()
                .filter(|(w, _)| *w > 0.0)
                .map(|(w, m)| m * re(w.sqrt()))
                .collect();
            KrausChannel::from_operators(ChannelKind::Pauli, ops)
        }
        ChannelSpec::AmplitudeDamping { gamma } => {
            check_unit("gamma", gamma)?;
            KrausChannel::from_operators(
                ChannelKind::AmplitudeDamping,
                vec![
                    mat2(one, zero, zero, re((1.0 - gamma).sqrt())),
                    mat2(zero, re(gamma.sqrt()), zero, zero),
                ],
            )
        }
        ChannelSpec::Dephasing { gamma } => {
            check_unit("gamma", gamma)?;
            KrausChannel::from_operators(
                ChannelKind::Dephasing,
                vec![
                    mat2(one, zero, zero, re((1.0 - gamma).sqrt())),
                    mat2(zero, zero, zero, re(gamma.sqrt())),
                ],
            )
        }
    }
}

/// Relaxation inputs: `t1`, `t2` time constants and elapsed time `t`, all in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceParams {
    pub t1: f64,
    pub t2: f64,
    pub t: f64,
}

impl DecoherenceParams {
    pub fn new(t: f64, t1: f64, t2: f64) -> Result<Self, QuantumError> {
        if !(t1 > 0.0) {
            return Err(QuantumError::InvalidParameter { name: "t1", value: t1 });
        }
        if !(t2 > 0.0) {
            return Err(QuantumError::InvalidParameter { name: "t2", value: t2 });
        }
        if !(t >= 0.0) {
            return Err(QuantumError::InvalidParameter { name: "t", value: t });
        }
        if t1 < t2 / 2.0 {
            return Err(QuantumError::Constraint(format!(
                "T1 ({t1}) must be at least T2/2 ({})",
                t2 / 2.0
            )));
        }
        Ok(Self { t1, t2, t })
    }

    /// `(gamma1, gamma2)`: amplitude-damping and residual dephasing strengths.
    ///
    /// gamma2 excludes the dephasing already implied by amplitude damping,
    /// which is why T1 >= T2/2 is required.
    pub fn gammas(&self) -> (f64, f64) {
        let Self { t1, t2, t } = *self;
        let gamma1 = -(-t / t1).exp_m1();
        let gamma2 = -(-t * (2.0 * t1 - t2) / (2.0 * t1 * t2)).exp_m1();
        (gamma1, gamma2)
    }
}

pub fn decoherence_params(t: f64, t1: f64, t2: f64) -> Result<(f64, f64), QuantumError> {
    Ok(DecoherenceParams::new(t, t1, t2)?.gammas())
}

/// Photon survival through `length` km of fiber with attenuation `alpha` dB/km.
pub fn survival_probability(alpha: f64, length: f64) -> Result<f64, QuantumError> {
    if !(alpha >= 0.0) {
        return Err(QuantumError::InvalidParameter { name: "alpha", value: alpha });
    }
    if !(length >= 0.0) {
        return Err(QuantumError::InvalidParameter { name: "length", value: length });
    }
    Ok(10f64.powf(-alpha * length / 10.0))
}

/// Applies `channel` to qubit `target` of `state`.
pub fn apply_channel(
    state: &DensityMatrix,
    channel: &KrausChannel,
    target: usize,
) -> Result<DensityMatrix, QuantumError> {
    if channel.operators()[0].nrows() != 2 {
        return Err(QuantumError::Shape("channel must act on one qubit".into()));
    }
    let n = state.num_qubits();
    if target >= n {
        return Err(QuantumError::Shape(format!(
            "target qubit {target} out of range for {n}-qubit state"
        )));
    }
    let rho = state.matrix();
    let dim = state.dim();
    // Bit of the target qubit inside a basis index.
    let shift = n - 1 - target;
    let bit = |idx: usize| (idx >> shift) & 1;
    let with_bit = |idx: usize, b: usize| (idx & !(1 << shift)) | (b << shift);

    if channel.kind() == ChannelKind::Dephasing {
        // Closed form: populations are untouched, coherences across the
        // target qubit shrink by sqrt(1 - gamma).
        let k0 = channel.operators()[0][(1, 1)];
        let mut out = rho.clone();
        for r in 0..dim {
            for c in 0..dim {
                if bit(r) != bit(c) {
                    out[(r, c)] *= k0;
                }
            }
        }
        return DensityMatrix::from_raw(out);
    }

    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for k in channel.operators() {
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..2 {
                    let kr = k[(bit(r), a)];
                    if kr == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for b in 0..2 {
                        let kc = k[(bit(c), b)].conj();
                        acc += kr * rho[(with_bit(r, a), with_bit(c, b))] * kc;
                    }
                }
                out[(r, c)] += acc;
            }
        }
    }
    DensityMatrix::from_raw(out)
}
