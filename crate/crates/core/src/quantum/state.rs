//! One- and two-qubit density matrices.
//!
//! Qubit 0 is the most significant position of the computational-basis
//! label, so for a pair the basis order is `|00>, |01>, |10>, |11>` with the
//! first character belonging to qubit 0.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::QuantumError;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Named pure states used by the distributor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    /// `(|01> + |10>)/sqrt(2)`
    PsiPlus,
    /// `(|00> - |11>)/sqrt(2)`
    PhiMinus,
    /// `(|0> + |1>)/sqrt(2)`
    Plus,
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wraps a square matrix after checking the shape and the density
    /// matrix invariants (Hermitian, unit trace, positive semidefinite).
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self, QuantumError> {
        let state = Self::from_raw(entries)?;
        state.validate()?;
        Ok(state)
    }

    /// Shape-checked constructor that skips the (eigenvalue) validation.
    pub(crate) fn from_raw(entries: DMatrix<Complex64>) -> Result<Self, QuantumError> {
        let (rows, cols) = entries.shape();
        if rows != cols || !(rows == 2 || rows == 4) {
            return Err(QuantumError::Shape(format!(
                "density matrix must be 2x2 or 4x4, got {rows}x{cols}"
            )));
        }
        Ok(Self { entries })
    }

    /// `|psi><psi|` for a normalized ket.
    pub fn from_ket(ket: &[Complex64]) -> Result<Self, QuantumError> {
        let v = nalgebra::DVector::from_column_slice(ket);
        Self::new(&v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        if self.dim() == 4 {
            2
        } else {
            1
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Computational-basis populations.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.entries[(k, k)].re).collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Checks all three density-matrix invariants.
    pub fn validate(&self) -> Result<(), QuantumError> {
        let herm_err = (&self.entries - self.entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm_err > HERMITIAN_TOL {
            return Err(QuantumError::InvalidState(format!(
                "not Hermitian (max deviation {herm_err:e})"
            )));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(QuantumError::InvalidState(format!("trace is {tr}")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -PSD_TOL {
            return Err(QuantumError::InvalidState(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        // Symmetrize first so rounding noise cannot leak into the solver.
        let herm = (&self.entries + self.entries.adjoint()).map(|z| z * 0.5);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Pure-state density matrix of the named state.
pub fn make_state(kind: StateKind) -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64| Complex64::new(re, 0.0);
    let ket: Vec<Complex64> = match kind {
        StateKind::PsiPlus => vec![c(0.0), c(h), c(h), c(0.0)],
        StateKind::PhiMinus => vec![c(h), c(0.0), c(0.0), c(-h)],
        StateKind::Plus => vec![c(h), c(h)],
        StateKind::Zero => vec![c(1.0), c(0.0)],
    };
    let v = nalgebra::DVector::from_vec(ket);
    DensityMatrix {
        entries: &v * v.adjoint(),
    }
}

/// Reduced state of the surviving qubit after `lost` leaves the system.
pub fn lose_qubit(state: &DensityMatrix, lost: usize) -> Result<DensityMatrix, QuantumError> {
    if state.num_qubits() != 2 {
        return Err(QuantumError::Shape(
            "lose_qubit needs a two-qubit state".into(),
        ));
    }
    if lost > 1 {
        return Err(QuantumError::Shape(format!("qubit index {lost} out of range")));
    }
    let rho = state.matrix();
    let mut out = DMatrix::<Complex64>::zeros(2, 2);
    for r in 0..2 {
        for c in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..2 {
                // Basis index is 2*q0 + q1; the traced qubit takes value t.
                let (ri, ci) = if lost == 0 {
                    (2 * t + r, 2 * t + c)
                } else {
                    (2 * r + t, 2 * c + t)
                };
                acc += rho[(ri, ci)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(DensityMatrix { entries: out })
}
