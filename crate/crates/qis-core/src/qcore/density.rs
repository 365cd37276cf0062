use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CZERO, MATCH_TOL};
use crate::{QisError, Result};

/// Eigenvalues below this bound make a matrix fail the positivity check.
const PSD_TOL: f64 = 1e-9;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    num_qubits: usize,
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 || !m.nrows().is_power_of_two() {
            return Err(QisError::BadLength(m.nrows()));
        }
        let mut herm_dev: f64 = 0.0;
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                herm_dev = herm_dev.max((m[(r, c)] - m[(c, r)].conj()).norm());
            }
        }
        if herm_dev > MATCH_TOL {
            return Err(QisError::NotHermitian(herm_dev));
        }
        let trace: Complex64 = (0..m.nrows()).map(|i| m[(i, i)]).sum();
        if (trace - Complex64::new(1.0, 0.0)).norm() > MATCH_TOL {
            return Err(QisError::NotNormalized(trace.re, MATCH_TOL));
        }
        if let Some(&ev) = hermitian_eigenvalues(&m).iter().find(|&&ev| ev < -PSD_TOL) {
            return Err(QisError::NotPositive(ev));
        }
        Ok(Self { num_qubits: m.nrows().trailing_zeros() as usize, m })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    /// `⟨state|ρ|state⟩`, the fidelity against a pure state.
    pub fn fidelity_with_pure(&self, state: &super::PureState) -> Result<f64> {
        if state.dim() != self.dim() {
            return Err(QisError::DimensionMismatch(format!(
                "fidelity between a {}-qubit density matrix and a {}-qubit state",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        let mut acc = CZERO;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                acc += state.amplitude(r).conj() * self.m[(r, c)] * state.amplitude(c);
            }
        }
        Ok(acc.re)
    }

    /// Traces out all qubits except those at `keep` (positions relative to
    /// this matrix, big-endian).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(QisError::EmptyKeep);
        }
        super::state::check_targets(self.num_qubits, keep)?;
        let k_off = super::state::offsets(self.num_qubits, keep);
        let rest = super::state::complement(self.num_qubits, keep);
        let r_off = super::state::offsets(self.num_qubits, &rest);
        let d = 1usize << keep.len();
        let mut out = DMatrix::from_element(d, d, CZERO);
        for &base in &r_off {
            for r in 0..d {
                for c in 0..d {
                    out[(r, c)] += self.m[(base | k_off[r], base | k_off[c])];
                }
            }
        }
        Self::new(out)
    }
}

/// Trace distance `½‖p − q‖₁` between two density matrices.
pub fn trace_distance(p: &DensityMatrix, q: &DensityMatrix) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(QisError::DimensionMismatch(format!(
            "trace distance between dimensions {} and {}",
            p.dim(),
            q.dim()
        )));
    }
    let diff = p.matrix() - q.matrix();
    Ok(hermitian_eigenvalues(&diff).iter().map(|ev| ev.abs()).sum::<f64>() / 2.0)
}

/// Real eigenvalues of a Hermitian matrix, via the real embedding
/// `H ↦ [[Re H, −Im H], [Im H, Re H]]`, whose spectrum is that of `H` doubled.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let d = m.nrows();
    let embedded = nalgebra::DMatrix::<f64>::from_fn(2 * d, 2 * d, |r, c| {
        let (rb, ri) = (r % d, r / d);
        let (cb, ci) = (c % d, c / d);
        match (ri, ci) {
            (0, 0) | (1, 1) => m[(rb, cb)].re,
            (0, 1) => -m[(rb, cb)].im,
            _ => m[(rb, cb)].im,
        }
    });
    let mut eigs: Vec<f64> = embedded.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Doubled spectrum: keep every other value.
    eigs.into_iter().step_by(2).collect()
}
