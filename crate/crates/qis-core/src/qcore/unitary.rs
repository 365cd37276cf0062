use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CONE, CZERO, MATCH_TOL};
use crate::{QisError, Result};

/// A unitary on `arity` qubits, validated at construction.
#[derive(Debug, Clone)]
pub struct UnitaryOp {
    arity: usize,
    m: DMatrix<Complex64>,
}

impl UnitaryOp {
    /// Wraps a square matrix of power-of-two dimension after checking
    /// `‖U†U − I‖∞ ≤ MATCH_TOL`.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 || !m.nrows().is_power_of_two() {
            return Err(QisError::BadLength(m.nrows()));
        }
        if m.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QisError::NonFinite);
        }
        let arity = m.nrows().trailing_zeros() as usize;
        let op = Self { arity, m };
        let dev = op.unitarity_deviation();
        if dev > MATCH_TOL {
            return Err(QisError::NotUnitary(dev));
        }
        Ok(op)
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(QisError::BadLength(n));
        }
        Self::new(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
    }

    pub fn identity(arity: usize) -> Self {
        let d = 1usize << arity;
        Self { arity, m: DMatrix::from_fn(d, d, |r, c| if r == c { CONE } else { CZERO }) }
    }

    pub fn pauli_x() -> Self {
        Self::from_reals(&[[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn pauli_y() -> Self {
        let i = Complex64::new(0.0, 1.0);
        Self { arity: 1, m: DMatrix::from_row_slice(2, 2, &[CZERO, -i, i, CZERO]) }
    }

    /// `iσ_y = [[0, 1], [-1, 0]]`, the real rotation used as a correction.
    pub fn i_pauli_y() -> Self {
        Self::from_reals(&[[0.0, 1.0], [-1.0, 0.0]])
    }

    pub fn pauli_z() -> Self {
        Self::from_reals(&[[1.0, 0.0], [0.0, -1.0]])
    }

    pub fn hadamard() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_reals(&[[r, r], [r, -r]])
    }

    pub fn phase_s() -> Self {
        let i = Complex64::new(0.0, 1.0);
        Self { arity: 1, m: DMatrix::from_row_slice(2, 2, &[CONE, CZERO, CZERO, i]) }
    }

    /// CNOT with the first target as control.
    pub fn cnot() -> Self {
        Self::from_reals(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ])
    }

    /// CNOT with the second target as control.
    pub fn cnot_reversed() -> Self {
        Self::from_reals(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ])
    }

    fn from_reals<const N: usize>(rows: &[[f64; N]; N]) -> Self {
        let m = DMatrix::from_fn(N, N, |r, c| Complex64::new(rows[r][c], 0.0));
        Self { arity: N.trailing_zeros() as usize, m }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn dagger(&self) -> Self {
        Self { arity: self.arity, m: self.m.adjoint() }
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(QisError::DimensionMismatch(format!(
                "composing a {}-qubit with a {}-qubit unitary",
                self.arity, other.arity
            )));
        }
        Ok(Self { arity: self.arity, m: &self.m * &other.m })
    }

    /// Kronecker product; `self` acts on the leading qubits.
    pub fn kron(&self, other: &Self) -> Self {
        Self { arity: self.arity + other.arity, m: self.m.kronecker(&other.m) }
    }

    /// `max_{r,c} |(U†U − I)_{rc}|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let product = self.m.adjoint() * &self.m;
        let d = self.m.nrows();
        let mut dev: f64 = 0.0;
        for r in 0..d {
            for c in 0..d {
                let want = if r == c { CONE } else { CZERO };
                dev = dev.max((product[(r, c)] - want).norm());
            }
        }
        dev
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// True when the matrices agree after removing a global phase.
    pub fn equal_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let pivot = match self.m.iter().position(|a| a.norm() > 0.5 / self.dim() as f64) {
            Some(p) => p,
            None => return false,
        };
        let b = other.m.as_slice()[pivot];
        if b.norm() < 1e-12 {
            return false;
        }
        let phase = self.m.as_slice()[pivot] / b;
        self.m
            .iter()
            .zip(other.m.iter())
            .all(|(a, o)| (a - o * phase).norm() <= tol)
    }

    /// True when every row and column carries exactly one entry of modulus one
    /// with phase in `{1, −1, i, −i}` (tolerance 1e-8).
    pub fn is_signed_permutation(&self) -> bool {
        const TOL: f64 = 1e-8;
        let d = self.dim();
        let mut col_used = vec![false; d];
        for r in 0..d {
            let mut hit = None;
            for c in 0..d {
                let a = self.m[(r, c)];
                if a.norm() > TOL {
                    if (a.norm() - 1.0).abs() > TOL {
                        return false;
                    }
                    let phase_ok = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]
                        .iter()
                        .any(|&(re, im)| (a - Complex64::new(re, im)).norm() <= TOL);
                    if !phase_ok || hit.is_some() {
                        return false;
                    }
                    hit = Some(c);
                }
            }
            match hit {
                Some(c) if !col_used[c] => col_used[c] = true,
                _ => return false,
            }
        }
        true
    }

    /// Names a single-qubit correction drawn from `{I, σx, iσy, σz}`, up to
    /// global phase.
    pub fn pauli_name(&self) -> Option<&'static str> {
        if self.arity != 1 {
            return None;
        }
        for (name, op) in [
            ("identity", Self::identity(1)),
            ("pauli-x", Self::pauli_x()),
            ("i-pauli-y", Self::i_pauli_y()),
            ("pauli-z", Self::pauli_z()),
        ] {
            if self.equal_up_to_phase(&op, 1e-8) {
                return Some(name);
            }
        }
        None
    }
}
