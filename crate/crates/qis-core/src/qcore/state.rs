use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::density::DensityMatrix;
use super::unitary::UnitaryOp;
use super::{CZERO, INPUT_NORM_TOL, RANK_TOL, ZERO_PROB_TOL};
use crate::{QisError, Result};

pub type Amplitude = Complex64;

/// A normalized pure state of `num_qubits` qubits.
///
/// Amplitudes are stored big-endian: the bit of qubit position `p` inside a
/// basis index `i` is `(i >> (num_qubits - 1 - p)) & 1`, so position 0 is the
/// leftmost qubit of a ket label. A zero-qubit state (a single amplitude of
/// modulus one) is allowed; it is what remains after measuring every qubit.
#[derive(Debug, Clone)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from amplitudes whose squared norm is within
    /// `INPUT_NORM_TOL` of one, then renormalizes exactly.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = checked_qubit_count(amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QisError::NonFinite);
        }
        if (norm_sq - 1.0).abs() > INPUT_NORM_TOL {
            return Err(QisError::NotNormalized(norm_sq.sqrt(), INPUT_NORM_TOL));
        }
        Ok(Self::renormalized(n, amplitudes))
    }

    /// Builds a state from any nonzero amplitude vector, normalizing it.
    pub fn from_unnormalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = checked_qubit_count(amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QisError::NonFinite);
        }
        if norm_sq <= ZERO_PROB_TOL {
            return Err(QisError::NotNormalized(norm_sq.sqrt(), INPUT_NORM_TOL));
        }
        Ok(Self::renormalized(n, amplitudes))
    }

    /// The computational basis state `|index⟩` of `num_qubits` qubits.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(QisError::PositionOutOfRange { position: index, num_qubits });
        }
        let mut amps = vec![CZERO; dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Builds and normalizes a state from sparse `(basis index, amplitude)` terms.
    pub fn from_terms(num_qubits: usize, terms: &[(usize, Complex64)]) -> Result<Self> {
        let dim = 1usize << num_qubits;
        let mut amps = vec![CZERO; dim];
        for &(index, amp) in terms {
            if index >= dim {
                return Err(QisError::PositionOutOfRange { position: index, num_qubits });
            }
            amps[index] += amp;
        }
        Self::from_unnormalized(amps)
    }

    fn renormalized(num_qubits: usize, mut amps: Vec<Complex64>) -> Self {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(QisError::DimensionMismatch(format!(
                "inner product between {}-qubit and {}-qubit states",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// True when the states differ by at most a global phase.
    pub fn equal_up_to_global_phase(&self, other: &Self) -> Result<bool> {
        Ok(self.inner(other)?.norm() >= 1.0 - super::MATCH_TOL)
    }

    /// Kronecker product; `self` occupies the leading qubit positions.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { num_qubits: self.num_qubits + other.num_qubits, amps }
    }

    /// Applies `u` to the qubits at `targets` (in the order given).
    pub fn apply_unitary(&self, u: &UnitaryOp, targets: &[usize]) -> Result<Self> {
        check_targets(self.num_qubits, targets)?;
        if u.arity() != targets.len() {
            return Err(QisError::ArityMismatch { arity: u.arity(), targets: targets.len() });
        }
        let d = 1usize << targets.len();
        let t_off = offsets(self.num_qubits, targets);
        let rest = complement(self.num_qubits, targets);
        let r_off = offsets(self.num_qubits, &rest);
        let m = u.matrix();
        let mut out = vec![CZERO; self.amps.len()];
        let mut gathered = vec![CZERO; d];
        for &base in &r_off {
            for (c, g) in gathered.iter_mut().enumerate() {
                *g = self.amps[base | t_off[c]];
            }
            for r in 0..d {
                let mut acc = CZERO;
                for c in 0..d {
                    acc += m[(r, c)] * gathered[c];
                }
                out[base | t_off[r]] = acc;
            }
        }
        Ok(Self { num_qubits: self.num_qubits, amps: out })
    }

    /// Projects the qubits at `targets` onto `basis_vector`.
    ///
    /// Returns the outcome probability and, when it exceeds `ZERO_PROB_TOL`,
    /// the normalized residual state of the remaining qubits in their
    /// original order.
    pub fn project(
        &self,
        basis_vector: &Self,
        targets: &[usize],
    ) -> Result<(f64, Option<Self>)> {
        check_targets(self.num_qubits, targets)?;
        if basis_vector.num_qubits != targets.len() {
            return Err(QisError::ArityMismatch {
                arity: basis_vector.num_qubits,
                targets: targets.len(),
            });
        }
        let d = basis_vector.dim();
        let t_off = offsets(self.num_qubits, targets);
        let rest = complement(self.num_qubits, targets);
        let r_off = offsets(self.num_qubits, &rest);
        let mut residual = vec![CZERO; r_off.len()];
        for (slot, &base) in r_off.iter().enumerate() {
            let mut acc = CZERO;
            for (c, &t) in t_off.iter().enumerate().take(d) {
                acc += basis_vector.amps[c].conj() * self.amps[base | t];
            }
            residual[slot] = acc;
        }
        let p: f64 = residual.iter().map(|a| a.norm_sqr()).sum();
        if p <= ZERO_PROB_TOL {
            return Ok((p, None));
        }
        let scale = p.sqrt();
        for a in &mut residual {
            *a /= scale;
        }
        Ok((p, Some(Self { num_qubits: self.num_qubits - targets.len(), amps: residual })))
    }

    /// Density matrix of the qubits in `keep` after tracing out the rest.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(QisError::EmptyKeep);
        }
        check_targets(self.num_qubits, keep)?;
        let d = 1usize << keep.len();
        let k_off = offsets(self.num_qubits, keep);
        let rest = complement(self.num_qubits, keep);
        let r_off = offsets(self.num_qubits, &rest);
        let mut m = nalgebra::DMatrix::from_element(d, d, CZERO);
        for &base in &r_off {
            for r in 0..d {
                let ar = self.amps[base | k_off[r]];
                if ar == CZERO {
                    continue;
                }
                for c in 0..d {
                    m[(r, c)] += ar * self.amps[base | k_off[c]].conj();
                }
            }
        }
        DensityMatrix::new(m)
    }

    /// Schmidt rank across the bipartition `left` vs the remaining qubits:
    /// the number of Schmidt coefficients whose squared magnitude exceeds
    /// `RANK_TOL`.  The cutoff sits far above eigensolver noise (~1e-15)
    /// and far below any genuine coefficient of these protocols (≥ 1e-4).
    pub fn schmidt_rank(&self, left: &[usize]) -> Result<usize> {
        check_targets(self.num_qubits, left)?;
        if left.is_empty() || left.len() == self.num_qubits {
            return Err(QisError::InvalidPartition(
                "both sides of a Schmidt cut need at least one qubit".into(),
            ));
        }
        let rows = 1usize << left.len();
        let rest = complement(self.num_qubits, left);
        let cols = 1usize << rest.len();
        let l_off = offsets(self.num_qubits, left);
        let r_off = offsets(self.num_qubits, &rest);
        let m = nalgebra::DMatrix::from_fn(rows, cols, |r, c| self.amps[l_off[r] | r_off[c]]);
        // Eigenvalues of the smaller Gram matrix are the squared singular values.
        let gram = if rows <= cols { &m * m.adjoint() } else { m.adjoint() * &m };
        let eigs = super::density::hermitian_eigenvalues(&gram);
        Ok(eigs.iter().filter(|&&ev| ev > RANK_TOL).count())
    }
}

fn checked_qubit_count(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(QisError::BadLength(len));
    }
    Ok(len.trailing_zeros() as usize)
}

pub(crate) fn check_targets(num_qubits: usize, targets: &[usize]) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return Err(QisError::PositionOutOfRange { position: t, num_qubits });
        }
        if targets[..i].contains(&t) {
            return Err(QisError::DuplicateTarget(t));
        }
    }
    Ok(())
}

pub(crate) fn complement(num_qubits: usize, targets: &[usize]) -> Vec<usize> {
    (0..num_qubits).filter(|p| !targets.contains(p)).collect()
}

/// `offsets(n, positions)[pattern]` is the basis-index contribution of laying
/// the big-endian bits of `pattern` across `positions` of an `n`-qubit label.
pub(crate) fn offsets(num_qubits: usize, positions: &[usize]) -> Vec<usize> {
    let k = positions.len();
    (0..1usize << k)
        .map(|pattern| {
            let mut index = 0usize;
            for (j, &p) in positions.iter().enumerate() {
                if (pattern >> (k - 1 - j)) & 1 == 1 {
                    index |= 1 << (num_qubits - 1 - p);
                }
            }
            index
        })
        .collect()
}

/// A reproducible Haar-like random state: complex Gaussian amplitudes from a
/// seeded ChaCha stream, normalized.
pub fn random_state(num_qubits: usize, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << num_qubits;
    let mut amps = Vec::with_capacity(dim);
    for _ in 0..dim {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        amps.push(Complex64::new(re, im));
    }
    PureState::from_unnormalized(amps).expect("gaussian amplitudes have nonzero norm")
}
