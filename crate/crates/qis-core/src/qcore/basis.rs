use num_complex::Complex64;

use super::label::{QubitLabel, Register};
use super::state::PureState;
use super::{CZERO, MATCH_TOL};
use crate::{QisError, Result};

/// Residuals with at least this norm survive orthonormal completion.
const COMPLETION_TOL: f64 = 1e-6;
/// Entries above this pick the canonical phase of a completed vector.
const PHASE_PIVOT_TOL: f64 = 1e-9;

/// An orthonormal measurement basis over a set of labeled qubits.
///
/// A basis may be listed only partially; the constructor completes it over
/// the standard kets, so `vectors()` always spans the full target space.
/// Outcomes at indices `>= listed_count()` belong to the completed part and
/// are expected to carry zero probability in honest protocol runs.
#[derive(Debug, Clone)]
pub struct MeasurementBasis {
    target_qubits: Vec<QubitLabel>,
    vectors: Vec<PureState>,
    listed_count: usize,
}

impl MeasurementBasis {
    pub fn new(target_qubits: Vec<QubitLabel>, listed: Vec<PureState>) -> Result<Self> {
        for (i, l) in target_qubits.iter().enumerate() {
            if target_qubits[..i].contains(l) {
                return Err(QisError::DuplicateLabel(l.to_string()));
            }
        }
        let dim = 1usize << target_qubits.len();
        if listed.is_empty() || listed.len() > dim {
            return Err(QisError::OversizedBasis { have: listed.len(), max: dim });
        }
        if let Some(v) = listed.iter().find(|v| v.dim() != dim) {
            return Err(QisError::ArityMismatch {
                arity: v.num_qubits(),
                targets: target_qubits.len(),
            });
        }
        let listed_count = listed.len();
        let vectors = complete_basis(&listed)?;
        Ok(Self { target_qubits, vectors, listed_count })
    }

    /// The same vectors re-addressed to different target qubits.
    pub fn with_targets(&self, target_qubits: Vec<QubitLabel>) -> Result<Self> {
        if target_qubits.len() != self.target_qubits.len() {
            return Err(QisError::ArityMismatch {
                arity: self.target_qubits.len(),
                targets: target_qubits.len(),
            });
        }
        Self::new(target_qubits, self.vectors[..self.listed_count].to_vec())
    }

    pub fn target_qubits(&self) -> &[QubitLabel] {
        &self.target_qubits
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }

    pub fn vector(&self, outcome: usize) -> &PureState {
        &self.vectors[outcome]
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn listed_count(&self) -> usize {
        self.listed_count
    }

    /// True when `outcome` indexes a caller-listed vector rather than a
    /// completion-added one.
    pub fn is_listed(&self, outcome: usize) -> bool {
        outcome < self.listed_count
    }
}

/// Extends pairwise-orthonormal vectors to a full orthonormal basis.
///
/// Standard kets are folded in by index order through Gram-Schmidt; residuals
/// with norm above 1e-6 are kept, normalized, and phased so that their first
/// entry of magnitude above 1e-9 is real positive. The listed vectors are
/// validated but never altered, so the completion is canonical.
pub fn complete_basis(listed: &[PureState]) -> Result<Vec<PureState>> {
    if listed.is_empty() {
        return Err(QisError::OversizedBasis { have: 0, max: 0 });
    }
    let n = listed[0].num_qubits();
    let dim = listed[0].dim();
    if listed.len() > dim {
        return Err(QisError::OversizedBasis { have: listed.len(), max: dim });
    }
    if let Some(v) = listed.iter().find(|v| v.dim() != dim) {
        return Err(QisError::DimensionMismatch(format!(
            "basis vector of {} qubit(s) among {}-qubit vectors",
            v.num_qubits(),
            n
        )));
    }
    let gram_dev = orthonormality_deviation(listed);
    if gram_dev > MATCH_TOL {
        return Err(QisError::NotOrthonormal(gram_dev));
    }
    let mut vectors: Vec<Vec<Complex64>> =
        listed.iter().map(|v| v.amplitudes().to_vec()).collect();
    for ket in 0..dim {
        if vectors.len() == dim {
            break;
        }
        let mut r = vec![CZERO; dim];
        r[ket] = Complex64::new(1.0, 0.0);
        for v in &vectors {
            let overlap = v[ket].conj();
            for (ri, vi) in r.iter_mut().zip(v) {
                *ri -= overlap * vi;
            }
        }
        let norm = r.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= COMPLETION_TOL {
            continue;
        }
        let pivot = r
            .iter()
            .find(|a| a.norm() / norm > PHASE_PIVOT_TOL)
            .copied()
            .expect("a vector of unit norm has an entry above the pivot threshold");
        let scale = pivot.conj() / (pivot.norm() * norm);
        for a in &mut r {
            *a *= scale;
        }
        vectors.push(r);
    }
    if vectors.len() < dim {
        return Err(QisError::CompletionFailed { got: vectors.len(), need: dim });
    }
    let out: Vec<PureState> = vectors
        .into_iter()
        .map(PureState::new)
        .collect::<Result<_>>()?;
    let dev = orthonormality_deviation(&out);
    if dev > MATCH_TOL {
        return Err(QisError::NotOrthonormal(dev));
    }
    Ok(out)
}

pub(crate) fn orthonormality_deviation(vectors: &[PureState]) -> f64 {
    let mut dev: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            let got = a.inner(b).map(|x| x.norm()).unwrap_or(f64::INFINITY);
            dev = dev.max((got - want).abs());
        }
    }
    dev
}

/// One projective outcome of measuring a register in a basis.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub outcome: usize,
    pub probability: f64,
    /// Residual register, absent when the probability is indistinguishable
    /// from zero.
    pub post: Option<Register>,
    /// Whether the outcome's vector was caller-listed or completion-added.
    pub listed: bool,
}

/// Measures the basis targets of `reg`, returning every outcome with its
/// probability and residual. Probabilities must sum to one.
pub fn enumerate_measurement(
    reg: &Register,
    basis: &MeasurementBasis,
) -> Result<Vec<MeasurementOutcome>> {
    let mut outcomes = Vec::with_capacity(basis.dim());
    let mut total = 0.0;
    for (k, v) in basis.vectors().iter().enumerate() {
        let (probability, post) = reg.project(v, basis.target_qubits())?;
        total += probability;
        outcomes.push(MeasurementOutcome {
            outcome: k,
            probability,
            post,
            listed: basis.is_listed(k),
        });
    }
    if (total - 1.0).abs() > MATCH_TOL {
        return Err(QisError::Internal(format!(
            "measurement probabilities sum to {total}, not 1"
        )));
    }
    Ok(outcomes)
}
