use std::fmt;
use std::str::FromStr;

use super::density::DensityMatrix;
use super::state::PureState;
use super::unitary::UnitaryOp;
use crate::{QisError, Result};

/// A named qubit slot: the secret qubits `a` and `a'`, numbered channel
/// qubits, or an eavesdropper's ancilla `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QubitLabel {
    SecretA,
    SecretAPrime,
    Channel(u8),
    EveAncilla,
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QubitLabel::SecretA => write!(f, "a"),
            QubitLabel::SecretAPrime => write!(f, "a'"),
            QubitLabel::Channel(k) => write!(f, "{k}"),
            QubitLabel::EveAncilla => write!(f, "E"),
        }
    }
}

impl FromStr for QubitLabel {
    type Err = QisError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(QubitLabel::SecretA),
            "a'" => Ok(QubitLabel::SecretAPrime),
            "E" => Ok(QubitLabel::EveAncilla),
            _ => s
                .parse::<u8>()
                .ok()
                .filter(|k| (1..=10).contains(k))
                .map(QubitLabel::Channel)
                .ok_or_else(|| QisError::UnknownLabel(s.to_string())),
        }
    }
}

/// A pure state whose qubit positions carry protocol labels.
#[derive(Debug, Clone)]
pub struct Register {
    state: PureState,
    labels: Vec<QubitLabel>,
}

impl Register {
    pub fn new(state: PureState, labels: Vec<QubitLabel>) -> Result<Self> {
        if state.num_qubits() != labels.len() {
            return Err(QisError::DimensionMismatch(format!(
                "{} label(s) for a {}-qubit state",
                labels.len(),
                state.num_qubits()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(QisError::DuplicateLabel(l.to_string()));
            }
        }
        Ok(Self { state, labels })
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels.iter().map(QubitLabel::to_string).collect()
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn position_of(&self, label: QubitLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| *l == label)
            .ok_or_else(|| QisError::UnknownLabel(label.to_string()))
    }

    pub fn positions(&self, labels: &[QubitLabel]) -> Result<Vec<usize>> {
        labels.iter().map(|&l| self.position_of(l)).collect()
    }

    /// Kronecker product; labels must be disjoint.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut labels = self.labels.clone();
        for l in &other.labels {
            if labels.contains(l) {
                return Err(QisError::DuplicateLabel(l.to_string()));
            }
            labels.push(*l);
        }
        Ok(Self { state: self.state.tensor(&other.state), labels })
    }

    pub fn apply_unitary(&self, u: &UnitaryOp, targets: &[QubitLabel]) -> Result<Self> {
        let positions = self.positions(targets)?;
        Ok(Self {
            state: self.state.apply_unitary(u, &positions)?,
            labels: self.labels.clone(),
        })
    }

    /// Projects the labeled targets onto `basis_vector`; the residual keeps
    /// the remaining labels in their original order.
    pub fn project(
        &self,
        basis_vector: &PureState,
        targets: &[QubitLabel],
    ) -> Result<(f64, Option<Self>)> {
        let positions = self.positions(targets)?;
        let (p, residual) = self.state.project(basis_vector, &positions)?;
        let labels: Vec<QubitLabel> = self
            .labels
            .iter()
            .copied()
            .filter(|l| !targets.contains(l))
            .collect();
        Ok((p, residual.map(|state| Self { state, labels })))
    }

    pub fn reduced_density(&self, keep: &[QubitLabel]) -> Result<DensityMatrix> {
        self.state.reduced_density(&self.positions(keep)?)
    }

    pub fn schmidt_rank(&self, left: &[QubitLabel]) -> Result<usize> {
        self.state.schmidt_rank(&self.positions(left)?)
    }
}
