use std::collections::BTreeMap;

use serde::Serialize;

use super::correction::CorrectionEntry;
use crate::qcore::{PureState, QubitLabel, Register};
use crate::{QisError, Result};

/// Serializable snapshot of a labeled state. Amplitudes are `[re, im]`
/// pairs in basis-index order (big-endian over `label_order`).
#[derive(Debug, Clone, Serialize)]
pub struct StateDoc {
    pub num_qubits: usize,
    pub label_order: Vec<String>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateDoc {
    pub fn from_register(reg: &Register) -> Self {
        Self {
            num_qubits: reg.num_qubits(),
            label_order: reg.label_strings(),
            amplitudes: reg.state().amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn from_state(state: &PureState, labels: &[QubitLabel]) -> Self {
        Self {
            num_qubits: state.num_qubits(),
            label_order: labels.iter().map(QubitLabel::to_string).collect(),
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

/// A classical message one party sends another after measuring.
#[derive(Debug, Clone, Serialize)]
pub struct ClassicalMessage {
    pub from: String,
    pub to: String,
    pub bits: u32,
    pub payload: usize,
}

/// The correction unitary attached to a branch, with its classification.
#[derive(Debug, Clone, Serialize)]
pub struct CorrectionDoc {
    pub arity: usize,
    /// Row-major complex entries as `[re, im]` pairs.
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub signed_permutation: bool,
    pub pauli: Option<String>,
}

impl CorrectionDoc {
    pub fn from_entry(entry: &CorrectionEntry) -> Self {
        let m = entry.unitary.matrix();
        let matrix = (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
            .collect();
        Self {
            arity: entry.unitary.arity(),
            matrix,
            signed_permutation: entry.signed_permutation,
            pauli: entry.pauli.map(str::to_string),
        }
    }
}

/// One fully resolved measurement branch.
#[derive(Debug, Clone, Serialize)]
pub struct BranchRecord {
    pub alice_outcome: usize,
    pub bob_outcome: usize,
    pub probability: f64,
    pub messages: Vec<ClassicalMessage>,
    pub charlie_pre_correction: StateDoc,
    pub correction: CorrectionDoc,
    pub charlie_final: StateDoc,
    pub fidelity: f64,
}

/// Basis outcomes that carried no probability (completion-added outcomes in
/// honest runs).
#[derive(Debug, Clone, Serialize)]
pub struct ZeroOutcomes {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

/// Full record of an enumerated protocol run.
#[derive(Debug, Clone, Serialize)]
pub struct ProtocolReport {
    pub protocol: String,
    pub channel: String,
    pub label_order: Vec<String>,
    pub secret: StateDoc,
    pub conversion_applied: bool,
    pub branches: Vec<BranchRecord>,
    pub zero_probability_outcomes: ZeroOutcomes,
    pub cbit_totals: BTreeMap<String, u32>,
    pub probability_sum: f64,
    pub all_fidelities_ok: bool,
}

/// Classical communication totals of a run, in bits per directed pair,
/// recomputed from the per-branch messages.
pub fn cbit_account(report: &ProtocolReport) -> Result<BTreeMap<String, u32>> {
    let first = report
        .branches
        .first()
        .ok_or_else(|| QisError::Internal("report carries no branches".into()))?;
    let mut totals: BTreeMap<String, u32> = BTreeMap::new();
    for m in &first.messages {
        *totals.entry(format!("{}->{}", m.from, m.to)).or_insert(0) += m.bits;
    }
    for b in &report.branches {
        let mut check: BTreeMap<String, u32> = BTreeMap::new();
        for m in &b.messages {
            *check.entry(format!("{}->{}", m.from, m.to)).or_insert(0) += m.bits;
        }
        if check != totals {
            return Err(QisError::Internal(format!(
                "branch ({}, {}) disagrees on message sizes",
                b.alice_outcome, b.bob_outcome
            )));
        }
    }
    Ok(totals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{run_protocol, random_secret_for, ProtocolId};

    #[test]
    fn cbit_account_recomputes_report_totals() {
        for p in ProtocolId::ALL {
            let report = run_protocol(p, &random_secret_for(p, 2)).unwrap();
            let account = cbit_account(&report).unwrap();
            assert_eq!(account, report.cbit_totals, "{p}");
        }
    }

    #[test]
    fn payloads_echo_the_outcome_indices() {
        let report =
            run_protocol(ProtocolId::HbbGhz, &random_secret_for(ProtocolId::HbbGhz, 3)).unwrap();
        for b in &report.branches {
            assert_eq!(b.messages[0].payload, b.alice_outcome);
            assert_eq!(b.messages[1].payload, b.bob_outcome);
            assert_eq!(b.messages[0].from, "alice");
            assert_eq!(b.messages[1].from, "bob");
            assert_eq!(b.messages[0].to, "charlie");
        }
    }

    #[test]
    fn state_docs_carry_labels_in_register_order() {
        let report =
            run_protocol(ProtocolId::C5Single, &random_secret_for(ProtocolId::C5Single, 4))
                .unwrap();
        assert_eq!(report.label_order, vec!["a", "1", "2", "3", "4", "5"]);
        for b in &report.branches {
            assert_eq!(b.charlie_pre_correction.label_order, vec!["5"]);
            assert_eq!(b.charlie_final.label_order, vec!["5"]);
            assert_eq!(b.charlie_pre_correction.amplitudes.len(), 2);
        }
    }
}
