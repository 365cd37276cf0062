//! Eavesdropping simulation: Eve entangles an ancilla with one channel
//! qubit while it is in transit, and the run is enumerated with her ancilla
//! carried along.  The metrics answer two questions — does any measurement
//! branch leave Eve entangled with the receivers (monogamy), and do her
//! marginals depend on the secret at all (distinguishability).

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::protocols::{
    correction_table, definition, enumerate_raw, ownership, random_secret_for, validate_secret,
    Party, ProtocolDef, ProtocolId, StateDoc,
};
use crate::qcore::{
    trace_distance, DensityMatrix, PureState, QubitLabel, Register, UnitaryOp, MATCH_TOL,
};
use crate::{QisError, Result};

/// Eve's two-qubit interaction, applied to (tapped qubit, ancilla).
#[derive(Debug, Clone)]
pub enum AttackKind {
    /// Copies the tapped qubit's computational value onto the ancilla.
    Cnot,
    /// Prepares the ancilla in `|+⟩`, then flips the tapped qubit with it.
    XCopy,
    /// Caller-supplied two-qubit interaction.
    Custom(UnitaryOp),
}

impl AttackKind {
    pub fn label(&self) -> &'static str {
        match self {
            AttackKind::Cnot => "cnot",
            AttackKind::XCopy => "xcopy",
            AttackKind::Custom(_) => "custom",
        }
    }

    fn unitary(&self) -> Result<UnitaryOp> {
        match self {
            AttackKind::Cnot => Ok(UnitaryOp::cnot()),
            AttackKind::XCopy => UnitaryOp::cnot_reversed()
                .compose(&UnitaryOp::identity(1).kron(&UnitaryOp::hadamard())),
            AttackKind::Custom(u) => {
                if u.arity() != 2 {
                    return Err(QisError::ArityMismatch { arity: u.arity(), targets: 2 });
                }
                Ok(u.clone())
            }
        }
    }
}

/// A wiretap on one channel qubit.
#[derive(Debug, Clone)]
pub struct AttackSpec {
    pub protocol: ProtocolId,
    /// Which qubit Eve touches while it travels to Bob or Charlie.
    pub tapped_qubit: QubitLabel,
    pub attack: AttackKind,
    /// Stop after Alice's measurement, before Bob reveals anything.
    pub truncate_after_alice: bool,
}

/// One enumerated branch of an attacked run.
#[derive(Debug, Clone, Serialize)]
pub struct AttackBranch {
    pub alice_outcome: usize,
    /// `None` when the run was truncated after Alice's measurement.
    pub bob_outcome: Option<usize>,
    pub probability: f64,
    /// Schmidt rank across the (protocol qubits | ancilla) cut of the
    /// post-measurement state; rank 1 means Eve ends unentangled.
    pub eve_schmidt_rank: usize,
    /// Eve's reduced density matrix, row-major `[re, im]` entries.
    pub eve_marginal: Vec<Vec<[f64; 2]>>,
    /// Residual on the unmeasured qubits with the ancilla still attached.
    pub joint_state: StateDoc,
    /// Fidelity of Charlie's corrected marginal with the secret; absent for
    /// truncated runs and for outcomes that have no correction entry.
    pub corrected_fidelity: Option<f64>,
}

/// State after one of Alice's nonzero outcomes, before any conversion,
/// ancilla last.
#[derive(Debug, Clone, Serialize)]
pub struct AliceStageDoc {
    pub outcome: usize,
    pub probability: f64,
    pub state: StateDoc,
}

/// Full enumeration of a tapped run.
#[derive(Debug, Clone, Serialize)]
pub struct AttackReport {
    pub protocol: String,
    pub tapped_qubit: String,
    pub attack: String,
    pub truncated: bool,
    pub alice_stage_states: Vec<AliceStageDoc>,
    pub branches: Vec<AttackBranch>,
    /// Every branch leaves Eve unentangled from the protocol qubits.
    pub monogamy_ok: bool,
    pub min_corrected_fidelity: Option<f64>,
    /// Charlie still reconstructs the secret exactly in every branch.
    pub fidelity_ok: bool,
}

/// Builds a protocol's starting register with Eve's ancilla coupled to the
/// tapped channel qubit: `secret ⊗ U_attack(channel ⊗ |0⟩_E)`.
pub(crate) fn attacked_initial(
    spec: &AttackSpec,
    secret: &PureState,
) -> Result<(ProtocolDef, Register)> {
    validate_secret(spec.protocol, secret)?;
    let def = definition(spec.protocol);
    match ownership(spec.protocol).get(&spec.tapped_qubit) {
        Some(Party::Bob) | Some(Party::Charlie) => {}
        Some(owner) => {
            return Err(QisError::InvalidTap(
                spec.tapped_qubit.to_string(),
                format!("held by {owner}; only qubits in transit to Bob or Charlie can be tapped"),
            ));
        }
        None => {
            return Err(QisError::InvalidTap(
                spec.tapped_qubit.to_string(),
                format!("not part of {}", spec.protocol),
            ));
        }
    }
    let channel = Register::new(def.channel.clone(), def.channel_label_list())?;
    let ancilla = Register::new(PureState::basis_state(1, 0)?, vec![QubitLabel::EveAncilla])?;
    let tapped = channel.tensor(&ancilla)?.apply_unitary(
        &spec.attack.unitary()?,
        &[spec.tapped_qubit, QubitLabel::EveAncilla],
    )?;
    let secret_reg = Register::new(secret.clone(), def.secret_labels.clone())?;
    let initial = secret_reg.tensor(&tapped)?;
    Ok((def, initial))
}

/// Enumerates every branch of a tapped run and grades Eve's position.
pub fn run_attack(spec: &AttackSpec, secret: &PureState) -> Result<AttackReport> {
    let (def, initial) = attacked_initial(spec, secret)?;
    let raw = enumerate_raw(&def, &initial, false, spec.truncate_after_alice)?;
    let table = correction_table(spec.protocol);

    let mut branches = Vec::with_capacity(raw.branches.len());
    let mut monogamy_ok = true;
    let mut min_fidelity: Option<f64> = None;
    for rb in &raw.branches {
        let reg = &rb.pre_correction;
        let rank = reg.schmidt_rank(&[QubitLabel::EveAncilla])?;
        monogamy_ok &= rank == 1;
        let marginal = reg.reduced_density(&[QubitLabel::EveAncilla])?;
        let corrected_fidelity = match rb.bob {
            Some(bob) => match table.entries.get(&(rb.alice, bob)) {
                Some(entry) => {
                    let fixed = reg.apply_unitary(&entry.unitary, &def.charlie_labels)?;
                    let rho = fixed.reduced_density(&def.charlie_labels)?;
                    Some(rho.fidelity_with_pure(secret)?)
                }
                None => None,
            },
            None => None,
        };
        if let Some(f) = corrected_fidelity {
            min_fidelity = Some(min_fidelity.map_or(f, |m| m.min(f)));
        }
        branches.push(AttackBranch {
            alice_outcome: rb.alice,
            bob_outcome: rb.bob,
            probability: rb.probability,
            eve_schmidt_rank: rank,
            eve_marginal: density_entries(&marginal),
            joint_state: StateDoc::from_register(reg),
            corrected_fidelity,
        });
    }
    let fidelity_ok = !spec.truncate_after_alice
        && !branches.is_empty()
        && branches
            .iter()
            .all(|b| matches!(b.corrected_fidelity, Some(f) if f >= 1.0 - MATCH_TOL));
    Ok(AttackReport {
        protocol: spec.protocol.to_string(),
        tapped_qubit: spec.tapped_qubit.to_string(),
        attack: spec.attack.label().to_string(),
        truncated: spec.truncate_after_alice,
        alice_stage_states: raw
            .alice_stages
            .iter()
            .map(|s| AliceStageDoc {
                outcome: s.outcome,
                probability: s.probability,
                state: StateDoc::from_register(&s.post),
            })
            .collect(),
        branches,
        monogamy_ok,
        min_corrected_fidelity: min_fidelity,
        fidelity_ok,
    })
}

/// Largest trace distance between Eve's marginals for two different
/// secrets, maximized over matched measurement branches.  A branch carrying
/// probability for one secret but not the other counts as distance 1.
pub fn eve_information(
    spec: &AttackSpec,
    secret_one: &PureState,
    secret_two: &PureState,
) -> Result<f64> {
    let one = branch_marginals(spec, secret_one)?;
    let two = branch_marginals(spec, secret_two)?;
    let mut dmax: f64 = 0.0;
    for (key, rho_one) in &one {
        match two.get(key) {
            Some(rho_two) => dmax = dmax.max(trace_distance(rho_one, rho_two)?),
            None => dmax = dmax.max(1.0),
        }
    }
    for key in two.keys() {
        if !one.contains_key(key) {
            dmax = dmax.max(1.0);
        }
    }
    Ok(dmax)
}

/// How much a receiving party's unconditional view depends on the secret:
/// the largest trace distance between that party's probability-averaged
/// marginals for two seeded random secrets.  Bob's view is graded after
/// Alice's announcement-free measurement; Charlie's both there and after
/// Bob's measurement, before any correction.  Zero means the stage reveals
/// nothing about what is being shared.
pub fn party_blindness(id: ProtocolId, party: Party, seeds: (u64, u64)) -> Result<f64> {
    if !matches!(party, Party::Bob | Party::Charlie) {
        return Err(QisError::InvalidPartition(format!(
            "blindness is defined for the receiving parties, not {party}"
        )));
    }
    let views_one = averaged_marginals(id, party, &random_secret_for(id, seeds.0))?;
    let views_two = averaged_marginals(id, party, &random_secret_for(id, seeds.1))?;
    let mut dmax: f64 = 0.0;
    for (a, b) in views_one.iter().zip(&views_two) {
        dmax = dmax.max(trace_distance(a, b)?);
    }
    Ok(dmax)
}

fn branch_marginals(
    spec: &AttackSpec,
    secret: &PureState,
) -> Result<BTreeMap<(usize, Option<usize>), DensityMatrix>> {
    let (def, initial) = attacked_initial(spec, secret)?;
    let raw = enumerate_raw(&def, &initial, false, spec.truncate_after_alice)?;
    raw.branches
        .iter()
        .map(|rb| {
            let marginal = rb.pre_correction.reduced_density(&[QubitLabel::EveAncilla])?;
            Ok(((rb.alice, rb.bob), marginal))
        })
        .collect()
}

fn averaged_marginals(id: ProtocolId, party: Party, secret: &PureState) -> Result<Vec<DensityMatrix>> {
    let def = definition(id);
    let initial = def.initial_register(secret)?;
    let raw = enumerate_raw(&def, &initial, true, false)?;
    let labels = match party {
        Party::Bob => &def.bob_labels,
        Party::Charlie => &def.charlie_labels,
        _ => unreachable!("validated by party_blindness"),
    };
    let mut views = vec![mix(
        raw.alice_stages
            .iter()
            .map(|s| (s.probability, s.post.reduced_density(labels))),
    )?];
    if party == Party::Charlie {
        views.push(mix(
            raw.branches
                .iter()
                .map(|b| (b.probability, b.pre_correction.reduced_density(labels))),
        )?);
    }
    Ok(views)
}

/// Probability-weighted mixture of density matrices.
fn mix(parts: impl Iterator<Item = (f64, Result<DensityMatrix>)>) -> Result<DensityMatrix> {
    let mut acc: Option<DMatrix<Complex64>> = None;
    for (p, rho) in parts {
        let scaled = rho?.matrix() * Complex64::new(p, 0.0);
        acc = Some(match acc {
            Some(a) => a + scaled,
            None => scaled,
        });
    }
    DensityMatrix::new(acc.ok_or_else(|| QisError::Internal("no branches to average".into()))?)
}

fn density_entries(rho: &DensityMatrix) -> Vec<Vec<[f64; 2]>> {
    let m = rho.matrix();
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}
