//! The five information-splitting protocols: shared channel, Alice's joint
//! measurement, Bob's cooperation measurement, and Charlie's reconstruction.

mod correction;
mod factorization;
mod report;
mod tables;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub use correction::{
    correction_table, derive_correction, derive_joint_conversion, CorrectionEntry,
    CorrectionTable,
};
pub use factorization::{verify_bell_factorization, FactorizationReport, SlotAssignment};
pub use report::{
    cbit_account, BranchRecord, ClassicalMessage, CorrectionDoc, ProtocolReport, StateDoc,
    ZeroOutcomes,
};
pub use tables::{
    reference_table_numbers, verify_branch_tables, verify_corrupted_control, verify_table_number,
    RowCheck,
};

use crate::channels;
use crate::qcore::{
    enumerate_measurement, MeasurementBasis, PureState, QubitLabel, Register, UnitaryOp,
    MATCH_TOL, ZERO_PROB_TOL,
};
use crate::{QisError, Result};

/// The five splitting protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProtocolId {
    HbbGhz,
    C4Single,
    C4Entangled,
    C5Single,
    C5Arbitrary,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 5] = [
        ProtocolId::HbbGhz,
        ProtocolId::C4Single,
        ProtocolId::C4Entangled,
        ProtocolId::C5Single,
        ProtocolId::C5Arbitrary,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            ProtocolId::HbbGhz => "hbb-ghz",
            ProtocolId::C4Single => "c4-single",
            ProtocolId::C4Entangled => "c4-entangled",
            ProtocolId::C5Single => "c5-single",
            ProtocolId::C5Arbitrary => "c5-arbitrary",
        }
    }

    pub fn channel_name(&self) -> &'static str {
        match self {
            ProtocolId::HbbGhz => "ghz3",
            ProtocolId::C4Single | ProtocolId::C4Entangled => "c4",
            ProtocolId::C5Single | ProtocolId::C5Arbitrary => "c5",
        }
    }

    /// Number of secret qubits the protocol transmits.
    pub fn secret_qubits(&self) -> usize {
        match self {
            ProtocolId::C4Entangled | ProtocolId::C5Arbitrary => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ProtocolId {
    type Err = QisError;

    fn from_str(s: &str) -> Result<Self> {
        ProtocolId::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| QisError::UnknownProtocol(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Party {
    Alice,
    Bob,
    Charlie,
    Eve,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
            Party::Charlie => "charlie",
            Party::Eve => "eve",
        })
    }
}

/// Static description of one protocol: channel, bases, measurement targets,
/// and who holds which qubit.
pub(crate) struct ProtocolDef {
    pub id: ProtocolId,
    pub channel: PureState,
    pub secret_labels: Vec<QubitLabel>,
    pub alice_basis: MeasurementBasis,
    /// Joint unitary Bob and Charlie apply between the two measurements.
    pub conversion: Option<(UnitaryOp, Vec<QubitLabel>)>,
    pub bob_basis: MeasurementBasis,
    pub alice_channel: Vec<QubitLabel>,
    pub bob_labels: Vec<QubitLabel>,
    pub charlie_labels: Vec<QubitLabel>,
    /// Computational-basis secrets corrections are derived from.
    pub derivation_indices: Vec<usize>,
}

fn ch(k: u8) -> QubitLabel {
    QubitLabel::Channel(k)
}

pub(crate) fn definition(id: ProtocolId) -> ProtocolDef {
    match id {
        ProtocolId::HbbGhz => ProtocolDef {
            id,
            channel: channels::make_ghz3(1).expect("+1 is a valid sign"),
            secret_labels: vec![QubitLabel::SecretA],
            alice_basis: channels::bell_basis(),
            conversion: None,
            bob_basis: channels::pm_basis(),
            alice_channel: vec![ch(1)],
            bob_labels: vec![ch(2)],
            charlie_labels: vec![ch(3)],
            derivation_indices: vec![0, 1],
        },
        ProtocolId::C4Single => ProtocolDef {
            id,
            channel: channels::make_c4(),
            secret_labels: vec![QubitLabel::SecretA],
            alice_basis: channels::bell_basis(),
            conversion: None,
            bob_basis: channels::bob_c4_partial_basis(),
            alice_channel: vec![ch(1)],
            bob_labels: vec![ch(2), ch(3)],
            charlie_labels: vec![ch(4)],
            derivation_indices: vec![0, 1],
        },
        ProtocolId::C4Entangled => ProtocolDef {
            id,
            channel: channels::make_c4(),
            secret_labels: vec![QubitLabel::SecretA, QubitLabel::SecretAPrime],
            alice_basis: channels::ghz3_basis(),
            conversion: Some((
                correction::derive_joint_conversion(),
                vec![ch(2), ch(3), ch(4)],
            )),
            bob_basis: channels::pm_basis()
                .with_targets(vec![ch(4)])
                .expect("single-qubit retarget"),
            alice_channel: vec![ch(1)],
            bob_labels: vec![ch(4)],
            charlie_labels: vec![ch(2), ch(3)],
            derivation_indices: vec![0, 3],
        },
        ProtocolId::C5Single => ProtocolDef {
            id,
            channel: channels::make_c5(),
            secret_labels: vec![QubitLabel::SecretA],
            alice_basis: channels::ghz3_basis_flip_first(),
            conversion: None,
            bob_basis: channels::bob_c5_basis(),
            alice_channel: vec![ch(1), ch(2)],
            bob_labels: vec![ch(3), ch(4)],
            charlie_labels: vec![ch(5)],
            derivation_indices: vec![0, 1],
        },
        ProtocolId::C5Arbitrary => ProtocolDef {
            id,
            channel: channels::make_c5(),
            secret_labels: vec![QubitLabel::SecretA, QubitLabel::SecretAPrime],
            alice_basis: channels::table5_basis(),
            conversion: None,
            bob_basis: channels::pm_basis(),
            alice_channel: vec![ch(1), ch(5)],
            bob_labels: vec![ch(2)],
            charlie_labels: vec![ch(3), ch(4)],
            derivation_indices: vec![0, 1, 2, 3],
        },
    }
}

impl ProtocolDef {
    pub fn channel_label_list(&self) -> Vec<QubitLabel> {
        (1..=self.channel.num_qubits() as u8).map(ch).collect()
    }

    pub fn initial_register(&self, secret: &PureState) -> Result<Register> {
        let mut labels = self.secret_labels.clone();
        labels.extend(self.channel_label_list());
        Register::new(secret.tensor(&self.channel), labels)
    }
}

/// Which party holds each qubit of a protocol.
pub fn ownership(id: ProtocolId) -> BTreeMap<QubitLabel, Party> {
    let def = definition(id);
    let mut map = BTreeMap::new();
    for l in def.secret_labels.iter().chain(&def.alice_channel) {
        map.insert(*l, Party::Alice);
    }
    for l in &def.bob_labels {
        map.insert(*l, Party::Bob);
    }
    for l in &def.charlie_labels {
        map.insert(*l, Party::Charlie);
    }
    map.insert(QubitLabel::EveAncilla, Party::Eve);
    map
}

/// Rejects secrets of the wrong size, and secrets outside the Schmidt-form
/// subspace `α|00⟩ + β|11⟩` where the protocol requires it.
pub fn validate_secret(id: ProtocolId, secret: &PureState) -> Result<()> {
    let want = id.secret_qubits();
    if secret.num_qubits() != want {
        return Err(QisError::InvalidSecret(format!(
            "{id} carries {want} secret qubit(s), got {}",
            secret.num_qubits()
        )));
    }
    if id == ProtocolId::C4Entangled {
        let off = secret.amplitude(0b01).norm().max(secret.amplitude(0b10).norm());
        if off > MATCH_TOL {
            return Err(QisError::InvalidSecret(format!(
                "{id} requires a Schmidt-form secret α|00⟩ + β|11⟩; \
                 |01⟩/|10⟩ amplitude of {off:.3e} exceeds tolerance"
            )));
        }
    }
    Ok(())
}

/// One enumerated branch of a run, before any correction.
#[derive(Debug, Clone)]
pub(crate) struct RawBranch {
    pub alice: usize,
    /// `None` when the run was truncated after Alice's measurement.
    pub bob: Option<usize>,
    pub p_alice: f64,
    pub p_bob: f64,
    pub probability: f64,
    /// Residual register after the last performed measurement.
    pub pre_correction: Register,
}

/// Post-measurement state of one of Alice's nonzero outcomes, before any
/// conversion unitary.
#[derive(Debug, Clone)]
pub(crate) struct AliceStage {
    pub outcome: usize,
    pub probability: f64,
    pub post: Register,
}

#[derive(Debug, Clone)]
pub(crate) struct RawRun {
    pub branches: Vec<RawBranch>,
    pub alice_stages: Vec<AliceStage>,
    pub zero_alice: Vec<usize>,
    pub zero_bob: Vec<usize>,
}

/// Enumerates every measurement branch.
///
/// With `strict` set, a completion-added basis outcome carrying probability
/// above `ZERO_PROB_TOL` is an error; honest runs never populate them.
/// With `truncate_after_alice`, Bob's stage (and any conversion) is skipped
/// and branches carry `bob: None`.
pub(crate) fn enumerate_raw(
    def: &ProtocolDef,
    initial: &Register,
    strict: bool,
    truncate_after_alice: bool,
) -> Result<RawRun> {
    let mut run = RawRun {
        branches: Vec::new(),
        alice_stages: Vec::new(),
        zero_alice: Vec::new(),
        zero_bob: Vec::new(),
    };
    for a in enumerate_measurement(initial, &def.alice_basis)? {
        let post = match a.post {
            Some(post) if a.probability > ZERO_PROB_TOL => post,
            _ => {
                if strict && !a.listed && a.probability > ZERO_PROB_TOL {
                    return Err(QisError::NonzeroCompletedOutcome {
                        outcome: a.outcome,
                        prob: a.probability,
                    });
                }
                run.zero_alice.push(a.outcome);
                continue;
            }
        };
        if strict && !a.listed {
            return Err(QisError::NonzeroCompletedOutcome {
                outcome: a.outcome,
                prob: a.probability,
            });
        }
        run.alice_stages.push(AliceStage {
            outcome: a.outcome,
            probability: a.probability,
            post: post.clone(),
        });
        if truncate_after_alice {
            run.branches.push(RawBranch {
                alice: a.outcome,
                bob: None,
                p_alice: a.probability,
                p_bob: 1.0,
                probability: a.probability,
                pre_correction: post,
            });
            continue;
        }
        let converted = match &def.conversion {
            Some((u, targets)) => post.apply_unitary(u, targets)?,
            None => post,
        };
        for b in enumerate_measurement(&converted, &def.bob_basis)? {
            let bob_post = match b.post {
                Some(bob_post) if b.probability > ZERO_PROB_TOL => bob_post,
                _ => {
                    if strict && !b.listed && b.probability > ZERO_PROB_TOL {
                        return Err(QisError::NonzeroCompletedOutcome {
                            outcome: b.outcome,
                            prob: b.probability,
                        });
                    }
                    if !run.zero_bob.contains(&b.outcome) {
                        run.zero_bob.push(b.outcome);
                    }
                    continue;
                }
            };
            if strict && !b.listed {
                return Err(QisError::NonzeroCompletedOutcome {
                    outcome: b.outcome,
                    prob: b.probability,
                });
            }
            run.branches.push(RawBranch {
                alice: a.outcome,
                bob: Some(b.outcome),
                p_alice: a.probability,
                p_bob: b.probability,
                probability: a.probability * b.probability,
                pre_correction: bob_post,
            });
        }
    }
    run.zero_bob.sort_unstable();
    Ok(run)
}

fn bits_needed(count: usize) -> u32 {
    if count <= 1 {
        0
    } else {
        usize::BITS - (count - 1).leading_zeros()
    }
}

/// Runs a protocol end to end: enumerate every branch, apply the derived
/// correction, and record Charlie's reconstruction fidelity per branch.
pub fn run_protocol(id: ProtocolId, secret: &PureState) -> Result<ProtocolReport> {
    validate_secret(id, secret)?;
    let def = definition(id);
    let initial = def.initial_register(secret)?;
    let raw = enumerate_raw(&def, &initial, true, false)?;
    let table = correction_table(def.id);
    let alice_bits = bits_needed(raw.alice_stages.len());
    let bob_outcomes: std::collections::BTreeSet<usize> =
        raw.branches.iter().filter_map(|b| b.bob).collect();
    let bob_bits = bits_needed(bob_outcomes.len());

    let mut branches = Vec::with_capacity(raw.branches.len());
    let mut probability_sum = 0.0;
    let mut all_fidelities_ok = true;
    for rb in &raw.branches {
        let bob = rb.bob.expect("full run enumerates Bob's outcomes");
        if (rb.p_alice * rb.p_bob - rb.probability).abs() > MATCH_TOL {
            return Err(QisError::Internal(format!(
                "branch ({}, {bob}) probability {} is not the product of its stages",
                rb.alice, rb.probability
            )));
        }
        let entry = table
            .entries
            .get(&(rb.alice, bob))
            .ok_or(QisError::ZeroProbabilityBranch(rb.alice, bob))?;
        let final_reg = rb
            .pre_correction
            .apply_unitary(&entry.unitary, &def.charlie_labels)?;
        let fidelity = secret.fidelity(final_reg.state())?;
        all_fidelities_ok &= fidelity >= 1.0 - MATCH_TOL;
        probability_sum += rb.probability;
        branches.push(BranchRecord {
            alice_outcome: rb.alice,
            bob_outcome: bob,
            probability: rb.probability,
            messages: vec![
                ClassicalMessage {
                    from: Party::Alice.to_string(),
                    to: Party::Charlie.to_string(),
                    bits: alice_bits,
                    payload: rb.alice,
                },
                ClassicalMessage {
                    from: Party::Bob.to_string(),
                    to: Party::Charlie.to_string(),
                    bits: bob_bits,
                    payload: bob,
                },
            ],
            charlie_pre_correction: StateDoc::from_register(&rb.pre_correction),
            correction: CorrectionDoc::from_entry(entry),
            charlie_final: StateDoc::from_register(&final_reg),
            fidelity,
        });
    }
    let mut cbit_totals = BTreeMap::new();
    cbit_totals.insert("alice->charlie".to_string(), alice_bits);
    cbit_totals.insert("bob->charlie".to_string(), bob_bits);
    Ok(ProtocolReport {
        protocol: id.to_string(),
        channel: id.channel_name().to_string(),
        label_order: initial.label_strings(),
        secret: StateDoc::from_state(secret, &def.secret_labels),
        conversion_applied: def.conversion.is_some(),
        branches,
        zero_probability_outcomes: ZeroOutcomes {
            alice: raw.zero_alice.clone(),
            bob: raw.zero_bob.clone(),
        },
        cbit_totals,
        probability_sum,
        all_fidelities_ok,
    })
}

pub fn run_hbb_ghz(secret: &PureState) -> Result<ProtocolReport> {
    run_protocol(ProtocolId::HbbGhz, secret)
}

pub fn run_c4_single(secret: &PureState) -> Result<ProtocolReport> {
    run_protocol(ProtocolId::C4Single, secret)
}

pub fn run_c4_entangled(secret: &PureState) -> Result<ProtocolReport> {
    run_protocol(ProtocolId::C4Entangled, secret)
}

pub fn run_c5_single(secret: &PureState) -> Result<ProtocolReport> {
    run_protocol(ProtocolId::C5Single, secret)
}

pub fn run_c5_arbitrary(secret: &PureState) -> Result<ProtocolReport> {
    run_protocol(ProtocolId::C5Arbitrary, secret)
}

/// A seeded random secret supported on the given basis indices of a
/// `num_qubits`-qubit space.
pub fn random_secret_in_subspace(
    num_qubits: usize,
    indices: &[usize],
    seed: u64,
) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(usize, Complex64)> = indices
        .iter()
        .map(|&i| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            (i, Complex64::new(re, im))
        })
        .collect();
    PureState::from_terms(num_qubits, &terms).expect("gaussian terms have nonzero norm")
}

/// A seeded random secret valid for the protocol (Schmidt-form where
/// required).
pub fn random_secret_for(id: ProtocolId, seed: u64) -> PureState {
    match id {
        ProtocolId::C4Entangled => random_secret_in_subspace(2, &[0b00, 0b11], seed),
        _ => crate::qcore::random_state(id.secret_qubits(), seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fixed_secret_1q() -> PureState {
        PureState::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap()
    }

    #[test]
    fn protocol_ids_roundtrip() {
        for p in ProtocolId::ALL {
            assert_eq!(p.id().parse::<ProtocolId>().unwrap(), p);
        }
        assert!(matches!(
            "nope".parse::<ProtocolId>(),
            Err(QisError::UnknownProtocol(_))
        ));
    }

    #[test]
    fn ownership_partitions_every_qubit() {
        for p in ProtocolId::ALL {
            let def = definition(p);
            let own = ownership(p);
            let mut channel_count = 0;
            for l in own.keys() {
                if matches!(l, QubitLabel::Channel(_)) {
                    channel_count += 1;
                }
            }
            assert_eq!(channel_count, def.channel.num_qubits());
            assert_eq!(own.get(&QubitLabel::EveAncilla), Some(&Party::Eve));
            for l in &def.charlie_labels {
                assert_eq!(own.get(l), Some(&Party::Charlie));
            }
        }
    }

    #[test]
    fn secret_validation_enforces_size_and_subspace() {
        let s1 = fixed_secret_1q();
        assert!(validate_secret(ProtocolId::HbbGhz, &s1).is_ok());
        assert!(matches!(
            validate_secret(ProtocolId::C5Arbitrary, &s1),
            Err(QisError::InvalidSecret(_))
        ));
        let bad = PureState::from_terms(2, &[(0b01, c(1.0, 0.0))]).unwrap();
        assert!(matches!(
            validate_secret(ProtocolId::C4Entangled, &bad),
            Err(QisError::InvalidSecret(_))
        ));
        let good = PureState::from_terms(2, &[(0b00, c(0.6, 0.0)), (0b11, c(0.0, 0.8))]).unwrap();
        assert!(validate_secret(ProtocolId::C4Entangled, &good).is_ok());
    }

    #[test]
    fn every_protocol_reconstructs_fixed_secrets_exactly() {
        for p in ProtocolId::ALL {
            let secret = random_secret_for(p, 1234);
            let report = run_protocol(p, &secret).unwrap();
            assert!(report.all_fidelities_ok, "{p} fidelities");
            assert!((report.probability_sum - 1.0).abs() < MATCH_TOL, "{p} total probability");
            for b in &report.branches {
                assert!(b.fidelity >= 1.0 - MATCH_TOL, "{p} branch ({}, {})", b.alice_outcome, b.bob_outcome);
            }
        }
    }

    #[test]
    fn branch_counts_match_the_protocol_layout() {
        let cases = [
            (ProtocolId::HbbGhz, 8),
            (ProtocolId::C4Single, 8),
            (ProtocolId::C4Entangled, 8),
            (ProtocolId::C5Single, 16),
            (ProtocolId::C5Arbitrary, 32),
        ];
        for (p, want) in cases {
            let report = run_protocol(p, &random_secret_for(p, 9)).unwrap();
            assert_eq!(report.branches.len(), want, "{p}");
        }
    }

    #[test]
    fn outcome_statistics_are_uniform_and_secret_independent() {
        for p in ProtocolId::ALL {
            let na = match p {
                ProtocolId::C5Arbitrary => 16.0,
                _ => 4.0,
            };
            for seed in [3, 4] {
                let report = run_protocol(p, &random_secret_for(p, seed)).unwrap();
                let mut alice_totals: BTreeMap<usize, f64> = BTreeMap::new();
                let per_branch = 1.0 / report.branches.len() as f64;
                for b in &report.branches {
                    *alice_totals.entry(b.alice_outcome).or_insert(0.0) += b.probability;
                    assert!(
                        (b.probability - per_branch).abs() < MATCH_TOL,
                        "{p} branch probability {}",
                        b.probability
                    );
                }
                for (_, total) in alice_totals {
                    assert!((total - 1.0 / na).abs() < MATCH_TOL, "{p} alice marginal");
                }
            }
        }
    }

    #[test]
    fn completed_outcomes_stay_silent_in_honest_runs() {
        let report = run_protocol(ProtocolId::C4Single, &fixed_secret_1q()).unwrap();
        assert_eq!(report.zero_probability_outcomes.bob, vec![2, 3]);
        assert!(report.zero_probability_outcomes.alice.is_empty());
        let report = run_protocol(
            ProtocolId::C4Entangled,
            &PureState::from_terms(2, &[(0b00, c(0.6, 0.0)), (0b11, c(0.0, 0.8))]).unwrap(),
        )
        .unwrap();
        assert_eq!(report.zero_probability_outcomes.alice, vec![4, 5, 6, 7]);
    }

    #[test]
    fn cbit_totals_match_the_declared_budget() {
        let cases = [
            (ProtocolId::HbbGhz, 2, 1),
            (ProtocolId::C4Single, 2, 1),
            (ProtocolId::C4Entangled, 2, 1),
            (ProtocolId::C5Single, 2, 2),
            (ProtocolId::C5Arbitrary, 4, 1),
        ];
        for (p, alice, bob) in cases {
            let report = run_protocol(p, &random_secret_for(p, 77)).unwrap();
            assert_eq!(report.cbit_totals["alice->charlie"], alice, "{p}");
            assert_eq!(report.cbit_totals["bob->charlie"], bob, "{p}");
        }
    }

    #[test]
    fn bell_measurement_residuals_are_pauli_rotations_of_the_secret() {
        // After Alice's Bell measurement on (a, 1) of the three-qubit run,
        // Bob and Charlie jointly hold U ⊗ V applied to α|00⟩ + β|11⟩ with
        // U, V in {I, σx, iσy, σz}; the Ψ± outcomes flip both halves.
        let secret = fixed_secret_1q();
        let def = definition(ProtocolId::HbbGhz);
        let initial = def.initial_register(&secret).unwrap();
        let raw = enumerate_raw(&def, &initial, true, false).unwrap();
        let base = PureState::from_terms(
            2,
            &[(0b00, secret.amplitude(0)), (0b11, secret.amplitude(1))],
        )
        .unwrap();
        let paulis = [
            UnitaryOp::identity(1),
            UnitaryOp::pauli_x(),
            UnitaryOp::i_pauli_y(),
            UnitaryOp::pauli_z(),
        ];
        let (alpha, beta) = (secret.amplitude(0), secret.amplitude(1));
        let expected = [
            PureState::from_terms(2, &[(0b00, alpha), (0b11, beta)]).unwrap(),
            PureState::from_terms(2, &[(0b00, alpha), (0b11, -beta)]).unwrap(),
            PureState::from_terms(2, &[(0b00, beta), (0b11, alpha)]).unwrap(),
            PureState::from_terms(2, &[(0b00, -beta), (0b11, alpha)]).unwrap(),
        ];
        for stage in &raw.alice_stages {
            assert!((stage.probability - 0.25).abs() < MATCH_TOL);
            assert!(
                stage.post.state().equal_up_to_global_phase(&expected[stage.outcome]).unwrap(),
                "alice outcome {}",
                stage.outcome
            );
            let matched = paulis.iter().any(|u| {
                let half = base.apply_unitary(u, &[0]).unwrap();
                paulis.iter().any(|v| {
                    let rotated = half.apply_unitary(v, &[1]).unwrap();
                    stage.post.state().equal_up_to_global_phase(&rotated).unwrap()
                })
            });
            assert!(matched, "no Pauli pair for outcome {}", stage.outcome);
        }
    }

    #[test]
    fn basis_secret_runs_keep_charlie_in_computational_states() {
        // With α = 1, β = 0 every branch leaves Charlie's pair in |00⟩ up to
        // phase after conversion and correction.
        let secret = PureState::basis_state(2, 0b00).unwrap();
        let report = run_protocol(ProtocolId::C4Entangled, &secret).unwrap();
        for b in &report.branches {
            let amps = &b.charlie_final.amplitudes;
            let mag0 = (amps[0][0].powi(2) + amps[0][1].powi(2)).sqrt();
            assert!((mag0 - 1.0).abs() < 1e-9, "branch ({}, {})", b.alice_outcome, b.bob_outcome);
        }
    }

    #[test]
    fn truncated_runs_stop_after_alice() {
        let def = definition(ProtocolId::C4Single);
        let initial = def.initial_register(&fixed_secret_1q()).unwrap();
        let raw = enumerate_raw(&def, &initial, true, true).unwrap();
        assert_eq!(raw.branches.len(), 4);
        for b in &raw.branches {
            assert!(b.bob.is_none());
            assert_eq!(b.pre_correction.num_qubits(), 3);
        }
    }

    #[test]
    fn random_subspace_secrets_stay_in_subspace() {
        let s = random_secret_in_subspace(2, &[0b00, 0b11], 5);
        assert!(s.amplitude(0b01).norm() < 1e-15);
        assert!(s.amplitude(0b10).norm() < 1e-15);
        assert!((s.norm_sq() - 1.0).abs() < 1e-12);
        let t = random_secret_for(ProtocolId::C4Entangled, 5);
        assert_eq!(t.amplitudes(), s.amplitudes());
    }
}
