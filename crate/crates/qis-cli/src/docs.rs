//! Output documents the CLI serializes, plus the verification passes that
//! decide the exit status.  Every builder returns the document together with
//! an `ok` verdict so `main` can map results onto exit codes uniformly.

use std::collections::BTreeMap;

use qis_core::channels::{
    local_equivalence_search, make_c4, make_cluster_generic, make_ghz4, permute_qubits,
};
use qis_core::protocols::{
    correction_table, random_secret_for, run_protocol, verify_bell_factorization,
    verify_table_number, FactorizationReport, Party, ProtocolId, ProtocolReport, RowCheck,
};
use qis_core::qcore::PureState;
use qis_core::security::{eve_information, party_blindness, run_attack, AttackKind, AttackSpec};
use qis_core::Result;
use serde::Serialize;

/// One enumerated branch with the number of times sampling landed on it.
#[derive(Debug, Serialize)]
pub struct SampleCount {
    pub alice_outcome: usize,
    pub bob_outcome: usize,
    pub probability: f64,
    pub observed: usize,
}

/// Result of a seeded sampling run over a protocol's branch distribution.
#[derive(Debug, Serialize)]
pub struct SampleDoc {
    pub protocol: String,
    pub seed: u64,
    pub trials: usize,
    pub counts: Vec<SampleCount>,
    pub probability_sum: f64,
    pub all_fidelities_ok: bool,
}

/// Draws `trials` branches from the enumerated distribution with a seeded
/// generator and tallies how often each `(alice, bob)` outcome pair occurs.
pub fn sample_report(report: &ProtocolReport, seed: u64, trials: usize) -> SampleDoc {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut observed = vec![0usize; report.branches.len()];
    for _ in 0..trials {
        let draw: f64 = rng.random();
        let mut acc = 0.0;
        let mut pick = report.branches.len() - 1;
        for (i, branch) in report.branches.iter().enumerate() {
            acc += branch.probability;
            if draw < acc {
                pick = i;
                break;
            }
        }
        observed[pick] += 1;
    }
    SampleDoc {
        protocol: report.protocol.clone(),
        seed,
        trials,
        counts: report
            .branches
            .iter()
            .zip(observed)
            .map(|(b, observed)| SampleCount {
                alice_outcome: b.alice_outcome,
                bob_outcome: b.bob_outcome,
                probability: b.probability,
                observed,
            })
            .collect(),
        probability_sum: report.probability_sum,
        all_fidelities_ok: report.all_fidelities_ok,
    }
}

/// One reference table checked row by row at the requested tolerance.
#[derive(Debug, Serialize)]
pub struct TableDoc {
    pub table: u8,
    pub rows: Vec<RowCheck>,
    pub all_matched: bool,
}

/// All tables requested by one `tables` invocation.
#[derive(Debug, Serialize)]
pub struct TablesDoc {
    pub tolerance: f64,
    pub tables: Vec<TableDoc>,
    pub all_matched: bool,
}

/// Re-grades a row at the caller's tolerance instead of the engine default.
pub fn row_matches(row: &RowCheck, tolerance: f64) -> bool {
    row.deviation <= tolerance && (row.probability - row.expected_probability).abs() <= tolerance
}

pub fn tables_doc(numbers: &[u8], tolerance: f64) -> Result<TablesDoc> {
    let mut tables = Vec::new();
    for &number in numbers {
        let mut rows = verify_table_number(number)?;
        for row in &mut rows {
            row.matched = row_matches(row, tolerance);
        }
        let all_matched = rows.iter().all(|r| r.matched);
        tables.push(TableDoc { table: number, rows, all_matched });
    }
    let all_matched = tables.iter().all(|t| t.all_matched);
    Ok(TablesDoc { tolerance, tables, all_matched })
}

/// A full attack run plus the distinguishability grade over a secret pair.
#[derive(Debug, Serialize)]
pub struct AttackDoc {
    pub report: qis_core::security::AttackReport,
    pub secret_one: Vec<[f64; 2]>,
    pub secret_two: Vec<[f64; 2]>,
    /// Largest trace distance between Eve's marginals for the two secrets,
    /// maximized over announced outcomes.
    pub eve_information: f64,
    pub tolerance: f64,
    /// Eve's view is secret-independent within tolerance.
    pub no_leak: bool,
}

pub fn attack_doc(
    spec: &AttackSpec,
    secret_one: &PureState,
    secret_two: &PureState,
    tolerance: f64,
) -> Result<AttackDoc> {
    let report = run_attack(spec, secret_one)?;
    let eve_info = eve_information(spec, secret_one, secret_two)?;
    Ok(AttackDoc {
        report,
        secret_one: amp_pairs(secret_one),
        secret_two: amp_pairs(secret_two),
        eve_information: eve_info,
        tolerance,
        no_leak: eve_info <= tolerance,
    })
}

/// One derived correction, with the unitary written out.
#[derive(Debug, Serialize)]
pub struct CorrectionEntryDoc {
    pub alice_outcome: usize,
    pub bob_outcome: usize,
    pub arity: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub signed_permutation: bool,
    pub unitarity_deviation: f64,
    pub pauli: Option<String>,
}

/// Every correction a protocol needs, in enumeration order.
#[derive(Debug, Serialize)]
pub struct CorrectionsDoc {
    pub protocol: String,
    pub entries: Vec<CorrectionEntryDoc>,
    /// Every entry is a signed permutation and unitary within tolerance.
    pub all_ok: bool,
}

pub fn corrections_doc(id: ProtocolId, tolerance: f64) -> Result<CorrectionsDoc> {
    let table = correction_table(id);
    let entries: Vec<CorrectionEntryDoc> = table
        .entries
        .values()
        .map(|e| {
            let m = e.unitary.matrix();
            CorrectionEntryDoc {
                alice_outcome: e.alice,
                bob_outcome: e.bob,
                arity: e.unitary.arity(),
                matrix: (0..m.nrows())
                    .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                    .collect(),
                signed_permutation: e.signed_permutation,
                unitarity_deviation: e.unitary.unitarity_deviation(),
                pauli: e.pauli.map(str::to_string),
            }
        })
        .collect();
    let all_ok =
        entries.iter().all(|e| e.signed_permutation && e.unitarity_deviation <= tolerance);
    Ok(CorrectionsDoc { protocol: id.to_string(), entries, all_ok })
}

/// One named verification pass inside `verify-all`.
#[derive(Debug, Serialize)]
pub struct SectionDoc {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

/// The whole-suite verification document.
#[derive(Debug, Serialize)]
pub struct VerifyAllDoc {
    pub tolerance: f64,
    pub sections: Vec<SectionDoc>,
    pub all_ok: bool,
}

fn amp_pairs(state: &PureState) -> Vec<[f64; 2]> {
    state.amplitudes().iter().map(|a| [a.re, a.im]).collect()
}

/// Runs every verification the library exposes and aggregates the verdicts.
pub fn verify_all_doc(tolerance: f64) -> Result<VerifyAllDoc> {
    let sections = vec![
        section_protocol_fidelity(tolerance)?,
        section_reference_tables(tolerance)?,
        section_corrections(tolerance)?,
        section_attack_monogamy(tolerance)?,
        section_party_blindness(tolerance)?,
        section_bell_factorization(tolerance)?,
        section_local_equivalence()?,
    ];
    let all_ok = sections.iter().all(|s| s.ok);
    Ok(VerifyAllDoc { tolerance, sections, all_ok })
}

fn section_protocol_fidelity(tolerance: f64) -> Result<SectionDoc> {
    let mut branches = 0usize;
    let mut min_fidelity = f64::INFINITY;
    let mut max_prob_gap = 0.0f64;
    for id in ProtocolId::ALL {
        let report = run_protocol(id, &random_secret_for(id, 7))?;
        branches += report.branches.len();
        for b in &report.branches {
            min_fidelity = min_fidelity.min(b.fidelity);
        }
        max_prob_gap = max_prob_gap.max((report.probability_sum - 1.0).abs());
    }
    let ok = min_fidelity >= 1.0 - tolerance && max_prob_gap <= tolerance;
    Ok(SectionDoc {
        name: "protocol-fidelity".to_string(),
        ok,
        detail: format!(
            "5 protocols, {branches} branches; min corrected fidelity {min_fidelity:.15}, \
             max |probability sum - 1| = {max_prob_gap:.3e}"
        ),
    })
}

fn section_reference_tables(tolerance: f64) -> Result<SectionDoc> {
    let doc = tables_doc(&[1, 2, 3, 4, 5], tolerance)?;
    let rows: usize = doc.tables.iter().map(|t| t.rows.len()).sum();
    let max_dev = doc
        .tables
        .iter()
        .flat_map(|t| t.rows.iter())
        .map(|r| r.deviation)
        .fold(0.0f64, f64::max);
    Ok(SectionDoc {
        name: "reference-tables".to_string(),
        ok: doc.all_matched,
        detail: format!("{rows} rows across tables 1-5; max phase-aligned deviation {max_dev:.3e}"),
    })
}

fn section_corrections(tolerance: f64) -> Result<SectionDoc> {
    let mut entries = 0usize;
    let mut all_ok = true;
    let mut ghz_pauli = true;
    for id in ProtocolId::ALL {
        let doc = corrections_doc(id, tolerance)?;
        entries += doc.entries.len();
        all_ok &= doc.all_ok;
        if id == ProtocolId::HbbGhz {
            ghz_pauli = doc.entries.iter().all(|e| e.pauli.is_some());
        }
    }
    Ok(SectionDoc {
        name: "corrections".to_string(),
        ok: all_ok && ghz_pauli,
        detail: format!(
            "{entries} derived corrections, all signed permutations; \
             every hbb-ghz correction carries a Pauli name: {ghz_pauli}"
        ),
    })
}

fn section_attack_monogamy(tolerance: f64) -> Result<SectionDoc> {
    use qis_core::qcore::QubitLabel::Channel;
    let scenarios: [(ProtocolId, u8, AttackKind); 6] = [
        (ProtocolId::C4Single, 2, AttackKind::Cnot),
        (ProtocolId::C4Single, 3, AttackKind::Cnot),
        (ProtocolId::C4Entangled, 2, AttackKind::Cnot),
        (ProtocolId::C4Entangled, 3, AttackKind::Cnot),
        (ProtocolId::C5Single, 4, AttackKind::Cnot),
        (ProtocolId::C5Single, 3, AttackKind::XCopy),
    ];
    let mut ok = true;
    let mut worst_leak = 0.0f64;
    for (protocol, tap, attack) in scenarios {
        let spec = AttackSpec {
            protocol,
            tapped_qubit: Channel(tap),
            attack,
            truncate_after_alice: false,
        };
        let doc = attack_doc(
            &spec,
            &random_secret_for(protocol, 11),
            &random_secret_for(protocol, 12),
            tolerance,
        )?;
        worst_leak = worst_leak.max(doc.eve_information);
        ok &= doc.report.monogamy_ok && doc.report.fidelity_ok && doc.no_leak;
    }
    Ok(SectionDoc {
        name: "attack-monogamy".to_string(),
        ok,
        detail: format!(
            "6 tapped scenarios: Eve ends unentangled, Charlie still reconstructs exactly, \
             worst distinguishability {worst_leak:.3e}"
        ),
    })
}

fn section_party_blindness(tolerance: f64) -> Result<SectionDoc> {
    let mut ok = true;
    let mut worst = 0.0f64;
    for id in ProtocolId::ALL {
        for party in [Party::Bob, Party::Charlie] {
            let d = party_blindness(id, party, (41, 42))?;
            worst = worst.max(d);
            ok &= d <= tolerance;
        }
    }
    Ok(SectionDoc {
        name: "party-blindness".to_string(),
        ok,
        detail: format!(
            "Bob's and Charlie's pre-announcement views are secret-independent for all \
             5 protocols; worst trace distance {worst:.3e}"
        ),
    })
}

fn section_bell_factorization(tolerance: f64) -> Result<SectionDoc> {
    let report: FactorizationReport = verify_bell_factorization()?;
    let ok = report.satisfied
        && report.signed_overlap >= 1.0 - tolerance
        && (report.unsigned_max_overlap - 0.5).abs() <= 1e-9;
    let assignment: Vec<String> = report
        .assignment
        .iter()
        .map(|s| format!("{}={}{}", s.slot, if s.sign < 0 { "-" } else { "+" }, s.bell))
        .collect();
    Ok(SectionDoc {
        name: "bell-factorization".to_string(),
        ok,
        detail: format!(
            "first basis vector factors over signed Bell pairs [{}]; \
             unsigned search caps at overlap {:.12}",
            assignment.join(", "),
            report.unsigned_max_overlap
        ),
    })
}

fn section_local_equivalence() -> Result<SectionDoc> {
    let chain = make_cluster_generic(4)?;
    let c4 = make_c4();
    let in_order = local_equivalence_search(&chain, &c4)?;
    // Reading the chain's qubits in the order (1, 3, 4, 2) exposes the
    // channel's structure; position p of the reordered state carries
    // qubit perm[p] of the original.
    let reordered = permute_qubits(&chain, &[0, 2, 3, 1])?;
    let relabeled = local_equivalence_search(&reordered, &c4)?;
    let ghz = local_equivalence_search(&c4, &make_ghz4())?;
    let ok = relabeled.is_some() && ghz.is_none();
    Ok(SectionDoc {
        name: "local-equivalence".to_string(),
        ok,
        detail: format!(
            "chain(4) vs four-partite channel in given order: {} (recorded, not asserted; \
             a Schmidt-rank obstruction across the outer-pair cut rules it out); \
             after reading the chain's qubits in order (1,3,4,2): {}; \
             four-partite channel vs GHZ4: {}",
            found(&in_order),
            found(&relabeled),
            found(&ghz)
        ),
    })
}

fn found<T>(result: &Option<T>) -> &'static str {
    match result {
        Some(_) => "per-qubit Cliffords found",
        None => "no per-qubit Clifford assignment exists",
    }
}

/// Grades a protocol run at the caller's tolerance.
pub fn run_verdict(report: &ProtocolReport, tolerance: f64) -> bool {
    report.branches.iter().all(|b| b.fidelity >= 1.0 - tolerance)
        && (report.probability_sum - 1.0).abs() <= tolerance
}

/// Classical-bit totals rendered as stable `from->to` keys.
pub fn cbit_lines(totals: &BTreeMap<String, u32>) -> Vec<String> {
    totals.iter().map(|(k, v)| format!("{k}: {v}")).collect()
}
