//! Human-readable rendering of the output documents.  The JSON form is the
//! stable machine interface; this form favors side-by-side comparison.

use std::fmt::Write as _;

use qis_core::protocols::{ProtocolReport, StateDoc};

use crate::docs::{AttackDoc, CorrectionsDoc, SampleDoc, TablesDoc, VerifyAllDoc};
use crate::render;

fn state_line(doc: &StateDoc, tol: f64) -> String {
    format!("[{}]  {}", doc.label_order.join(", "), render::state(&doc.amplitudes, tol))
}

pub fn protocol_report(report: &ProtocolReport, tol: f64, ok: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "protocol: {}", report.protocol);
    let _ = writeln!(out, "channel:  {}", report.channel);
    let _ = writeln!(out, "qubits:   {}", report.label_order.join(", "));
    let _ = writeln!(out, "secret:   {}", render::state(&report.secret.amplitudes, tol));
    let _ = writeln!(out, "conversion applied: {}", report.conversion_applied);
    let _ = writeln!(out);
    for b in &report.branches {
        let _ = writeln!(
            out,
            "branch alice={} bob={}  p = {}",
            b.alice_outcome,
            b.bob_outcome,
            render::probability(b.probability, tol)
        );
        for m in &b.messages {
            let _ = writeln!(out, "  {} -> {}: {} bit(s), payload {}", m.from, m.to, m.bits, m.payload);
        }
        let correction = match &b.correction.pauli {
            Some(name) => name.clone(),
            None => format!(
                "{}-qubit signed permutation",
                b.correction.arity
            ),
        };
        let _ = writeln!(out, "  correction: {correction}");
        let _ = writeln!(out, "  charlie before: {}", state_line(&b.charlie_pre_correction, tol));
        let _ = writeln!(out, "  charlie after:  {}", state_line(&b.charlie_final, tol));
        let _ = writeln!(out, "  fidelity with secret: {}", render::sig12(b.fidelity));
    }
    let _ = writeln!(out);
    let zeros = &report.zero_probability_outcomes;
    let _ = writeln!(out, "zero-probability alice outcomes: {:?}", zeros.alice);
    let _ = writeln!(out, "zero-probability bob outcomes:   {:?}", zeros.bob);
    for line in crate::docs::cbit_lines(&report.cbit_totals) {
        let _ = writeln!(out, "classical bits {line}");
    }
    let _ = writeln!(out, "probability sum: {}", render::probability(report.probability_sum, tol));
    let _ = writeln!(out, "verdict: {}", render::pass_fail(ok));
    out
}

pub fn sample(doc: &SampleDoc, tol: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "protocol: {}", doc.protocol);
    let _ = writeln!(out, "seed: {}  trials: {}", doc.seed, doc.trials);
    for c in &doc.counts {
        let freq = c.observed as f64 / doc.trials.max(1) as f64;
        let _ = writeln!(
            out,
            "branch alice={} bob={}  p = {}  observed {} ({})",
            c.alice_outcome,
            c.bob_outcome,
            render::probability(c.probability, tol),
            c.observed,
            render::sig12(freq)
        );
    }
    let _ = writeln!(out, "verdict: {}", render::pass_fail(doc.all_fidelities_ok));
    out
}

pub fn tables(doc: &TablesDoc) -> String {
    let mut out = String::new();
    for t in &doc.tables {
        let _ = writeln!(out, "table {} ({} rows)", t.table, t.rows.len());
        for r in &t.rows {
            let _ = writeln!(
                out,
                "  row {:2} outcome {:2}  p = {} (expected {})",
                r.row,
                r.outcome,
                render::probability(r.probability, doc.tolerance),
                render::exact_probability(r.expected_probability, doc.tolerance)
                    .unwrap_or_else(|| render::sig12(r.expected_probability)),
            );
            let _ = writeln!(out, "    reference: {}", r.expected_pattern);
            let _ = writeln!(out, "    engine:    {}", render::state(&r.residual, doc.tolerance));
            let _ = writeln!(
                out,
                "    deviation {}  {}",
                render::sig12(r.deviation),
                if r.matched { "MATCH" } else { "MISMATCH" }
            );
        }
        let _ = writeln!(out, "  table verdict: {}", render::pass_fail(t.all_matched));
    }
    let _ = writeln!(out, "verdict: {}", render::pass_fail(doc.all_matched));
    out
}

pub fn attack(doc: &AttackDoc, tol: f64) -> String {
    let mut out = String::new();
    let r = &doc.report;
    let _ = writeln!(out, "protocol: {}", r.protocol);
    let _ = writeln!(out, "tapped qubit: {}  attack: {}  truncated: {}", r.tapped_qubit, r.attack, r.truncated);
    let _ = writeln!(out, "secret one: {}", render::state(&doc.secret_one, tol));
    let _ = writeln!(out, "secret two: {}", render::state(&doc.secret_two, tol));
    let _ = writeln!(out);
    for s in &r.alice_stage_states {
        let _ = writeln!(
            out,
            "after alice outcome {} (p = {}):",
            s.outcome,
            render::probability(s.probability, tol)
        );
        let _ = writeln!(out, "  {}", state_line(&s.state, tol));
    }
    let _ = writeln!(out);
    for b in &r.branches {
        let bob = match b.bob_outcome {
            Some(o) => o.to_string(),
            None => "-".to_string(),
        };
        let _ = writeln!(
            out,
            "branch alice={} bob={}  p = {}  eve schmidt rank {}",
            b.alice_outcome,
            bob,
            render::probability(b.probability, tol),
            b.eve_schmidt_rank
        );
        let _ = writeln!(out, "  joint residual: {}", state_line(&b.joint_state, tol));
        if let Some(f) = b.corrected_fidelity {
            let _ = writeln!(out, "  corrected fidelity: {}", render::sig12(f));
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "eve stays unentangled in every branch: {}", r.monogamy_ok);
    if let Some(f) = r.min_corrected_fidelity {
        let _ = writeln!(out, "min corrected fidelity: {}", render::sig12(f));
    }
    let _ = writeln!(
        out,
        "eve's distinguishability between the two secrets: {}",
        render::sig12(doc.eve_information)
    );
    let _ = writeln!(out, "verdict (leak within {}): {}", render::sig12(doc.tolerance), render::pass_fail(doc.no_leak));
    out
}

pub fn corrections(doc: &CorrectionsDoc, tol: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "protocol: {}  ({} corrections)", doc.protocol, doc.entries.len());
    for e in &doc.entries {
        let name = match &e.pauli {
            Some(p) => p.clone(),
            None => format!("{}-qubit signed permutation", e.arity),
        };
        let _ = writeln!(
            out,
            "alice={:2} bob={:2}  {}  signed permutation: {}  unitarity deviation: {}",
            e.alice_outcome,
            e.bob_outcome,
            name,
            e.signed_permutation,
            render::sig12(e.unitarity_deviation)
        );
        for row in &e.matrix {
            let cells: Vec<String> = row
                .iter()
                .map(|c| render::complex(num_complex::Complex64::new(c[0], c[1]), tol))
                .collect();
            let _ = writeln!(out, "    [ {} ]", cells.join("  "));
        }
    }
    let _ = writeln!(out, "verdict: {}", render::pass_fail(doc.all_ok));
    out
}

pub fn verify_all(doc: &VerifyAllDoc) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "tolerance: {}", render::sig12(doc.tolerance));
    for s in &doc.sections {
        let _ = writeln!(out, "{} {} — {}", render::pass_fail(s.ok), s.name, s.detail);
    }
    let _ = writeln!(out, "verdict: {}", render::pass_fail(doc.all_ok));
    out
}
