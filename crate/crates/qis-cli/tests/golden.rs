//! Golden-file tests pinning the CLI's JSON schema and its determinism,
//! plus the exit-status contract.
//!
//! Regenerate the golden files after an intentional schema change with
//! `UPDATE_GOLDEN=1 cargo test -p qis-cli --test golden`.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qis"))
        .args(args)
        .output()
        .expect("the qis binary runs")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check_golden(name: &str, args: &[&str], expect_success: bool) {
    let output = qis(args);
    assert_eq!(
        output.status.code(),
        Some(if expect_success { 0 } else { 1 }),
        "unexpected exit status for {args:?}: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &output.stdout).expect("golden file written");
        return;
    }
    let expected = std::fs::read(&path)
        .unwrap_or_else(|_| panic!("missing golden file {name}; regenerate with UPDATE_GOLDEN=1"));
    assert_eq!(
        output.stdout,
        expected,
        "output for {args:?} drifted from {name}; regenerate with UPDATE_GOLDEN=1 if intended"
    );
}

#[test]
fn run_enumeration_matches_golden_file() {
    check_golden(
        "run_c4_single_basis.json",
        &["run", "--protocol", "c4-single", "--secret", "1,0", "--format", "json"],
        true,
    );
}

#[test]
fn sampling_matches_golden_file() {
    check_golden(
        "sample_c5_arbitrary.json",
        &[
            "run",
            "--protocol",
            "c5-arbitrary",
            "--secret",
            "random:7",
            "--mode",
            "sample",
            "--seed",
            "9",
            "--trials",
            "64",
            "--format",
            "json",
        ],
        true,
    );
}

#[test]
fn table_four_matches_golden_file() {
    check_golden("tables_iv.json", &["tables", "--table", "IV", "--format", "json"], true);
}

#[test]
fn tapped_run_matches_golden_file() {
    check_golden(
        "attack_c4_single_tap2.json",
        &[
            "attack",
            "--protocol",
            "c4-single",
            "--tap",
            "2",
            "--secret",
            "0.6,0.8i",
            "--secret2",
            "0.8,0.6i",
            "--format",
            "json",
        ],
        true,
    );
}

#[test]
fn corrections_match_golden_file() {
    check_golden(
        "corrections_hbb_ghz.json",
        &["corrections", "--protocol", "hbb-ghz", "--format", "json"],
        true,
    );
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args =
        ["run", "--protocol", "c5-single", "--secret", "random:3", "--format", "json"];
    let first = qis(&args);
    let second = qis(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let text_args = ["attack", "--protocol", "c5-single", "--tap", "3", "--attack", "xcopy"];
    let first = qis(&text_args);
    let second = qis(&text_args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn exit_status_contract_holds() {
    // All verifications pass.
    assert_eq!(qis(&["verify-all"]).status.code(), Some(0));

    // A verification that fails: a truncated tap leaks, so the no-leak
    // grade cannot pass.
    let leak = qis(&[
        "attack",
        "--protocol",
        "c4-single",
        "--tap",
        "4",
        "--secret",
        "1,0",
        "--secret2",
        "0,1",
        "--truncate-after-alice",
    ]);
    assert_eq!(leak.status.code(), Some(1));

    // Malformed input: a secret the full-pair protocol must reject.
    let skewed = qis(&["run", "--protocol", "c4-entangled", "--secret", "0.5,0.5,0.5,0.5"]);
    assert_eq!(skewed.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&skewed.stderr).contains("invalid secret"));

    // Malformed input: non-normalized amplitudes.
    let off_norm = qis(&["run", "--protocol", "c4-single", "--secret", "0.9,0.9"]);
    assert_eq!(off_norm.status.code(), Some(2));

    // Malformed input: unknown protocol.
    let unknown = qis(&["run", "--protocol", "c9-mystery"]);
    assert_eq!(unknown.status.code(), Some(2));

    // Malformed input: a tap Eve cannot reach.
    let bad_tap = qis(&["attack", "--protocol", "c4-single", "--tap", "1"]);
    assert_eq!(bad_tap.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_tap.stderr).contains("invalid attack tap"));
}

#[test]
fn text_format_carries_the_verdict_line() {
    let output = qis(&["tables", "--table", "1"]);
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8(output.stdout).expect("utf-8 output");
    assert!(text.contains("reference:"));
    assert!(text.contains("engine:"));
    assert!(text.lines().last().unwrap().starts_with("verdict: PASS"));
}
