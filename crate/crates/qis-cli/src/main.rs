//! `qis` — command-line runner and verifier for the splitting protocols.
//!
//! Subcommands: `run`, `tables`, `attack`, `corrections`, `verify-all`.
//! Exit status: 0 when every verification in the invocation passed its
//! tolerance, 1 when a verification failed, 2 on malformed input.

mod docs;
mod render;
mod text;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qis_core::protocols::{random_secret_for, run_protocol, ProtocolId};
use qis_core::qcore::{PureState, QubitLabel};
use qis_core::security::{AttackKind, AttackSpec};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "qis",
    about = "Run, verify, and attack quantum-information-splitting protocols",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Verification tolerance for fidelities, deviations, and leak grades.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Emit every branch with its exact probability.
    Enumerate,
    /// Draw branches from the enumerated distribution with a seeded generator.
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackChoice {
    /// Copy the tapped qubit's computational value onto Eve's ancilla.
    Cnot,
    /// Prepare the ancilla in |+⟩ and flip the tapped qubit with it.
    Xcopy,
}

#[derive(Subcommand)]
enum Command {
    /// Run one protocol on a secret and report every branch.
    Run {
        /// hbb-ghz, c4-single, c4-entangled, c5-single, or c5-arbitrary.
        #[arg(long)]
        protocol: String,
        /// Comma-separated amplitudes ("0.6,0.8i") or "random:SEED".
        #[arg(long, default_value = "random:0")]
        secret: String,
        #[arg(long, value_enum, default_value_t = Mode::Enumerate)]
        mode: Mode,
        /// Generator seed for sample mode.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of draws in sample mode.
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
    /// Check the built-in reference tables against the engine.
    Tables {
        /// 1-5, I-V, or "all".
        #[arg(long, default_value = "all")]
        table: String,
    },
    /// Couple Eve's ancilla to one channel qubit and grade what she learns.
    Attack {
        #[arg(long)]
        protocol: String,
        /// Channel qubit Eve taps, e.g. "2".
        #[arg(long)]
        tap: String,
        #[arg(long, value_enum, default_value_t = AttackChoice::Cnot)]
        attack: AttackChoice,
        /// First secret (amplitudes or "random:SEED").
        #[arg(long, default_value = "random:11")]
        secret: String,
        /// Second secret for the distinguishability grade.
        #[arg(long, default_value = "random:12")]
        secret2: String,
        /// Stop after Alice's measurement, before Bob reveals anything.
        #[arg(long, default_value_t = false)]
        truncate_after_alice: bool,
    },
    /// Derive and classify every correction a protocol needs.
    Corrections {
        #[arg(long)]
        protocol: String,
    },
    /// Run the whole verification suite.
    VerifyAll,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(ok) => {
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> qis_core::Result<bool> {
    let tol = cli.tolerance;
    match &cli.command {
        Command::Run { protocol, secret, mode, seed, trials } => {
            let id: ProtocolId = protocol.parse()?;
            let secret = parse_secret(id, secret)?;
            let report = run_protocol(id, &secret)?;
            let ok = docs::run_verdict(&report, tol);
            match mode {
                Mode::Enumerate => {
                    emit(cli, &report, |r| text::protocol_report(r, tol, ok));
                }
                Mode::Sample => {
                    let doc = docs::sample_report(&report, *seed, *trials);
                    emit(cli, &doc, |d| text::sample(d, tol));
                }
            }
            Ok(ok)
        }
        Command::Tables { table } => {
            let numbers = parse_tables(table)?;
            let doc = docs::tables_doc(&numbers, tol)?;
            emit(cli, &doc, text::tables);
            Ok(doc.all_matched)
        }
        Command::Attack { protocol, tap, attack, secret, secret2, truncate_after_alice } => {
            let id: ProtocolId = protocol.parse()?;
            let tapped_qubit: QubitLabel = tap.parse()?;
            let spec = AttackSpec {
                protocol: id,
                tapped_qubit,
                attack: match attack {
                    AttackChoice::Cnot => AttackKind::Cnot,
                    AttackChoice::Xcopy => AttackKind::XCopy,
                },
                truncate_after_alice: *truncate_after_alice,
            };
            let one = parse_secret(id, secret)?;
            let two = parse_secret(id, secret2)?;
            let doc = docs::attack_doc(&spec, &one, &two, tol)?;
            emit(cli, &doc, |d| text::attack(d, tol));
            Ok(doc.no_leak)
        }
        Command::Corrections { protocol } => {
            let id: ProtocolId = protocol.parse()?;
            let doc = docs::corrections_doc(id, tol)?;
            emit(cli, &doc, |d| text::corrections(d, tol));
            Ok(doc.all_ok)
        }
        Command::VerifyAll => {
            let doc = docs::verify_all_doc(tol)?;
            emit(cli, &doc, text::verify_all);
            Ok(doc.all_ok)
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, doc: &T, render_text: impl Fn(&T) -> String) {
    use std::io::Write;
    let body = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("serializable document");
            s.push('\n');
            s
        }
        Format::Text => render_text(doc),
    };
    // A closed pipe (e.g. piping into `head`) must not panic the process.
    let _ = std::io::stdout().write_all(body.as_bytes());
}

/// Accepts "random:SEED" or a comma-separated amplitude list; lists must be
/// within 1e-6 of unit norm and are then normalized exactly.
fn parse_secret(id: ProtocolId, input: &str) -> qis_core::Result<PureState> {
    if let Some(seed) = input.strip_prefix("random:") {
        let seed: u64 = seed.parse().map_err(|_| {
            qis_core::QisError::InvalidSecret(format!("bad seed in {input:?}"))
        })?;
        return Ok(random_secret_for(id, seed));
    }
    let amps = input
        .split(',')
        .map(|part| parse_complex(part.trim()))
        .collect::<qis_core::Result<Vec<Complex64>>>()?;
    PureState::new(amps)
}

/// Parses one complex amplitude: "0.6", "-0.8i", "i", "0.1+0.2i", "1e-3-2e-4i".
fn parse_complex(s: &str) -> qis_core::Result<Complex64> {
    let bad = || qis_core::QisError::InvalidSecret(format!("cannot parse amplitude {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    // Split at a sign that starts the imaginary part (not a leading sign and
    // not an exponent sign).
    let bytes = s.as_bytes();
    let mut split = None;
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-')
            && bytes[i - 1] != b'e'
            && bytes[i - 1] != b'E'
        {
            split = Some(i);
        }
    }
    match split {
        Some(i) => {
            let re: f64 = s[..i].parse().map_err(|_| bad())?;
            let im = parse_signed_unit(&s[i..]).ok_or_else(bad)?;
            Ok(Complex64::new(re, im))
        }
        None => {
            if s.ends_with('i') || s.ends_with('I') {
                Ok(Complex64::new(0.0, parse_signed_unit(s).ok_or_else(bad)?))
            } else {
                Ok(Complex64::new(s.parse().map_err(|_| bad())?, 0.0))
            }
        }
    }
}

/// Parses an imaginary term "0.8i", "i", "-i", "+2e-3i" to its coefficient.
fn parse_signed_unit(s: &str) -> Option<f64> {
    let body = s.strip_suffix('i').or_else(|| s.strip_suffix('I'))?;
    match body {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => body.parse().ok(),
    }
}

/// Accepts "all", arabic 1-5, or roman I-V (case-insensitive).
fn parse_tables(input: &str) -> qis_core::Result<Vec<u8>> {
    let lower = input.to_ascii_lowercase();
    match lower.as_str() {
        "all" => Ok(vec![1, 2, 3, 4, 5]),
        "1" | "i" => Ok(vec![1]),
        "2" | "ii" => Ok(vec![2]),
        "3" | "iii" => Ok(vec![3]),
        "4" | "iv" => Ok(vec![4]),
        "5" | "v" => Ok(vec![5]),
        _ => Err(qis_core::QisError::Internal(format!(
            "unknown table {input:?}; expected 1-5, I-V, or \"all\""
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_amplitude_forms_parse() {
        assert_eq!(parse_complex("0.6").unwrap(), Complex64::new(0.6, 0.0));
        assert_eq!(parse_complex("-0.8i").unwrap(), Complex64::new(0.0, -0.8));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("0.1+0.2i").unwrap(), Complex64::new(0.1, 0.2));
        assert_eq!(parse_complex("1e-3-2e-4i").unwrap(), Complex64::new(1e-3, -2e-4));
        assert_eq!(parse_complex("-0.5+i").unwrap(), Complex64::new(-0.5, 1.0));
        assert!(parse_complex("0.1+0.2").is_err());
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn secrets_parse_and_normalize() {
        let s = parse_secret(ProtocolId::C4Single, "0.6, 0.8i").unwrap();
        assert_eq!(s.num_qubits(), 1);
        assert!((s.amplitude(1).im - 0.8).abs() < 1e-12);
        let r = parse_secret(ProtocolId::C4Single, "random:7").unwrap();
        assert_eq!(r.num_qubits(), 1);
        assert!(parse_secret(ProtocolId::C4Single, "0.9,0.9").is_err());
        assert!(parse_secret(ProtocolId::C4Single, "random:x").is_err());
    }

    #[test]
    fn table_selectors_parse() {
        assert_eq!(parse_tables("all").unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(parse_tables("IV").unwrap(), vec![4]);
        assert_eq!(parse_tables("v").unwrap(), vec![5]);
        assert_eq!(parse_tables("3").unwrap(), vec![3]);
        assert!(parse_tables("6").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
