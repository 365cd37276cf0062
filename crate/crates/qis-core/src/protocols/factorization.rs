use num_complex::Complex64;
use serde::Serialize;

use crate::channels::table5_basis;
use crate::qcore::{PureState, CONE, MATCH_TOL};
use crate::Result;

const BELL_NAMES: [&str; 4] = ["phi+", "phi-", "psi+", "psi-"];

/// One slot of the four-Bell-state expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlotAssignment {
    pub slot: String,
    pub bell: String,
    pub sign: i8,
}

/// Result of searching for a Bell-pair factorization of the first
/// sixteen-outcome basis vector.
#[derive(Debug, Clone, Serialize)]
pub struct FactorizationReport {
    /// Best overlap achievable by permuting the four Bell states without
    /// sign freedom.  Capping at 1/2 shows a plain relabeling cannot work.
    pub unsigned_max_overlap: f64,
    /// Overlap of the first sign-decorated assignment that reproduces the
    /// basis vector exactly.
    pub signed_overlap: f64,
    pub satisfied: bool,
    pub assignment: Vec<SlotAssignment>,
}

/// Checks that the first vector of the sixteen-outcome measurement basis is
/// exactly `(B1(|0⟩+|1⟩) + B2(|0⟩−|1⟩))|0⟩ + (B3(|0⟩−|1⟩) + B4(|0⟩+|1⟩))|1⟩`
/// for some signed assignment of the four Bell states to the slots `B1..B4`,
/// and that without signs the best achievable overlap is only 1/2.
pub fn verify_bell_factorization() -> Result<FactorizationReport> {
    let bells: Vec<PureState> = vec![
        PureState::from_terms(2, &[(0b00, CONE), (0b11, CONE)])?,
        PureState::from_terms(2, &[(0b00, CONE), (0b11, -CONE)])?,
        PureState::from_terms(2, &[(0b01, CONE), (0b10, CONE)])?,
        PureState::from_terms(2, &[(0b01, CONE), (0b10, -CONE)])?,
    ];
    let target = table5_basis().vector(0).clone();

    let mut unsigned_max: f64 = 0.0;
    for perm in permutations_of_four() {
        let v = expansion(&bells, &perm, &[1, 1, 1, 1])?;
        unsigned_max = unsigned_max.max(v.inner(&target)?.norm());
    }

    let mut best_overlap: f64 = 0.0;
    let mut found: Option<([usize; 4], [i8; 4], f64)> = None;
    'search: for perm in permutations_of_four() {
        for signs in sign_patterns() {
            let v = expansion(&bells, &perm, &signs)?;
            let overlap = v.inner(&target)?.norm();
            best_overlap = best_overlap.max(overlap);
            if overlap > 1.0 - MATCH_TOL {
                found = Some((perm, signs, overlap));
                break 'search;
            }
        }
    }

    let (assignment, signed_overlap) = match found {
        Some((perm, signs, overlap)) => {
            let slots = perm
                .iter()
                .zip(signs.iter())
                .enumerate()
                .map(|(i, (&bell, &sign))| SlotAssignment {
                    slot: format!("B{}", i + 1),
                    bell: BELL_NAMES[bell].to_string(),
                    sign,
                })
                .collect();
            (slots, overlap)
        }
        None => (Vec::new(), best_overlap),
    };

    Ok(FactorizationReport {
        unsigned_max_overlap: unsigned_max,
        signed_overlap,
        satisfied: signed_overlap > 1.0 - MATCH_TOL,
        assignment,
    })
}

/// `(B1(|0⟩+|1⟩) + B2(|0⟩−|1⟩))|0⟩ + (B3(|0⟩−|1⟩) + B4(|0⟩+|1⟩))|1⟩`,
/// Bell pair on qubits (0,1), the ± qubit at position 2, the flag at 3.
fn expansion(bells: &[PureState], perm: &[usize; 4], signs: &[i8; 4]) -> Result<PureState> {
    let plus = [CONE, CONE];
    let minus = [CONE, -CONE];
    let ket0 = [CONE, Complex64::new(0.0, 0.0)];
    let ket1 = [Complex64::new(0.0, 0.0), CONE];
    let slots: [(&[Complex64; 2], &[Complex64; 2]); 4] =
        [(&plus, &ket0), (&minus, &ket0), (&minus, &ket1), (&plus, &ket1)];

    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    for (slot, (mid, last)) in slots.iter().enumerate() {
        let bell = &bells[perm[slot]];
        let scale = Complex64::new(f64::from(signs[slot]), 0.0);
        for b in 0..4 {
            for m in 0..2 {
                for l in 0..2 {
                    amps[(b << 2) | (m << 1) | l] +=
                        scale * bell.amplitude(b) * mid[m] * last[l];
                }
            }
        }
    }
    PureState::from_unnormalized(amps)
}

/// All 24 permutations of `[0,1,2,3]` in lexicographic order.
fn permutations_of_four() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            if b == a {
                continue;
            }
            for c in 0..4 {
                if c == a || c == b {
                    continue;
                }
                let d = 6 - a - b - c;
                out.push([a, b, c, d]);
            }
        }
    }
    out
}

/// All 16 sign patterns, `+1` before `-1`, last slot varying fastest.
fn sign_patterns() -> Vec<[i8; 4]> {
    let mut out = Vec::with_capacity(16);
    for mask in 0..16u8 {
        out.push([
            if mask & 8 == 0 { 1 } else { -1 },
            if mask & 4 == 0 { 1 } else { -1 },
            if mask & 2 == 0 { 1 } else { -1 },
            if mask & 1 == 0 { 1 } else { -1 },
        ]);
    }
    out
}
