//! Entangled channel states and the measurement bases the splitting
//! protocols are built from.

use num_complex::Complex64;

use crate::qcore::{
    single_qubit_cliffords, MeasurementBasis, PureState, QubitLabel, UnitaryOp,
};
use crate::{QisError, Result};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn bits(s: &str) -> usize {
    usize::from_str_radix(s, 2).expect("binary literal")
}

fn terms(n: usize, entries: &[(f64, &str)]) -> PureState {
    let parsed: Vec<(usize, Complex64)> =
        entries.iter().map(|&(c, b)| (bits(b), re(c))).collect();
    PureState::from_terms(n, &parsed).expect("hard-coded terms are nonzero")
}

/// `(|000⟩ + sign·|111⟩)/√2`; `sign` must be `+1` or `-1`.
pub fn make_ghz3(sign: i32) -> Result<PureState> {
    if sign != 1 && sign != -1 {
        return Err(QisError::InvalidSign(sign));
    }
    Ok(terms(3, &[(1.0, "000"), (sign as f64, "111")]))
}

/// `(|0000⟩ + |1111⟩)/√2`, the four-partite GHZ state used as a
/// local-inequivalence reference.
pub fn make_ghz4() -> PureState {
    terms(4, &[(1.0, "0000"), (1.0, "1111")])
}

/// The four-partite channel `½(|0000⟩ + |0110⟩ + |1001⟩ − |1111⟩)`.
pub fn make_c4() -> PureState {
    terms(4, &[(1.0, "0000"), (1.0, "0110"), (1.0, "1001"), (-1.0, "1111")])
}

/// The five-partite channel `½(|00000⟩ + |00111⟩ + |11101⟩ + |11010⟩)`.
pub fn make_c5() -> PureState {
    terms(5, &[(1.0, "00000"), (1.0, "00111"), (1.0, "11101"), (1.0, "11010")])
}

/// The literal product-form cluster state on a line of `n` qubits
/// (`2 <= n <= 10`): an equal superposition where basis label `b` carries
/// sign `(−1)^{#\{p : b_p = 0 ∧ b_{p+1} = 1\}}`.
///
/// For `n = 2` this reads `(|00⟩ − |01⟩ + |10⟩ + |11⟩)/2`, which is locally
/// equivalent to a Bell state.
pub fn make_cluster_generic(n: usize) -> Result<PureState> {
    if !(2..=10).contains(&n) {
        return Err(QisError::ClusterSizeOutOfRange(n));
    }
    let dim = 1usize << n;
    let mut amps = Vec::with_capacity(dim);
    for index in 0..dim {
        let mut sign = 1.0;
        for p in 0..n - 1 {
            let b_p = (index >> (n - 1 - p)) & 1;
            let b_next = (index >> (n - 2 - p)) & 1;
            if b_p == 0 && b_next == 1 {
                sign = -sign;
            }
        }
        amps.push(re(sign));
    }
    PureState::from_unnormalized(amps)
}

/// The asymmetric W state `½|001⟩ + ½|010⟩ + (1/√2)|100⟩`.
pub fn make_asymmetric_w() -> PureState {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    terms(3, &[(0.5, "001"), (0.5, "010"), (r, "100")])
}

/// The Bell basis `[Φ+, Φ−, Ψ+, Ψ−]`, addressed to qubits `(a, 1)`.
pub fn bell_basis() -> MeasurementBasis {
    MeasurementBasis::new(
        vec![QubitLabel::SecretA, QubitLabel::Channel(1)],
        vec![
            terms(2, &[(1.0, "00"), (1.0, "11")]),
            terms(2, &[(1.0, "00"), (-1.0, "11")]),
            terms(2, &[(1.0, "01"), (1.0, "10")]),
            terms(2, &[(1.0, "01"), (-1.0, "10")]),
        ],
    )
    .expect("bell vectors are orthonormal")
}

/// The single-qubit `{(|0⟩+|1⟩)/√2, (|0⟩−|1⟩)/√2}` basis, addressed to
/// qubit `2` by default; re-target with
/// [`MeasurementBasis::with_targets`] where a protocol measures elsewhere.
pub fn pm_basis() -> MeasurementBasis {
    MeasurementBasis::new(
        vec![QubitLabel::Channel(2)],
        vec![
            terms(1, &[(1.0, "0"), (1.0, "1")]),
            terms(1, &[(1.0, "0"), (-1.0, "1")]),
        ],
    )
    .expect("plus/minus vectors are orthonormal")
}

/// GHZ-type basis over `(a, a', 1)` listing the pairs `{000, 111}` and
/// `{001, 110}` with both signs, completed canonically to eight vectors.
pub fn ghz3_basis() -> MeasurementBasis {
    MeasurementBasis::new(
        vec![QubitLabel::SecretA, QubitLabel::SecretAPrime, QubitLabel::Channel(1)],
        vec![
            terms(3, &[(1.0, "000"), (1.0, "111")]),
            terms(3, &[(1.0, "000"), (-1.0, "111")]),
            terms(3, &[(1.0, "001"), (1.0, "110")]),
            terms(3, &[(1.0, "001"), (-1.0, "110")]),
        ],
    )
    .expect("ghz vectors are orthonormal")
}

/// GHZ-type basis over `(a, 1, 2)` listing the pairs `{000, 111}` and
/// `{011, 100}` with both signs, completed canonically to eight vectors.
/// The flipped second pair matches the support of a five-partite channel
/// carrying a single secret qubit; reusing [`ghz3_basis`] there would route
/// probability onto completion-added outcomes.
pub fn ghz3_basis_flip_first() -> MeasurementBasis {
    MeasurementBasis::new(
        vec![QubitLabel::SecretA, QubitLabel::Channel(1), QubitLabel::Channel(2)],
        vec![
            terms(3, &[(1.0, "000"), (1.0, "111")]),
            terms(3, &[(1.0, "000"), (-1.0, "111")]),
            terms(3, &[(1.0, "011"), (1.0, "100")]),
            terms(3, &[(1.0, "011"), (-1.0, "100")]),
        ],
    )
    .expect("ghz vectors are orthonormal")
}

/// Two-qubit basis over `(2, 3)` listing only `|00⟩` and `|11⟩`; completion
/// appends `|01⟩` and `|10⟩`, which never fire in an honest run.
pub fn bob_c4_partial_basis() -> MeasurementBasis {
    MeasurementBasis::new(
        vec![QubitLabel::Channel(2), QubitLabel::Channel(3)],
        vec![
            PureState::basis_state(2, 0b00).expect("in range"),
            PureState::basis_state(2, 0b11).expect("in range"),
        ],
    )
    .expect("distinct kets are orthonormal")
}

/// Two-qubit basis over `(3, 4)`: `(|00⟩ ± |10⟩)/√2, (|01⟩ ± |11⟩)/√2`.
pub fn bob_c5_basis() -> MeasurementBasis {
    MeasurementBasis::new(
        vec![QubitLabel::Channel(3), QubitLabel::Channel(4)],
        vec![
            terms(2, &[(1.0, "00"), (1.0, "10")]),
            terms(2, &[(1.0, "00"), (-1.0, "10")]),
            terms(2, &[(1.0, "01"), (1.0, "11")]),
            terms(2, &[(1.0, "01"), (-1.0, "11")]),
        ],
    )
    .expect("vectors are orthonormal")
}

const TABLE5_OUTCOME_TERMS: [[(f64, &str); 4]; 16] = [
    [(1.0, "0000"), (1.0, "1001"), (1.0, "0111"), (1.0, "1110")],
    [(1.0, "0000"), (1.0, "1001"), (-1.0, "0111"), (-1.0, "1110")],
    [(1.0, "0000"), (-1.0, "1001"), (1.0, "0111"), (-1.0, "1110")],
    [(1.0, "0000"), (-1.0, "1001"), (-1.0, "0111"), (1.0, "1110")],
    [(1.0, "0001"), (1.0, "1000"), (1.0, "0110"), (1.0, "1111")],
    [(1.0, "0001"), (1.0, "1000"), (-1.0, "0110"), (-1.0, "1111")],
    [(1.0, "0001"), (-1.0, "1000"), (1.0, "0110"), (-1.0, "1111")],
    [(1.0, "0001"), (-1.0, "1000"), (-1.0, "0110"), (1.0, "1111")],
    [(1.0, "0011"), (1.0, "1010"), (1.0, "0100"), (1.0, "1101")],
    [(1.0, "0011"), (1.0, "1010"), (-1.0, "0100"), (-1.0, "1101")],
    [(1.0, "0011"), (-1.0, "1010"), (1.0, "0100"), (-1.0, "1101")],
    [(1.0, "0011"), (-1.0, "1010"), (-1.0, "0100"), (1.0, "1101")],
    [(1.0, "0010"), (1.0, "1011"), (1.0, "0101"), (1.0, "1100")],
    [(1.0, "0010"), (1.0, "1011"), (-1.0, "0101"), (-1.0, "1100")],
    [(1.0, "0010"), (-1.0, "1011"), (1.0, "0101"), (-1.0, "1100")],
    [(1.0, "0010"), (-1.0, "1011"), (-1.0, "0101"), (1.0, "1100")],
];

/// The sixteen-outcome joint basis over `(a, a', 1, 5)` used when an
/// arbitrary two-qubit secret rides the five-partite channel.
pub fn table5_basis() -> MeasurementBasis {
    let vectors = TABLE5_OUTCOME_TERMS.iter().map(|row| terms(4, row)).collect();
    MeasurementBasis::new(
        vec![
            QubitLabel::SecretA,
            QubitLabel::SecretAPrime,
            QubitLabel::Channel(1),
            QubitLabel::Channel(5),
        ],
        vectors,
    )
    .expect("the sixteen outcome vectors are orthonormal")
}

/// Searches for single-qubit Clifford rotations `U_1 ⊗ … ⊗ U_n` taking `a`
/// to `b` up to global phase. Returns one gate per qubit position when an
/// assignment exists. Exhaustive over the 24-element single-qubit Clifford
/// group per qubit, so `n` is capped at 6.
pub fn local_equivalence_search(
    a: &PureState,
    b: &PureState,
) -> Result<Option<Vec<UnitaryOp>>> {
    if a.num_qubits() != b.num_qubits() {
        return Err(QisError::DimensionMismatch(format!(
            "searching between {}-qubit and {}-qubit states",
            a.num_qubits(),
            b.num_qubits()
        )));
    }
    let n = a.num_qubits();
    if n == 0 || n > 6 {
        return Err(QisError::TooManyQubits(n, 6));
    }
    let group = single_qubit_cliffords();
    let mut picks = vec![0usize; n];
    if dfs(a, b, 0, n, group, &mut picks)? {
        Ok(Some(picks.iter().map(|&gi| group[gi].clone()).collect()))
    } else {
        Ok(None)
    }
}

fn dfs(
    state: &PureState,
    b: &PureState,
    q: usize,
    n: usize,
    group: &[UnitaryOp],
    picks: &mut Vec<usize>,
) -> Result<bool> {
    for (gi, g) in group.iter().enumerate() {
        let next = state.apply_unitary(g, &[q])?;
        picks[q] = gi;
        if q + 1 == n {
            if next.inner(b)?.norm() > 1.0 - 1e-9 {
                return Ok(true);
            }
        } else if dfs(&next, b, q + 1, n, group, picks)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Reorders qubits: position `p` of the result carries what position
/// `perm[p]` carried in the input.
pub fn permute_qubits(state: &PureState, perm: &[usize]) -> Result<PureState> {
    let n = state.num_qubits();
    if perm.len() != n {
        return Err(QisError::DimensionMismatch(format!(
            "permutation of length {} for {n} qubit(s)",
            perm.len()
        )));
    }
    crate::qcore::check_targets(n, perm)?;
    let dim = state.dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (new_index, amp) in amps.iter_mut().enumerate() {
        let mut old_index = 0usize;
        for (p, &source) in perm.iter().enumerate() {
            if (new_index >> (n - 1 - p)) & 1 == 1 {
                old_index |= 1 << (n - 1 - source);
            }
        }
        *amp = state.amplitude(old_index);
    }
    PureState::new(amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::MATCH_TOL;

    #[test]
    fn ghz3_signs() {
        let plus = make_ghz3(1).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((plus.amplitude(0b000).re - r).abs() < MATCH_TOL);
        assert!((plus.amplitude(0b111).re - r).abs() < MATCH_TOL);
        let minus = make_ghz3(-1).unwrap();
        assert!((minus.amplitude(0b111).re + r).abs() < MATCH_TOL);
        assert!(matches!(make_ghz3(2), Err(QisError::InvalidSign(2))));
    }

    #[test]
    fn c4_amplitudes() {
        let s = make_c4();
        for (idx, want) in [(0b0000, 0.5), (0b0110, 0.5), (0b1001, 0.5), (0b1111, -0.5)] {
            assert!((s.amplitude(idx).re - want).abs() < MATCH_TOL);
        }
        assert!(s.amplitude(0b0001).norm() < MATCH_TOL);
    }

    #[test]
    fn c5_amplitudes() {
        let s = make_c5();
        for idx in [0b00000, 0b00111, 0b11101, 0b11010] {
            assert!((s.amplitude(idx).re - 0.5).abs() < MATCH_TOL);
        }
        assert!(s.amplitude(0b11111).norm() < MATCH_TOL);
    }

    #[test]
    fn channel_single_qubit_marginals_are_maximally_mixed() {
        for (state, n) in [(make_c4(), 4), (make_c5(), 5), (make_ghz3(1).unwrap(), 3)] {
            for q in 0..n {
                let rho = state.reduced_density(&[q]).unwrap();
                assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < MATCH_TOL);
                assert!((rho.matrix()[(1, 1)].re - 0.5).abs() < MATCH_TOL);
                assert!(rho.matrix()[(0, 1)].norm() < MATCH_TOL);
            }
        }
    }

    #[test]
    fn cluster_two_qubit_literal_amplitudes() {
        let s = make_cluster_generic(2).unwrap();
        for (idx, want) in [(0b00, 0.5), (0b01, -0.5), (0b10, 0.5), (0b11, 0.5)] {
            assert!((s.amplitude(idx).re - want).abs() < MATCH_TOL);
        }
    }

    #[test]
    fn cluster_sizes_are_bounded_and_normalized() {
        assert!(matches!(make_cluster_generic(1), Err(QisError::ClusterSizeOutOfRange(1))));
        assert!(matches!(make_cluster_generic(11), Err(QisError::ClusterSizeOutOfRange(11))));
        for n in 2..=10 {
            let s = make_cluster_generic(n).unwrap();
            assert!((s.norm_sq() - 1.0).abs() < MATCH_TOL);
            assert_eq!(s.num_qubits(), n);
        }
    }

    #[test]
    fn cluster_two_is_bell_class() {
        let bell = PureState::from_terms(
            2,
            &[(0b00, Complex64::new(1.0, 0.0)), (0b11, Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let found = local_equivalence_search(&make_cluster_generic(2).unwrap(), &bell).unwrap();
        let gates = found.expect("two-qubit cluster is Bell-class");
        let mut state = make_cluster_generic(2).unwrap();
        for (q, g) in gates.iter().enumerate() {
            state = state.apply_unitary(g, &[q]).unwrap();
        }
        assert!(state.equal_up_to_global_phase(&bell).unwrap());
    }

    #[test]
    fn asymmetric_w_amplitudes() {
        let s = make_asymmetric_w();
        assert!((s.amplitude(0b001).re - 0.5).abs() < MATCH_TOL);
        assert!((s.amplitude(0b010).re - 0.5).abs() < MATCH_TOL);
        assert!((s.amplitude(0b100).re - std::f64::consts::FRAC_1_SQRT_2).abs() < MATCH_TOL);
        assert!((s.norm_sq() - 1.0).abs() < MATCH_TOL);
    }

    #[test]
    fn all_protocol_bases_are_orthonormal_and_sized() {
        let cases: [(MeasurementBasis, usize, usize); 7] = [
            (bell_basis(), 4, 4),
            (pm_basis(), 2, 2),
            (ghz3_basis(), 4, 8),
            (ghz3_basis_flip_first(), 4, 8),
            (bob_c4_partial_basis(), 2, 4),
            (bob_c5_basis(), 4, 4),
            (table5_basis(), 16, 16),
        ];
        for (basis, listed, dim) in cases {
            assert_eq!(basis.listed_count(), listed);
            assert_eq!(basis.dim(), dim);
        }
    }

    #[test]
    fn ghz_basis_completions_differ_between_variants() {
        // The completion kets must avoid each channel's support patterns.
        let a = ghz3_basis();
        for (k, idx) in [0b010, 0b011, 0b100, 0b101].into_iter().enumerate() {
            assert!((a.vector(4 + k).amplitude(idx).re - 1.0).abs() < MATCH_TOL);
        }
        let b = ghz3_basis_flip_first();
        for (k, idx) in [0b001, 0b010, 0b101, 0b110].into_iter().enumerate() {
            assert!((b.vector(4 + k).amplitude(idx).re - 1.0).abs() < MATCH_TOL);
        }
    }

    #[test]
    fn table5_row_one_vector() {
        let basis = table5_basis();
        let v = basis.vector(0);
        for idx in [0b0000, 0b1001, 0b0111, 0b1110] {
            assert!((v.amplitude(idx).re - 0.5).abs() < MATCH_TOL);
        }
    }

    #[test]
    fn search_returns_identities_for_equal_states() {
        let s = make_ghz3(1).unwrap();
        let gates = local_equivalence_search(&s, &s).unwrap().unwrap();
        for g in gates {
            assert!(g.max_abs_diff(&UnitaryOp::identity(1)) < 1e-9);
        }
    }

    #[test]
    fn search_rejects_oversized_inputs() {
        let a = crate::qcore::random_state(7, 1);
        let b = crate::qcore::random_state(7, 2);
        assert!(matches!(
            local_equivalence_search(&a, &b),
            Err(QisError::TooManyQubits(7, 6))
        ));
    }

    #[test]
    fn c4_is_not_locally_equivalent_to_ghz4() {
        assert!(local_equivalence_search(&make_c4(), &make_ghz4()).unwrap().is_none());
    }

    #[test]
    fn cluster_four_matches_c4_only_after_relabeling() {
        let cl4 = make_cluster_generic(4).unwrap();
        // In the given qubit order no product of single-qubit unitaries maps
        // one to the other: across the {1,4}|{2,3} cut the line state has
        // Schmidt rank 4 while the channel has rank 2.
        assert_eq!(cl4.schmidt_rank(&[0, 3]).unwrap(), 4);
        assert_eq!(make_c4().schmidt_rank(&[0, 3]).unwrap(), 2);
        assert!(local_equivalence_search(&cl4, &make_c4()).unwrap().is_none());
        // Reordering the line as 1-3-4-2 restores the equivalence.
        let relabeled = permute_qubits(&cl4, &[0, 2, 3, 1]).unwrap();
        assert!(local_equivalence_search(&relabeled, &make_c4()).unwrap().is_some());
    }

    #[test]
    fn permute_qubits_moves_basis_bits() {
        let s = PureState::basis_state(4, 0b0001).unwrap();
        let p = permute_qubits(&s, &[0, 2, 3, 1]).unwrap();
        assert!((p.amplitude(0b0010).re - 1.0).abs() < MATCH_TOL);
    }

    #[test]
    fn c5_is_not_locally_equivalent_to_cluster_five() {
        // Across the {4,5}|{1,2,3} cut the five-partite channel has Schmidt
        // rank 4 while the literal five-line has rank 2, so no single-qubit
        // rotations connect them in this qubit order.
        let c5 = make_c5();
        let cl5 = make_cluster_generic(5).unwrap();
        assert_eq!(c5.schmidt_rank(&[3, 4]).unwrap(), 4);
        assert_eq!(cl5.schmidt_rank(&[3, 4]).unwrap(), 2);
    }
}
