//! Property-based checks of the state-vector engine's invariants.

use num_complex::Complex64;
use proptest::prelude::*;

use qis_core::channels::{local_equivalence_search, make_cluster_generic, pm_basis};
use qis_core::qcore::{
    enumerate_measurement, random_state, DensityMatrix, PureState, QubitLabel, Register,
    UnitaryOp,
};

/// A pseudo-random gate sequence: (gate kind, target, second target).
fn gate_sequence(n: usize) -> impl Strategy<Value = Vec<(u8, usize, usize)>> {
    prop::collection::vec((0u8..3, 0..n, 0..n), 0..8)
}

fn apply_sequence(state: &PureState, gates: &[(u8, usize, usize)]) -> PureState {
    let mut current = state.clone();
    for &(kind, a, b) in gates {
        current = match kind {
            0 => current.apply_unitary(&UnitaryOp::hadamard(), &[a]).unwrap(),
            1 => current.apply_unitary(&UnitaryOp::phase_s(), &[a]).unwrap(),
            _ => {
                if a == b {
                    continue;
                }
                current.apply_unitary(&UnitaryOp::cnot(), &[a, b]).unwrap()
            }
        };
    }
    current
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_sequences_preserve_the_norm(
        seed in any::<u64>(),
        n in 1usize..=4,
        gates in gate_sequence(4),
    ) {
        let gates: Vec<_> =
            gates.into_iter().map(|(k, a, b)| (k, a % n, b % n)).collect();
        let state = apply_sequence(&random_state(n, seed), &gates);
        let norm: f64 = state.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn measurement_outcomes_carry_total_probability_one(
        seed in any::<u64>(),
        n in 2usize..=4,
        target in 0usize..4,
    ) {
        let labels: Vec<QubitLabel> =
            (1..=n as u8).map(QubitLabel::Channel).collect();
        let register = Register::new(random_state(n, seed), labels).unwrap();
        let basis = pm_basis()
            .with_targets(vec![QubitLabel::Channel((target % n) as u8 + 1)])
            .unwrap();
        let outcomes = enumerate_measurement(&register, &basis).unwrap();
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
        for o in &outcomes {
            if let Some(post) = &o.post {
                let norm: f64 =
                    post.state().amplitudes().iter().map(|a| a.norm_sqr()).sum();
                prop_assert!((norm - 1.0).abs() <= 1e-10);
                prop_assert_eq!(post.num_qubits(), n - 1);
            }
        }
    }

    #[test]
    fn reduced_states_are_valid_and_nested(
        seed in any::<u64>(),
        n in 2usize..=4,
    ) {
        let state = random_state(n, seed);
        // DensityMatrix::new (called inside) enforces Hermiticity, unit
        // trace, and positivity, so construction succeeding is the check.
        let pair = state.reduced_density(&[0, 1]).unwrap();
        let direct = state.reduced_density(&[0]).unwrap();
        let nested = pair.partial_trace(&[0]).unwrap();
        let diff = (direct.matrix() - nested.matrix()).norm();
        prop_assert!(diff <= 1e-10);
    }

    #[test]
    fn perturbed_gates_are_rejected(
        scale in 1.0e-3f64..0.5,
    ) {
        let h = UnitaryOp::hadamard();
        let bad = h.matrix() * Complex64::new(1.0 + scale, 0.0);
        prop_assert!(UnitaryOp::new(bad).is_err());
    }

    #[test]
    fn product_states_have_schmidt_rank_one_and_pure_marginals(
        seed_left in any::<u64>(),
        seed_right in any::<u64>(),
        n_left in 1usize..=2,
        n_right in 1usize..=2,
    ) {
        let left = random_state(n_left, seed_left);
        let right = random_state(n_right, seed_right);
        let joint = left.tensor(&right);
        let cut: Vec<usize> = (0..n_left).collect();
        prop_assert_eq!(joint.schmidt_rank(&cut).unwrap(), 1);
        // The marginal of a product factor is the factor itself.
        let rho = joint.reduced_density(&cut).unwrap();
        let fidelity = rho.fidelity_with_pure(&left).unwrap();
        prop_assert!(fidelity >= 1.0 - 1e-9);
    }

    #[test]
    fn entangled_pairs_have_higher_schmidt_rank(seed in any::<u64>()) {
        // A two-qubit chain state is maximally entangled across its cut.
        let chain = make_cluster_generic(2).unwrap();
        prop_assert_eq!(chain.schmidt_rank(&[0]).unwrap(), 2);
        // Mixing it with a random product state never lowers the rank below
        // the chain's own.
        let extra = random_state(1, seed);
        let joint = chain.tensor(&extra);
        prop_assert_eq!(joint.schmidt_rank(&[0]).unwrap(), 2);
    }
}

proptest! {
    // The Clifford search is exhaustive per qubit, so keep the case count low.
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn equivalence_search_is_reflexive_and_symmetric(
        seed in any::<u64>(),
        n in 1usize..=2,
    ) {
        let state = random_state(n, seed);
        prop_assert!(local_equivalence_search(&state, &state).unwrap().is_some());

        let rotated = state.apply_unitary(&UnitaryOp::hadamard(), &[0]).unwrap();
        let forward = local_equivalence_search(&state, &rotated).unwrap();
        let backward = local_equivalence_search(&rotated, &state).unwrap();
        prop_assert!(forward.is_some());
        prop_assert!(backward.is_some());

        // Any reported assignment must actually map the source to the target.
        let gates = forward.unwrap();
        let mut mapped = state.clone();
        for (q, g) in gates.iter().enumerate() {
            mapped = mapped.apply_unitary(g, &[q]).unwrap();
        }
        let overlap = mapped.inner(&rotated).unwrap().norm();
        prop_assert!(overlap > 1.0 - 1e-9);
    }
}

// Density matrices built from random states always pass validation, and
// trace distance is a metric on them (symmetry and identity checks).
proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trace_distance_is_symmetric_and_zero_on_equals(
        seed_a in any::<u64>(),
        seed_b in any::<u64>(),
    ) {
        let a = random_state(2, seed_a).reduced_density(&[0]).unwrap();
        let b = random_state(2, seed_b).reduced_density(&[0]).unwrap();
        let ab = qis_core::qcore::trace_distance(&a, &b).unwrap();
        let ba = qis_core::qcore::trace_distance(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&ab));
        prop_assert!(qis_core::qcore::trace_distance(&a, &a).unwrap() <= 1e-12);
        let _keeps_validating: &DensityMatrix = &a;
    }
}
