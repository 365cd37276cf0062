use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::unitary::UnitaryOp;

/// The 24 single-qubit Clifford unitaries up to global phase, generated by
/// closing `{H, S}` under composition. Element 0 is the identity, and the
/// order is deterministic across runs.
pub fn single_qubit_cliffords() -> &'static [UnitaryOp] {
    static GROUP: OnceLock<Vec<UnitaryOp>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let generators = [UnitaryOp::hadamard(), UnitaryOp::phase_s()];
        let mut group = vec![canonical_phase(&UnitaryOp::identity(1))];
        let mut cursor = 0;
        while cursor < group.len() {
            let current = group[cursor].clone();
            cursor += 1;
            for g in &generators {
                let candidate =
                    canonical_phase(&g.compose(&current).expect("matching single-qubit arity"));
                if !group.iter().any(|known| known.max_abs_diff(&candidate) < 1e-6) {
                    group.push(candidate);
                }
            }
        }
        assert_eq!(group.len(), 24, "closure of {{H, S}} modulo phase");
        group
    })
}

/// Rescales a unitary so its first entry of non-negligible magnitude is real
/// positive, removing the global-phase ambiguity.
fn canonical_phase(u: &UnitaryOp) -> UnitaryOp {
    let m = u.matrix();
    let pivot = m
        .iter()
        .find(|a| a.norm() > 1e-9)
        .copied()
        .expect("unitaries have entries of unit-scale magnitude");
    let scale = pivot.conj() / pivot.norm();
    let rotated: DMatrix<Complex64> = m.map(|a| a * scale);
    UnitaryOp::new(rotated).expect("phase rotation preserves unitarity")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_has_twenty_four_elements_starting_at_identity() {
        let group = single_qubit_cliffords();
        assert_eq!(group.len(), 24);
        assert!(group[0].max_abs_diff(&UnitaryOp::identity(1)) < 1e-12);
    }

    #[test]
    fn group_is_closed_under_composition_up_to_phase() {
        let group = single_qubit_cliffords();
        for a in group.iter().take(6) {
            for b in group.iter().take(6) {
                let product = a.compose(b).unwrap();
                assert!(group
                    .iter()
                    .any(|g| g.equal_up_to_phase(&product, 1e-8)));
            }
        }
    }

    #[test]
    fn group_contains_the_paulis_up_to_phase() {
        let group = single_qubit_cliffords();
        for p in [UnitaryOp::pauli_x(), UnitaryOp::pauli_y(), UnitaryOp::pauli_z()] {
            assert!(group.iter().any(|g| g.equal_up_to_phase(&p, 1e-8)));
        }
    }

    #[test]
    fn elements_are_pairwise_distinct() {
        let group = single_qubit_cliffords();
        for (i, a) in group.iter().enumerate() {
            for b in group.iter().skip(i + 1) {
                assert!(a.max_abs_diff(b) > 1e-3);
            }
        }
    }
}
