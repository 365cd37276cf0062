//! Dense complex linear algebra over multi-qubit pure states.

mod basis;
mod clifford;
mod density;
mod label;
mod state;
mod unitary;

pub use basis::{complete_basis, enumerate_measurement, MeasurementBasis, MeasurementOutcome};
pub use clifford::single_qubit_cliffords;
pub use density::{trace_distance, DensityMatrix};
pub use label::{QubitLabel, Register};
pub use state::{random_state, Amplitude, PureState};
pub use unitary::UnitaryOp;

pub(crate) use basis::orthonormality_deviation;
pub(crate) use state::check_targets;

/// Tolerance for normalization, orthogonality, and state matching.
pub const MATCH_TOL: f64 = 1e-10;
/// Probabilities at or below this are treated as exactly zero.
pub const ZERO_PROB_TOL: f64 = 1e-12;
/// Singular values above this count toward a Schmidt rank.
pub const RANK_TOL: f64 = 1e-9;
/// Slack accepted when parsing externally supplied amplitude lists.
pub const INPUT_NORM_TOL: f64 = 1e-6;

pub(crate) const CZERO: num_complex::Complex64 = num_complex::Complex64::new(0.0, 0.0);
pub(crate) const CONE: num_complex::Complex64 = num_complex::Complex64::new(1.0, 0.0);
