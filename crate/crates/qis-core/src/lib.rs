//! Dense state-vector engine for quantum information splitting (QIS)
//! protocols over multi-partite cluster-state channels.
//!
//! The crate is organized in four layers:
//!
//! - [`qcore`]: complex linear algebra over pure multi-qubit states —
//!   tensor products, unitary application, projective measurement, reduced
//!   density matrices, Schmidt ranks, and local-Clifford machinery.
//! - [`channels`]: constructors for the entangled channel states and the
//!   measurement bases the protocols use, plus a local-equivalence search.
//! - [`protocols`]: exhaustive branch enumeration of the five splitting
//!   protocols, independent derivation of every correction and conversion
//!   unitary, and verification against the built-in reference tables.
//! - [`security`]: ancilla-tap eavesdropping simulation and secrecy metrics
//!   (Eve's distinguishability, honest-party blindness).
//!
//! Basis labels are big-endian in register order: the index bit of qubit
//! position `p` in an `n`-qubit register is `(i >> (n - 1 - p)) & 1`.

pub mod channels;
mod error;
pub mod protocols;
pub mod qcore;
pub mod security;

pub use error::QisError;

pub type Result<T> = std::result::Result<T, QisError>;
