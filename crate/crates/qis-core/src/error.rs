use thiserror::Error;

#[derive(Debug, Error)]
pub enum QisError {
    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),

    #[error("state norm² = {0} is not 1 within tolerance {1}")]
    NotNormalized(f64, f64),

    #[error("non-finite amplitude encountered")]
    NonFinite,

    #[error("operator arity {arity} does not match {targets} target qubit(s)")]
    ArityMismatch { arity: usize, targets: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator is not unitary: max |U†U - I| = {0:.3e}")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian: max |M - M†| = {0:.3e}")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite: eigenvalue {0:.3e}")]
    NotPositive(f64),

    #[error("qubit position {position} out of range for {num_qubits} qubit(s)")]
    PositionOutOfRange { position: usize, num_qubits: usize },

    #[error("duplicate target qubit at position {0}")]
    DuplicateTarget(usize),

    #[error("unknown qubit label {0}")]
    UnknownLabel(String),

    #[error("duplicate qubit label {0}")]
    DuplicateLabel(String),

    #[error("basis vectors are not orthonormal: max deviation {0:.3e}")]
    NotOrthonormal(f64),

    #[error("basis has {have} vector(s), expected at most {max}")]
    OversizedBasis { have: usize, max: usize },

    #[error("incomplete basis: {have} of {need} vectors")]
    IncompleteBasis { have: usize, need: usize },

    #[error("orthonormal completion failed: spanned {got} of {need} dimensions")]
    CompletionFailed { got: usize, need: usize },

    #[error("empty keep set for partial trace")]
    EmptyKeep,

    #[error("invalid bipartition: {0}")]
    InvalidPartition(String),

    #[error("qubit count {0} exceeds supported limit {1}")]
    TooManyQubits(usize, usize),

    #[error("cluster size {0} outside supported range 2..=10")]
    ClusterSizeOutOfRange(usize),

    #[error("invalid sign {0}: expected +1 or -1")]
    InvalidSign(i32),

    #[error("unknown protocol id \"{0}\"")]
    UnknownProtocol(String),

    #[error("invalid secret: {0}")]
    InvalidSecret(String),

    #[error("branch (alice {0}, bob {1}) has zero probability; no correction exists")]
    ZeroProbabilityBranch(usize, usize),

    #[error("invalid attack tap {0}: {1}")]
    InvalidTap(String, String),

    #[error("unexpected nonzero probability {prob:.3e} on completion-added outcome {outcome}")]
    NonzeroCompletedOutcome { outcome: usize, prob: f64 },

    #[error("{0}")]
    Internal(String),
}
