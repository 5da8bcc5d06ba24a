use thiserror::Error;

/// Errors raised by graph construction, linear algebra and the invariant pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex index {index} out of range for graph with {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("block layout is not symmetric: {0}")]
    AsymmetricLayout(String),

    #[error("matrix is not symmetric (max deviation {0:e})")]
    NonSymmetric(f64),

    #[error("eigensolver did not converge")]
    ConvergenceFailure,

    #[error("size parameter b = {0} is too small (need b >= 3)")]
    SizeTooSmall(usize),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("unknown example '{0}'")]
    UnknownName(String),

    #[error("partition block {0} is empty")]
    EmptyBlock(usize),

    #[error("partition is invalid: {0}")]
    BadPartition(String),

    #[error("stratum {0} is empty")]
    EmptyStratum(usize),

    #[error("initial state is not normalized (norm^2 = {0})")]
    UnnormalizedInput(f64),

    #[error("fermion space too large: estimated {estimated} nonzeros exceeds cap {cap}")]
    CapExceeded { estimated: u128, cap: u128 },

    #[error("bad particle count {a} for {n} vertices")]
    BadParticleCount { a: usize, n: usize },

    #[error("coupling must be non-negative, got {0}")]
    NegativeCoupling(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("singular block in Schur elimination")]
    SingularBlock,

    #[error("coupling mode {index} has d = {d} (numerically singular state)")]
    DegenerateMode { index: usize, d: f64 },

    #[error("value {0} out of range")]
    OutOfRange(f64),

    #[error("graphs have different vertex counts ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("quotient and full-space walks disagree by {0:e}")]
    PathDisagreement(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
