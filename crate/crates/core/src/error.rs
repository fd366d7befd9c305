use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not invariant under matrix {index}")]
    NotInvariant { index: usize },
    #[error("scalar must be nonzero: {0}")]
    ZeroScalar(String),
    #[error("parameter λ = 1 is not allowed here")]
    LambdaIsOne,
    #[error("matrix is singular: {0}")]
    Singular(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("braid generator index {index} out of range 1..={max}")]
    BraidIndex { index: i64, max: usize },
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("unsupported eigenvalues: {0}")]
    UnsupportedEigenvalues(String),
    #[error("tuple is not absolutely irreducible")]
    Reducible,
    #[error("integration step size underflow near x = {at}")]
    StepUnderflow { at: String },
    #[error("parse error: {0}")]
    Parse(String),
}
