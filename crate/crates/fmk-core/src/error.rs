use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the public
/// operations; callers that need exit codes map them in the CLI layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("element is not reducible modulo the ideal: {0}")]
    NotReducible(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("singular curve")]
    SingularCurve,

    #[error("singular reduction")]
    SingularReduction,

    #[error("unsupported reduction: {0}")]
    UnsupportedReduction(String),

    #[error("unsupported prime: {0}")]
    UnsupportedPrime(String),

    #[error("missing eigenvalue data for q={q}, ideal index {index}")]
    MissingEigenvalue { q: u64, index: usize },

    #[error("invalid eigenvalue: {0}")]
    InvalidEigenvalue(String),

    #[error("load error at {path}: {message}")]
    LoadError { path: String, message: String },

    #[error("write error at {path}: {message}")]
    WriteError { path: String, message: String },

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
