use thiserror::Error;

/// Every failure the engine can report. Decisions that would rest on
/// uncertified digits surface as `PrecisionExhausted` instead of a guess.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("argument outside the convergence domain: {0}")]
    OutOfDomain(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("matrix is singular")]
    Singular,
    #[error("subspace is not closed under products: {0}")]
    NotSubalgebra(String),
    #[error("family is not invertible over the Laurent ring: {0}")]
    NonInvertibleFamily(String),
    #[error("leading-term reduction exceeded its iteration guard ({0} steps)")]
    NonConvergent(usize),
    #[error("oracle did not stabilize: {0}")]
    NotStabilized(String),
    #[error("diagonal is identically zero; no hyperbolic witness is needed")]
    NoWitnessNeeded,
    #[error("no consecutive block partition with constant diagonals: {0}")]
    NotBlockConstant(String),
    #[error("root not available: {0}")]
    RootOutOfDomain(String),
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("sample span has not saturated after {0} samples")]
    InsufficientSamples(usize),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("check failed for {family}: {reason}")]
    CheckFailed { family: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn exhausted(what: impl Into<String>) -> Error {
    Error::PrecisionExhausted(what.into())
}
