use thiserror::Error;

/// Errors raised while constructing or verifying deformed polynomial families.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial division leaves a nonzero remainder")]
    NonExactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("wronskian of {size} functions exceeds the size cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("operation not supported for the {0} family")]
    UnsupportedFamily(String),
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),
    #[error("extra index does not belong to the enumerated set")]
    MismatchedExtra,
    #[error("invalid case: {0}")]
    InvalidSpec(String),
    #[error("wronskian did not reduce to a polynomial: {0}")]
    NonPolynomialResult(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("root polishing stalled: {0}")]
    PrecisionExhausted(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("conjugate pairing failed: {0}")]
    PairingFailure(String),
    #[error("zero collision: {0}")]
    ZeroCollision(String),
    #[error("zero is not simple: {0}")]
    SimpleZeroViolation(String),
    #[error("eigenvalue iteration did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
