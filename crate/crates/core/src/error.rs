use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a discriminant")]
    NotADiscriminant(i64),
    #[error("parity violation: t - b*u must be even")]
    ParityViolation,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("square discriminant {0}")]
    SquareDiscriminant(i128),
    #[error("form {0} is not reduced")]
    NotReduced(String),
    #[error("matrix is not hyperbolic")]
    NotHyperbolic,
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("pole of Gamma at {0}")]
    PoleAt(f64),
    #[error("weight {0} is not supported")]
    UnsupportedWeight(u32),
    #[error("need {needed} coefficients, have {have}")]
    InsufficientCoefficients { needed: usize, have: usize },
    #[error("index {0} is outside the ladder")]
    OutOfLadder(i64),
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("precision unreachable: {0}")]
    PrecisionUnreachable(String),
    #[error("cache corrupt at line {line}: {msg}")]
    CacheCorrupt { line: usize, msg: String },
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
