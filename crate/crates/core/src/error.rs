use thiserror::Error;

/// Errors raised by the numerical library.
///
/// Numeric payloads are stored as `f64` so the error type stays independent
/// of the scalar parameter.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("partition must contain at least one atom")]
    EmptyPartition,
    #[error("atom {index} has non-positive or non-finite weight {weight}")]
    BadWeight { index: usize, weight: f64 },
    #[error("atom {index} has non-finite value {value}")]
    NonFiniteValue { index: usize, value: f64 },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("functions live on different partitions")]
    PartitionMismatch,
    #[error("exponent p = {0} is invalid here")]
    BadExponent(f64),
    #[error("total mass {0} differs from 1")]
    NotProbability(f64),
    #[error("epsilon = {0} lies outside [0, 2]")]
    BadEpsilon(f64),
    #[error("invalid interval ({a}, {b})")]
    BadInterval { a: f64, b: f64 },
    #[error("p = {p} lies outside the open interval ({a}, {b})")]
    OutsideInterval { p: f64, a: f64, b: f64 },
    #[error("invalid generating function: {0}")]
    BadPsi(String),
    #[error("function norm {norm} exceeds the unit ball")]
    OutsideBall { norm: f64 },
    #[error("zero function is not allowed here")]
    ZeroFunction,
    #[error("no sampled pair reached distance {eps}")]
    Infeasible { eps: f64 },
    #[error("{0}")]
    Unsupported(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
