use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("probabilities sum to {sum}, expected 1 within {tol:e}")]
    NotNormalized { sum: f64, tol: f64 },
    #[error("negative or non-finite probability {value} at index {index}")]
    InvalidProbability { index: usize, value: f64 },
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("factor groups overlap or reference an unknown factor")]
    InvalidGroups,
    #[error("rho = {0} is outside the admissible range")]
    RhoOutOfRange(f64),
    #[error("matrix is singular over GF(2)")]
    Singular,
    #[error("exhaustive enumeration refused for dimension {0} (limit 4)")]
    EnumerationTooLarge(usize),
    #[error("invalid message layout: {0}")]
    InvalidLayout(String),
    #[error("invalid projection: {0}")]
    InvalidProjection(String),
    #[error("input distribution is not uniform")]
    NotUniform,
    #[error("rate {rate} nats at blocklength {n} does not give a whole number of index bits")]
    NonIntegralIndexRange { rate: f64, n: usize },
    #[error("state space of {size} joint entries exceeds the limit of {limit}")]
    StateSpaceTooLarge { size: u128, limit: u128 },
    #[error("index {index} out of range {range}")]
    IndexOutOfRange { index: u64, range: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty polygon")]
    EmptyPolygon,
}

pub type Result<T> = std::result::Result<T, Error>;
