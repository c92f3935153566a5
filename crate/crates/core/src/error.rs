use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field configuration: {0}")]
    FieldConfig(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid commutation matrix: {0}")]
    InvalidCommutation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("exponent {0:?} is not in the central sublattice")]
    NotCentral(Vec<i64>),

    #[error("basis inconsistency: {0}")]
    BasisInconsistency(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("series is not invertible at this precision: {0}")]
    NotInvertible(String),

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("oracle enumeration of {required} points exceeds budget {budget}")]
    OracleTooLarge { required: u128, budget: u64 },

    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}
