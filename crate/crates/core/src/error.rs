use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid period: {0}")]
    InvalidPeriod(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("period {0} is not normalized (its last bit must be 0)")]
    NotNormalized(String),

    #[error("up-down prefix has {available} bits but row {row} needs {needed}")]
    PrefixTooShort {
        row: usize,
        needed: usize,
        available: usize,
    },

    #[error("brute force is capped at n = {cap} (got n = {n}); use the triangle engine instead")]
    OracleCap { n: usize, cap: usize },

    #[error("boundary rule produced no value for row {row}: {reason}")]
    BoundaryRule { row: usize, reason: String },

    #[error("unknown name {0:?}")]
    UnknownName(String),

    #[error("index {index} out of range: {reason}")]
    OutOfRange { index: usize, reason: String },

    #[error("series with zero constant term is not invertible")]
    NotInvertible,

    #[error("no eigenvalue found on (0, {ceiling}]: {diagnostics}")]
    SearchFailure { ceiling: f64, diagnostics: String },

    #[error("eigenvalue {lambda} is not simple: singular value ratio {ratio:e}")]
    Degenerate { lambda: f64, ratio: f64 },

    #[error("power iteration did not converge: {0}")]
    NonConvergence(String),
}
