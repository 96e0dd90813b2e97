use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("validation failed: {condition} violated at t = {at}")]
    Validation { condition: &'static str, at: f64 },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },

    #[error("{what} did not converge (error estimate {estimate:e})")]
    Convergence { what: &'static str, estimate: f64 },

    #[error("zero or non-finite pivot at row {row} in tridiagonal solve")]
    ZeroPivot { row: usize },

    #[error("assembled system is not strictly diagonally dominant at step {step} (gap {gap:e})")]
    NotDominant { step: usize, gap: f64 },

    #[error("non-finite value in level {level}")]
    NonFinite { level: usize },

    #[error("history incomplete: level {needed} requested, {available} levels filled")]
    IncompleteHistory { needed: usize, available: usize },

    #[error("case has no exact solution")]
    MissingExact,

    #[error("unknown case id '{0}'")]
    UnknownCase(String),
}
