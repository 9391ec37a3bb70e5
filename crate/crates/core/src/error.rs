use thiserror::Error;

/// Errors produced by the estimation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("degenerate range: lo = {lo}, hi = {hi}")]
    DegenerateRange { lo: f64, hi: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate measurement: {0}")]
    DegenerateMeasurement(String),

    #[error("rank-deficient jacobian (relative pivot {pivot:e})")]
    RankDeficient { pivot: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
