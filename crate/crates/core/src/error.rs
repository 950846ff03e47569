use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate query at ({x}, {y}): {reason}")]
    DegenerateQuery { x: f64, y: f64, reason: String },

    #[error("outside domain of validity: {0}")]
    OutsideValidity(String),

    #[error("operation not applicable: {0}")]
    NotApplicable(String),

    #[error("degenerate cell {cell}: measure {measure:e}")]
    DegenerateCell { cell: usize, measure: f64 },

    #[error("matrix is singular or indefinite at pivot {pivot} (value {value:e})")]
    Singular { pivot: usize, value: f64 },

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
