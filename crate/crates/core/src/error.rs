use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HbieError {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is singular to working precision (pivot {pivot} at column {column})")]
    Singular { column: usize, pivot: f64 },
    #[error("gmres stagnated at iteration {iteration} with relative residual {residual:e}")]
    Stagnation { iteration: usize, residual: f64 },
    #[error("gmres did not reach the tolerance in {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("multiplier for mode {mode} has modulus {modulus:e}, too close to a resonance")]
    Resonance { mode: i64, modulus: f64 },
    #[error("point ({x}, {y}) rejected: {reason}")]
    PointRejected { x: f64, y: f64, reason: String },
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, HbieError>;

impl From<std::io::Error> for HbieError {
    fn from(e: std::io::Error) -> Self {
        HbieError::Io(e.to_string())
    }
}
