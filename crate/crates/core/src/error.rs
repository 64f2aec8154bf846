use thiserror::Error;

/// Errors raised by instance construction, state readout and the walk operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("vertex {vertex} is out of range 1..={n}")]
    Index { vertex: usize, n: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("no convergence after {0} iterations")]
    Convergence(usize),
}

pub type Result<T> = std::result::Result<T, WalkError>;
