use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuftiError {
    #[error("invalid dimension: {0} (must be at least 1)")]
    InvalidDimension(usize),

    #[error("shape mismatch: expected {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("size {size} exceeds the limit of {limit} for {what}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("closed-form entry ({j}, {k}) is singular at n = {n}, phi = {phi}")]
    SingularEntry {
        n: usize,
        j: usize,
        k: usize,
        phi: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, QuftiError>;
