use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("division by zero in F_{p}")]
    DivisionByZero { p: u32 },

    #[error("monomial {denominator} does not divide {numerator}")]
    NotDivisible {
        numerator: String,
        denominator: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid action {action}: pair set has {pairs} entries")]
    InvalidAction { action: usize, pairs: usize },

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("model format error: {0}")]
    ModelFormat(String),

    #[error("value rollout exceeded safety cap of {cap} steps")]
    RolloutCapExceeded { cap: u64 },

    #[error("non-finite loss during training: {0}")]
    NonFiniteLoss(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
