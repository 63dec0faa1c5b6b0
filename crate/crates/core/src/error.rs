use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("assignment covers {got} jobs over {got_machines} machines, instance has {jobs} jobs over {machines}")]
    DimensionMismatch {
        got: usize,
        got_machines: usize,
        jobs: usize,
        machines: usize,
    },

    #[error("exhaustive search exceeded its budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },

    #[error("invalid epsilon {epsilon}: {reason}")]
    InvalidEpsilon { epsilon: String, reason: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
