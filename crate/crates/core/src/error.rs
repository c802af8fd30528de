use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A rate, probability or size parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input value or point set violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two driving events share the same time stamp. Simulation inputs must
    /// carry strictly distinct event times; resample instead of tie-breaking.
    #[error("duplicate event time {0}")]
    DuplicateEventTime(f64),

    /// A functional returned a non-finite value during numerical evaluation.
    #[error("evaluation produced a non-finite value: {0}")]
    NonFiniteValue(String),

    /// An exhaustive oracle was asked to handle more points than its cap.
    #[error("instance size {got} exceeds the brute-force cap {cap}")]
    SizeCapExceeded { got: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
