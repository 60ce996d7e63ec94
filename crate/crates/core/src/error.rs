use thiserror::Error;

/// Errors raised by the rate laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed numeric input: non-finite entries, negative arguments, bad shapes.
    #[error("invalid input: {0}")]
    Input(String),

    /// A requested dimension is too large to allocate or to run.
    #[error("size limit exceeded: {0}")]
    Size(String),

    /// The system configuration violates one of its invariants.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A numerical routine could not reach the requested accuracy.
    #[error("accuracy target missed: estimate {estimate:e}, error bound {error_bound:e} (tolerance {tolerance:e})")]
    Accuracy {
        estimate: f64,
        error_bound: f64,
        tolerance: f64,
    },

    /// A factorization or solve failed where the math says it cannot.
    #[error("internal numerical failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
