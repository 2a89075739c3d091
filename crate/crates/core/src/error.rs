use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("capacity exceeded: {requested} vertices requested, cap is {cap}")]
    Capacity { requested: u128, cap: usize },

    #[error("integer overflow while evaluating {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "power iteration did not converge after {iterations} iterations \
         (estimate {estimate}, relative residual {residual:e})"
    )]
    IterationLimit {
        iterations: usize,
        estimate: f64,
        residual: f64,
    },

    #[error("classification ambiguity: {0}")]
    Ambiguous(String),

    #[error("bisection bracket violated: {0}")]
    Bracket(String),
}

impl Error {
    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::IterationLimit { .. } | Error::Ambiguous(_) | Error::Bracket(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
