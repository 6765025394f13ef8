use thiserror::Error;

/// Errors raised by the numerical routines and the experiment drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SmlError {
    /// Argument sits on (or numerically at) a pole of the gamma function.
    #[error("pole: {0}")]
    Pole(String),

    /// Argument lies outside the domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or quadrature failed to meet its stopping criterion.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// Caller-supplied parameters violate a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A required parameter was not supplied.
    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),

    /// The log-log fit was rejected (poor coefficient of determination).
    #[error("fit rejected: {0}")]
    FitRejected(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for SmlError {
    fn from(e: std::io::Error) -> Self {
        SmlError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, SmlError>;
