use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Non-finite or otherwise malformed arguments.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Point or parameter outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structural validation failure (seeds, grids, sample sets).
    #[error("validation error: {0}")]
    Validation(String),

    /// A regression could not be carried out on the supplied series.
    #[error("fit rejected: {0}")]
    FitRejected(String),

    /// Arithmetic broke down (NaN, overflow).
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
