use alloc::string::String;

/// Errors raised by curve evaluation, model construction and estimators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Model parameters violate a model invariant.
    #[error("invalid model: {0}")]
    InvalidModel(String),
    /// A numerical routine could not reach its tolerance.
    #[error("numerical failure: {what} (tolerance {tolerance:e}, achieved {achieved:e})")]
    Numerical {
        what: String,
        tolerance: f64,
        achieved: f64,
    },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidModel(msg.into())
}
