use thiserror::Error;

/// Errors produced by the numerical routines and the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge after {terms} terms (last partial sum {partial_sum:e})")]
    NonConvergence { terms: usize, partial_sum: f64 },

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("centres {first} and {second} coincide")]
    DuplicateCenter { first: usize, second: usize },

    #[error("interpolation matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
