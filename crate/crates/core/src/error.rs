use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested size is above the configured ceiling. Callers may
    /// raise the ceiling explicitly.
    #[error("n = {n} exceeds the resource ceiling of {ceiling}; pass an explicit override to run it")]
    ResourceLimit { n: u32, ceiling: u32 },

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
