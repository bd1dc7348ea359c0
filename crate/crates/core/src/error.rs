use alloc::string::String;
use core::fmt;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument outside the operation's domain.
    Domain(String),
    /// A request beyond a configured table, budget or accumulator width.
    Capacity(String),
    /// An internal invariant did not hold.
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Capacity(m) => write!(f, "capacity error: {m}"),
            Error::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl core::error::Error for Error {}
