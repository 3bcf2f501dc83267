use thiserror::Error;

/// Errors raised by the counting, sieving and recursion routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A size parameter exceeds the cap for the requested operation.
    #[error("{what} = {value} exceeds the supported limit {limit}")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    /// A request would need more memory than one segment may hold.
    #[error("resource limit: {0}")]
    Resource(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for range and resource errors, the class the CLI reports with exit code 3.
    pub fn is_range(&self) -> bool {
        matches!(self, Error::OutOfRange { .. } | Error::Resource(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_cap(what: &'static str, value: u64, limit: u64) -> Result<()> {
    if value > limit {
        Err(Error::OutOfRange { what, value, limit })
    } else {
        Ok(())
    }
}
