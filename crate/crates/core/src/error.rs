use thiserror::Error;

/// Errors raised by the in-memory structures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} {value} out of range (valid: {lo}..={hi})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        lo: u64,
        hi: u64,
    },
    #[error("stale or foreign handle")]
    InvalidHandle,
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("operation not enabled for this tree: {0}")]
    Unsupported(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(what: &'static str, value: u64, lo: u64, hi: u64) -> Error {
    Error::OutOfRange {
        what,
        value,
        lo,
        hi,
    }
}
