use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed instance: {0}")]
    MalformedInstance(String),
    #[error("no arrangement: variety {0} is not composable from the instance")]
    NoCertificate(String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error("known-instance check failed: {0}")]
    KnownInstanceCheck(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
