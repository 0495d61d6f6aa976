use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// The variants line up with the process exit codes of the `augrid` binary:
/// usage/config problems exit with 2, capacity with 3, integrity with 4.
#[derive(Debug, Error)]
pub enum Error {
    /// A point, index or parameter lies outside its valid domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested computation exceeds the configured desk-scale limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Malformed function or poset file.
    #[error("format error: {0}")]
    Format(String),
    /// A consistent pair handed to routing is not layered.
    #[error("pair is not {0}-good")]
    NotGood(usize),
    /// An invariant that the combinatorics guarantee was found broken.
    #[error("integrity violation: {0}")]
    Integrity(String),
    /// Invalid configuration or command-line usage.
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Domain(_) | Error::Format(_) | Error::Io(_) => 2,
            Error::Capacity(_) => 3,
            Error::NotGood(_) | Error::Integrity(_) => 4,
        }
    }
}
