use thiserror::Error;

/// Errors raised by the inference routines and the command-line surface.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on sizes, levels or parameters was violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed or non-finite input data.
    #[error("input error: {0}")]
    Input(String),
    /// A numerical routine failed (e.g. a non positive definite covariance).
    #[error("numerical failure: {0}")]
    Numeric(String),
    /// Reading input or writing output failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// A Monte Carlo replication failed; the seed reproduces it.
    #[error("replication {rep} (seed {seed}) failed: {source}")]
    Replication {
        rep: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// Process exit code used by the CLI: 2 for input and i/o errors, 3
    /// otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Io(_) => 2,
            Error::Replication { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
