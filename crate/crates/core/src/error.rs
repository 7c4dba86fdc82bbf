use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual input. `token` is the offending piece of text.
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    /// An operation was called outside its domain (e.g. `m > n`).
    #[error("{0}")]
    Domain(String),

    /// A value that should satisfy an algebraic invariant does not,
    /// e.g. a deck whose counts do not sum to `C(n, m)`.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// The requested computation exceeds a configured or hard limit.
    #[error("resource limit: {0}")]
    Resource(String),
}

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse { token: token.into(), reason: reason.into() }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }
}
