use thiserror::Error;

/// Errors raised by the library. Each variant maps onto a distinct failure class so
/// the CLI can translate them into stable exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An arithmetic operation was applied outside its domain (e.g. inverting zero).
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller-supplied parameter violated an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A configured resource bound (group order, closure size) was exceeded.
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
    /// A randomized procedure ran out of budget; calling again with fresh randomness may succeed.
    #[error("retryable failure: {0}")]
    Retryable(String),
    /// An invariant that should hold by construction was observed to fail.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;
