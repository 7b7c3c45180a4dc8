use thiserror::Error;

/// Errors raised by the exact layer, the stream layer and the oracle model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument was out of range or had the wrong shape.
    #[error("argument error: {0}")]
    Argument(String),
    /// A textual or symbolic encoding could not be read.
    #[error("format error: {0}")]
    Format(String),
    /// An oracle query needs exact witnesses that the inputs do not carry.
    #[error("oracle cannot answer: {0}")]
    Unanswerable(String),
    /// The promise attached to a query or reduction input does not hold.
    #[error("promise violated: {0}")]
    Contract(String),
    /// A state that correct inputs can never reach.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

pub(crate) fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}
