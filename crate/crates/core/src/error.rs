use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request is valid but exceeds a configured size bound.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// A bit string could not be decoded.
    #[error("decode error at bit {position}: {message}")]
    Decode { position: usize, message: String },
    /// Malformed textual input (data files, DFA files).
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    /// A search produced no explanation.
    #[error("empty trace: no accepting model found (first accepting step reached: {t0_reached})")]
    EmptyTrace { t0_reached: bool },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn capacity<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capacity(msg.into()))
}
