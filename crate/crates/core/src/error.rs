use thiserror::Error;

/// Errors raised by the algebra, conformal and structural operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("derivation is not locally nilpotent within cap {cap}: witness {witness}")]
    NotLocallyNilpotent { witness: String, cap: u32 },

    #[error("locality indeterminate within cap {cap}: structural bound is {bound}")]
    IndeterminateLocality { cap: u32, bound: u32 },

    #[error("locality of ({left}, {right}) indeterminate within cap {cap}: structural bound is {bound}")]
    IndeterminatePair {
        left: String,
        right: String,
        cap: u32,
        bound: u32,
    },

    #[error("window {window} too small for order {order}")]
    WindowExceeded { window: i64, order: u32 },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("validation failed: {0}")]
    Validation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
