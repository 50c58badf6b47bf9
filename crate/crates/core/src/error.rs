use thiserror::Error;

/// Errors raised by constructors, searches and parsers in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("triple {0:?} repeats a vertex")]
    RepeatedVertex([usize; 3]),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An exact engine was asked for an instance above its configured size.
    #[error("{what} = {value} exceeds the bound {limit}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    /// A capped enumeration ran out before it could decide the question.
    #[error("inconclusive: copy enumeration hit the cap of {cap}")]
    Inconclusive { cap: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
