use thiserror::Error;

/// Errors raised by the library. Search outcomes that merely fail to find a
/// witness are not errors; see [`crate::morphism::Outcome`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),

    #[error("empty pattern")]
    EmptyPattern,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty period")]
    EmptyPeriod,

    #[error("empty word")]
    EmptyWord,

    #[error("variable {0} is not assigned by the morphism")]
    Unassigned(String),

    #[error("formula contains mirrored symbol {0}")]
    MirroredSymbol(String),

    #[error("{0} is not a free set")]
    NotFree(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("size guard exceeded: {0}")]
    TooLarge(String),

    #[error("search budget exhausted: {0}")]
    Budget(String),

    #[error("line {line}: {msg}")]
    Corpus { line: usize, msg: String },

    #[error("cannot materialize witness: {0}")]
    Materialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
