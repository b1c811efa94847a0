use thiserror::Error;

/// Errors produced across the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    #[error("shift {value} at ({row}, {col}) is outside 0..{lifting}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: u32,
        lifting: u32,
    },

    #[error("operation requires a fully-connected base graph")]
    NotFullyConnected,

    #[error("degree {degree} exceeds the variable degree {dv}")]
    DegreeOverflow { degree: usize, dv: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("structure database does not cover the request: {0}")]
    DbInsufficient(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("search space exhausted without a solution")]
    Exhausted,

    #[error("unsupported format version: {0}")]
    Version(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
