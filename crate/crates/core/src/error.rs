use thiserror::Error;

use crate::lang::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("invalid data: {0}")]
    Data(String),

    #[error("unknown category `{0}`")]
    UnknownCategory(String),

    #[error("unknown domain element `{0}`")]
    UnknownElement(String),

    #[error("category `{0}` has no best-matching units")]
    UndefinedCategory(String),

    #[error("specificity relation has a cycle: {}", .0.join(" > "))]
    SpecificityCycle(Vec<String>),

    #[error("empty domain")]
    EmptyDomain,

    #[error("undefined conditional: {0}")]
    UndefinedConditional(String),

    #[error("connective family {0} is not probability-compatible (only zadeh and lukasiewicz with negation 1-a are accepted)")]
    IncompatibleFamily(&'static str),

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("malformed map file at byte {offset}: {message}")]
    MapFormat { offset: usize, message: String },

    #[error("{path}: line {line}: {message}")]
    FileFormat {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
