use std::io;

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("{source_name}: input is not valid UTF-8 (line {line})")]
    NonUtf8 { source_name: String, line: u64 },

    #[error("row {row}: malformed CSV: {message}")]
    Csv { row: u64, message: String },

    #[error("row {row}: invalid span offset `{token}`: {message}")]
    InvalidOffset {
        row: u64,
        token: String,
        message: String,
    },

    #[error("row {row}: offset {offset} exceeds text length {len}")]
    OffsetOutOfRange { row: u64, offset: usize, len: usize },

    #[error("invalid range ({start}, {end}): start must be below end")]
    InvalidRange { start: usize, end: usize },

    #[error("length mismatch: {tokens} tokens but {labels} labels")]
    LengthMismatch { tokens: usize, labels: usize },

    #[error("token position {position} out of range for {len} tokens")]
    PositionOutOfRange { position: usize, len: usize },

    #[error("{0}")]
    EmptyInput(&'static str),

    #[error("duplicate post id `{0}`")]
    DuplicateId(String),

    #[error("predictions reference unknown post ids: {}", .0.join(", "))]
    UnknownIds(Vec<String>),

    #[error("prediction for post `{id}` has offset {offset} beyond text length {len}")]
    PredictionOutOfRange {
        id: String,
        offset: usize,
        len: usize,
    },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("model file line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of the optimizer or inference arithmetic, as opposed
    /// to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}
