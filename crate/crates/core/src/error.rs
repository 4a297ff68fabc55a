use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: expected an integer token, found {token:?}")]
    Parse { line: usize, token: String },

    /// Itemsets with more than one item are outside the flat sequence model.
    #[error(
        "sequence {sequence}: itemset of size {size} (only single-item itemsets are supported)"
    )]
    MultiItemItemset { sequence: usize, size: usize },

    #[error("sequence {sequence}: empty sequence")]
    EmptySequence { sequence: usize },

    #[error("unterminated sequence at end of input (missing -2)")]
    Unterminated,

    #[error("the database contains no sequences")]
    EmptyDatabase,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("regex syntax error at position {pos}: {msg}")]
    RegexSyntax { pos: usize, msg: String },

    #[error("unknown item {0:?}")]
    UnknownItem(String),
}
