use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A word whose vanishing could not be decided blocked a pairing evaluation.
    #[error("undecided vanishing of `{word}`")]
    UndecidedVanishing { word: String },
}

pub type Result<T> = std::result::Result<T, Error>;
