use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("no concepts")]
    NoConcepts,

    #[error("insufficient concepts: need at least 6, found {found}")]
    InsufficientConcepts { found: usize },

    #[error("unknown language `{0}`")]
    UnknownLanguage(String),

    #[error("unknown concept `{0}`")]
    UnknownConcept(String),

    #[error("missing word for concept `{concept}` in language `{language}`")]
    MissingCell { concept: String, language: String },

    #[error("empty word")]
    EmptyWord,

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("point does not conform to shape: {0}")]
    ShapeMismatch(String),

    #[error("leaf index {leaf} out of range for {leaves} leaves")]
    InvalidLeaf { leaf: usize, leaves: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("sample of size {0} is too small for the requested normalization")]
    SampleTooSmall(usize),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
