//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Schema construction or lookup failed.
    #[error("schema error: {0}")]
    Schema(String),

    /// A corpus line could not be ingested.
    #[error("corpus parse error at line {line}: {msg}")]
    CorpusParse { line: usize, msg: String },

    /// The corpus contained no instances.
    #[error("empty corpus")]
    EmptyCorpus,

    /// A feature name was not found in the schema.
    #[error("unknown feature '{name}'; valid features: {}", valid.join(", "))]
    UnknownFeature { name: String, valid: Vec<String> },

    /// A rule-file line failed to parse.
    #[error("rule parse error at line {line}, column {col}: {msg}")]
    RuleParse { line: usize, col: usize, msg: String },

    /// Invalid argument to an induction, evaluation, or clustering call.
    #[error("{0}")]
    Invalid(String),

    /// A cross-validation fold propagated a learner error.
    #[error("fold {fold}: {source}")]
    InFold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
