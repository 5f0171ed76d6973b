use thiserror::Error;

/// Errors produced by the analysis library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error in document `{doc_id}`, field `{field}`: {message}")]
    Schema {
        doc_id: String,
        field: String,
        message: String,
    },

    #[error("malformed corpus file: {0}")]
    Malformed(String),

    #[error("duplicate document id `{0}`")]
    DuplicateId(String),

    #[error("corpus `{0}` has no documents")]
    EmptyCorpus(String),

    #[error("document `{doc_id}` has no `{field}` field")]
    MissingField { doc_id: String, field: String },

    #[error("document `{doc_id}` has {len} fulltext tokens, fewer than window size {omega}")]
    DocumentTooShort {
        doc_id: String,
        len: usize,
        omega: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid window spec: {0}")]
    InvalidSpec(String),

    #[error("document `{doc_id}` has an untagged token at {field} position {position}")]
    Untagged {
        doc_id: String,
        field: String,
        position: usize,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("S-term system `{0}` has no terms")]
    UnusableSystem(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
