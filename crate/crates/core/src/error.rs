use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown source vertex `{0}`")]
    UnknownSource(String),

    #[error("unknown target vertex `{0}`")]
    UnknownTarget(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid vertex name `{0}`")]
    InvalidVertexName(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("graph contains a cycle")]
    Cycle,

    #[error("search exceeded the size limit ({0})")]
    SizeLimit(String),

    #[error("no safe move from node {0}")]
    NoSafeMove(usize),

    #[error("expected a {expected} instance, found {found}")]
    WrongModel {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid formula: {0}")]
    Formula(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
