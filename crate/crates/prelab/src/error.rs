use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    Index(String),
    #[error("not a preorder: {0}")]
    NotPreorder(String),
    #[error("not a closed set: {0}")]
    NotClosed(String),
    #[error("not a prelation: {0}")]
    NotPrelation(String),
    #[error("type mismatch: {0}")]
    Mismatch(String),
    #[error("size limit: {0}")]
    Limit(String),
    #[error("{law} law fails at {instance:?}")]
    Law { law: &'static str, instance: Vec<usize> },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("malformed encoding: {0}")]
    Encoding(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("grammar: {0}")]
    Grammar(String),
}
