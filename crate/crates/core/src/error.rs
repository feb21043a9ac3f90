use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("map is not order-preserving: {0}")]
    NotOrderPreserving(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("axiom {axiom} violated: {detail}")]
    Axiom { axiom: String, detail: String },
    #[error("invalid choice: {0}")]
    InvalidChoice(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("inconsistent structure: {0}")]
    Inconsistent(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("scale exceeded: {0}")]
    Scale(String),
    #[error("seed error: {0}")]
    Seed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn axiom(axiom: &str, detail: impl Into<String>) -> Self {
        Error::Axiom { axiom: axiom.to_string(), detail: detail.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
