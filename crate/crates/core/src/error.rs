use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
    #[error("rewriting exceeded the step budget of {budget} while reducing {context}")]
    NonTerminating { budget: u64, context: String },
    #[error("algebra mismatch: {0}")]
    SpecMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("element is not q-central: {0}")]
    NotQCentral(String),
    #[error("rule table is not confluent on overlap {0}")]
    Confluence(String),
    #[error("rule violates the termination order: {0}")]
    Termination(String),
    #[error("inexact division: {0}")]
    NotDivisible(String),
    #[error("degree budget exceeded: {0}")]
    DegreeBudget(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
