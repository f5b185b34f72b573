use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("branch tracking failed: {0}")]
    Branch(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
