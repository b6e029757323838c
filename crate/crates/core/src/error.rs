use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("contract error: {0}")]
    Contract(String),

    #[error("singularity at the hole centre")]
    Singularity,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
}
