use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("assembly failed: {0}")]
    Assembly(String),
    #[error("linear solve failed: {0}")]
    Solve(String),
    #[error("evaluation point too close to the surface: {0}")]
    TooClose(String),
}

pub type Result<T> = std::result::Result<T, Error>;
