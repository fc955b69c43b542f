use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorusError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular point: {0}")]
    Singularity(String),
    #[error("tolerance not met: {0}")]
    Tolerance(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("no real root: {0}")]
    NoRealRoot(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("projection pole too close to a vertex: {0}")]
    PoleProximity(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for TorusError {
    fn from(err: std::io::Error) -> Self {
        TorusError::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, TorusError>;
