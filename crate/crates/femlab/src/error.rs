use thiserror::Error;

#[derive(Debug, Error)]
pub enum FemError {
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("tiling: {0}")]
    Tiling(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },
    #[error("contract: {0}")]
    Contract(String),
    #[error("load is not finite at ({0}, {1})")]
    Load(f64, f64),
    #[error(transparent)]
    Core(#[from] perfhom_core::Error),
    #[error("format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, FemError>;
