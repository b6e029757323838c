use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("at ε = {eps}: {source}")]
    AtEps {
        eps: f64,
        #[source]
        source: Box<HarnessError>,
    },
    #[error("fit: {0}")]
    Fit(String),
    #[error(transparent)]
    Core(#[from] perfhom_core::Error),
    #[error(transparent)]
    Fem(#[from] perfhom_femlab::FemError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    pub fn at(eps: f64, source: impl Into<HarnessError>) -> Self {
        HarnessError::AtEps { eps, source: Box::new(source.into()) }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
