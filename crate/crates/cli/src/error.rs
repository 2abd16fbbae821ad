use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("generator {family} failed: {source}")]
    Generator {
        family: String,
        #[source]
        source: ppc_core::Error,
    },
    /// A listed analysis failed; `index` counts from 0 in config order.
    #[error("analysis #{index} ({kind}, {params}) failed: {source}")]
    Analysis {
        index: usize,
        kind: &'static str,
        params: String,
        #[source]
        source: ppc_core::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] ppc_core::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = ExperimentError> = std::result::Result<T, E>;

pub(crate) fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> ExperimentError {
    let path = path.into();
    move |source| ExperimentError::Io { path, source }
}
