use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("viewport has zero pixel dimensions ({width}x{height})")]
    EmptyViewport { width: u32, height: u32 },
    #[error("invalid zoom {0}: must be finite and positive")]
    InvalidZoom(f64),
    #[error("viewport resolves to a {0}-pixel virtual map, above the supported maximum of 2^40")]
    ZoomTooDeep(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid palette: {0}")]
    InvalidPalette(String),
    #[error("cannot encode an empty image")]
    EmptyImage,
    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("PNG encoding failed: {0}")]
    Png(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
