use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rotation of {0} degrees exceeds the supported ±45 degree range")]
    AngleOutOfRange(f64),

    #[error("character {0:?} is not in the glyph atlas")]
    UnsupportedChar(char),

    #[error("ocr engine failed: {0}")]
    Engine(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: line {line}: {message}")]
    Manifest {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("image codec error: {0}")]
    Codec(#[from] image::ImageError),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
