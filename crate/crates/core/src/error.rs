use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PqkError {
    #[error("config error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("{path}: row {row}: {message}")]
    Row {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("unknown motif id `{0}`")]
    UnknownMotif(String),

    #[error("survival {0} outside [0, 1]")]
    SurvivalOutOfRange(f64),

    #[error("invalid circuit: {0}")]
    Circuit(String),

    #[error("backend infeasible: {0}")]
    BackendInfeasible(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl PqkError {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            PqkError::Config(_) => 2,
            PqkError::BackendInfeasible(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, PqkError>;
