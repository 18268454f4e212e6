use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid earth model: {0}")]
    InvalidModel(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("{antenna} at TVD offset {offset:.6} m lies outside the host layer ({lower:.6}, {upper:.6})")]
    OutOfLayer {
        antenna: &'static str,
        offset: f64,
        lower: f64,
        upper: f64,
    },

    #[error("integration failed to converge (achieved relative residual {residual:e})")]
    IntegrationFailure { residual: f64 },

    #[error("vanishing denominator in {0}")]
    DivisionDegeneracy(&'static str),

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("training diverged at epoch {epoch} (loss = {loss})")]
    TrainingFailure { epoch: usize, loss: f64 },

    #[error("out of range: {0}")]
    Range(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
