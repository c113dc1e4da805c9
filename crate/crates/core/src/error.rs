use std::path::PathBuf;

use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Error)]
pub enum NodalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("surface is not smooth: vertex {vertex:?} has cone determinant {det}")]
    NonSmoothSurface { vertex: [i64; 2], det: i64 },

    #[error("insufficient generators: evaluation matrix has rank {rank}, need {required}")]
    InsufficientGenerators { rank: usize, required: usize },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("no non-degenerate equivariant sample found after {attempts} attempts")]
    ResampleExhausted { attempts: usize },

    #[error("δ = {delta} exceeds the configured maximum {max}")]
    DeltaOutOfRange { delta: usize, max: usize },

    #[error("parse error in {source_name} at {context}: {message}")]
    Parse {
        source_name: String,
        context: String,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl NodalError {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            NodalError::Inconsistency(_)
            | NodalError::InsufficientGenerators { .. }
            | NodalError::ResampleExhausted { .. } => 3,
            NodalError::Io { .. } => 1,
            _ => 2,
        }
    }
}
