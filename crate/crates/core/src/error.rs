use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate geometry: {0}")]
    Geometry(String),

    #[error("{path}:{line}: {message}")]
    Schema {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("fit did not converge after {iterations} iterations (best cost {best_cost:.3e})")]
    NonConvergence {
        iterations: usize,
        best_cost: f64,
        best_params: Vec<f64>,
    },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("state space of {states:.3e} states exceeds the enumeration limit of {limit:.0e}; use the asymptotic Gd/(Gd+1) formula instead")]
    StateSpaceOverflow { states: f64, limit: f64 },

    #[error("eigen-decomposition failed: {0}")]
    Eigen(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image error on {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config error in {path}: {message}")]
    Config { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    ///
    /// 2 is a data problem (bad files, schema violations, degenerate series),
    /// 3 a numerical failure (optimizer, quadrature, eigen-solver).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. }
            | Error::Quadrature(_)
            | Error::StateSpaceOverflow { .. }
            | Error::Eigen(_) => 3,
            _ => 2,
        }
    }
}
