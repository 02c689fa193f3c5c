use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver, diagnostics and run orchestration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value in {field} at grid index ({i}, {j}, {k})")]
    NonFinite {
        field: &'static str,
        i: usize,
        j: usize,
        k: usize,
    },

    #[error("density {value:e} below floor {floor:e} at grid index ({i}, {j}, {k})")]
    DensityFloor {
        value: f64,
        floor: f64,
        i: usize,
        j: usize,
        k: usize,
    },

    #[error("negative internal energy {value:e} at grid index ({i}, {j}, {k})")]
    NegativeEnergy { value: f64, i: usize, j: usize, k: usize },

    #[error("input to the inverse Laplacian has non-zero mean {mean:e}")]
    NonZeroMean { mean: f64 },

    #[error("pressure solve did not converge after {iterations} iterations (residual {residual:e})")]
    PressureNotConverged { iterations: usize, residual: f64 },

    #[error("stage {stage} of the time step failed: {source}")]
    Stage {
        stage: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("system mismatch: {0}")]
    SystemMismatch(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed input {path}: {message}")]
    Malformed { path: PathBuf, message: String },

    #[error("empty time series")]
    EmptySeries,

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Faults that originate in the numerics (floors, solver divergence)
    /// rather than in user input.
    pub fn is_runtime_fault(&self) -> bool {
        match self {
            Error::NonFinite { .. }
            | Error::DensityFloor { .. }
            | Error::NegativeEnergy { .. }
            | Error::PressureNotConverged { .. }
            | Error::NonZeroMean { .. } => true,
            Error::Stage { source, .. } => source.is_runtime_fault(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
