use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error(
        "matrix is not symmetric: entry ({row}, {col}) = {upper} but ({col}, {row}) = {lower}"
    )]
    NotSymmetric {
        row: usize,
        col: usize,
        upper: f64,
        lower: f64,
    },

    #[error("invalid sparse structure: {0}")]
    InvalidStructure(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid interval [{lo}, {hi}]: lower endpoint must be below upper endpoint")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("degree must be at least {min}, got {degree}")]
    DegreeTooSmall { degree: usize, min: usize },

    #[error("function value {value} at node x = {node} is not finite")]
    NonFiniteSample { node: f64, value: f64 },

    #[error("coefficient list is empty")]
    EmptyCoefficients,

    #[error("coefficient {index} is not finite ({value})")]
    NonFiniteCoefficient { index: usize, value: f64 },

    #[error("{evaluator} needs {expected:?}-basis coefficients, got {actual:?}")]
    BasisMismatch {
        evaluator: &'static str,
        expected: crate::chebyshev::Basis,
        actual: crate::chebyshev::Basis,
    },

    #[error("at least one probe is required")]
    NoProbes,

    #[error("symmetric eigendecomposition did not converge")]
    EigenFailed,

    #[error(
        "spectral interval [{lo}, {hi}] is degenerate; operator is (close to) a multiple of the identity"
    )]
    DegenerateSpectrum { lo: f64, hi: f64 },

    #[error("invalid coefficient file {path}: {source}")]
    CoefficientFormat {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}
