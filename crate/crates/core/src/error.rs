use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed category file: {0}")]
    Parse(String),

    #[error("structural error: {0}")]
    Structure(String),

    #[error("invalid gauge: {0}")]
    Gauge(String),

    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("{what} index {index} out of range (have {len})")]
    OutOfRange { what: &'static str, index: usize, len: usize },

    #[error("configuration space of dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: u128, cap: u128 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not hermitian (max |A - A^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("dense eigensolver is limited to dimension {max}, got {dim}")]
    TooLargeForDense { dim: usize, max: usize },

    #[error("eigensolver did not converge after {restarts} restarts (residual {residual:e})")]
    NoConvergence { restarts: usize, residual: f64 },

    #[error("F-symbols lack tetrahedral symmetry: {0}")]
    NotTetrahedral(String),

    #[error("Levin-Wen normalization failed: {0}")]
    LwNormalization(String),

    #[error("invalid string path: {0}")]
    Path(String),
}

impl Error {
    /// Stable identifier used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse(_) => "parse",
            Error::Structure(_) => "structure",
            Error::Gauge(_) => "gauge",
            Error::Lattice(_) => "lattice",
            Error::OutOfRange { .. } => "out_of_range",
            Error::DimensionCap { .. } => "dimension_cap",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotHermitian(_) => "not_hermitian",
            Error::TooLargeForDense { .. } => "too_large_for_dense",
            Error::NoConvergence { .. } => "no_convergence",
            Error::NotTetrahedral(_) => "not_tetrahedral",
            Error::LwNormalization(_) => "lw_normalization",
            Error::Path(_) => "path",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
