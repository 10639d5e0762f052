use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix entry count {len} does not match dim {dim} (expected {})", dim * dim)]
    BadShape { dim: usize, len: usize },

    #[error("matrix is not Hermitian (Frobenius deviation {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("channel families differ: {0} vs {1}")]
    FamilyMismatch(String, String),

    #[error("{strategy} strategy supports at most {cap} shots, got {shots}")]
    ShotCapExceeded {
        strategy: &'static str,
        shots: usize,
        cap: usize,
    },

    #[error("input schedule shape mismatch: {0}")]
    ScheduleShape(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
