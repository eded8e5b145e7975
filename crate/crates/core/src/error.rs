use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not PSD: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("state is not of X form (largest forbidden entry {max_entry:e}); use the oracle path")]
    NotXState { max_entry: f64 },

    #[error("temperature must be positive for a thermal state (got T = {t}); use the ground state for T = 0")]
    NonPositiveTemperature { t: f64 },

    #[error("Bloch vector has norm {norm} > 1")]
    InvalidBlochVector { norm: f64 },

    #[error("probability {p} outside [0, 1]")]
    InvalidProbability { p: f64 },

    #[error("{measure} value {value} lies outside [0, 1] beyond the clamp tolerance")]
    ValueOutOfRange { measure: &'static str, value: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
