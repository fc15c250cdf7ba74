use thiserror::Error;

/// Errors surfaced by the simulation, benchmark, and planning routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("frequency must be nonnegative, got {0}")]
    NegativeFrequency(f64),
    #[error("invalid parameter `{name}` = {value}: {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("Fock cutoff {dim} unsafe for |beta|^2 = {beta_sq}: need dim >= {required}")]
    TruncationUnsafe {
        dim: usize,
        beta_sq: f64,
        required: usize,
    },
    #[error(
        "quadrature did not converge: error estimate {achieved:e} exceeds tolerance \
         {required:e} after {panels} panels"
    )]
    QuadratureNoConverge {
        achieved: f64,
        required: f64,
        panels: usize,
    },
    #[error("mean occupation {n_mean} exceeds the weak-coupling limit {limit}")]
    WeakCouplingExceeded { n_mean: f64, limit: f64 },
    #[error("not a valid density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("invalid frequency band [{lo}, {hi}]")]
    InvalidBand { lo: f64, hi: f64 },
    #[error("k_B T / (hbar omega0) = {0} is below the high-temperature threshold 10")]
    NotHighTemperature(f64),
    #[error("series grid invalid: {0}")]
    InvalidSeries(String),
    #[error("plan grid mismatch: expected {expected} frequencies, built {actual}")]
    PlanGridMismatch { expected: usize, actual: usize },
    #[error("plan parse error at line {line}: {message}")]
    PlanParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            requirement: "must be finite",
        })
    }
}
