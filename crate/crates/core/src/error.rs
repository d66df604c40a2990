use thiserror::Error;

/// Errors raised anywhere in the simulation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("2J = {two_j} and 2M = {two_m} must have the same parity")]
    ParityMismatch { two_j: i64, two_m: i64 },

    #[error("out of range: {0}")]
    Range(String),

    #[error("integer overflow forming coupling coefficient at photon number {photon_number}")]
    Overflow { photon_number: usize },

    #[error("tridiagonal eigensolver did not converge (dimension {dimension}, {iterations} iterations on eigenvalue {index})")]
    ConvergenceFailure {
        dimension: usize,
        iterations: usize,
        index: usize,
    },

    #[error("invalid time grid: {0}")]
    InvalidTimes(String),

    #[error("Mandel-Q is undefined at every grid point (mean photon number stays below 1e-12); the state cannot emit")]
    AllUndefined,

    #[error("brute-force oracle supports at most 4 atoms, got {0}")]
    Dimension(usize),

    #[error("ODE integrator step size underflowed at tau = {tau} (h = {step:e})")]
    StepFailure { tau: f64, step: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
