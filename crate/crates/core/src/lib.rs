//! Exact single-mode photon statistics of collective emission from an atomic
//! ensemble prepared in a Dicke state `|J, M⟩`, with the field in vacuum.
//!
//! The Tavis-Cummings dynamics from such a state stay inside the
//! `J + M + 1`-dimensional subspace of fixed total excitation, where the
//! generator is a real symmetric tridiagonal matrix. The crate builds that
//! matrix exactly ([`hamiltonian`]), diagonalises it once ([`propagator`]),
//! and reads off the photon-number distribution and its moments at any
//! dimensionless time `τ = |g|t` ([`statistics`]). [`oracle`] holds two
//! independent reference solvers.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what every tolerance in this crate assumes.

pub mod ensemble;
pub mod error;
pub mod hamiltonian;
pub mod oracle;
pub mod propagator;
pub mod scalar;
pub mod statistics;

pub use ensemble::DickeInitialState;
pub use error::{Error, Result};
pub use hamiltonian::EffectiveHamiltonian;
pub use propagator::{evolution_amplitudes, joint_state_amplitudes, spectral_decompose, EvolutionAmplitudes, SpectralDecomposition};
pub use scalar::Real;
pub use statistics::{
    birula_alpha, moments, photon_distribution, poisson_tv_distance, q_min, statistics_series, EmissionProcess,
    EmissionStatistics, PhotonDistribution, QminResult,
};

pub type DickeState = DickeInitialState<f64>;
pub type Hamiltonian = EffectiveHamiltonian<f64>;
pub type Decomposition = SpectralDecomposition<f64>;
pub type Amplitudes = EvolutionAmplitudes<f64>;
pub type Distribution = PhotonDistribution<f64>;
pub type Statistics = EmissionStatistics<f64>;
pub type Qmin = QminResult<f64>;
pub type Process = EmissionProcess<f64>;

pub type DickeState32 = DickeInitialState<f32>;
pub type Process32 = EmissionProcess<f32>;
