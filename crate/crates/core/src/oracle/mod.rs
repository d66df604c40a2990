//! Independent ground truth for the spectral pipeline.
//!
//! Two checks with different failure modes:
//! - [`full_space`] evolves the raw Tavis-Cummings Hamiltonian in the full
//!   `2^N ⊗ Fock` space for `N ≤ 4`. It certifies the reduced matrix itself.
//! - [`ode`] integrates the reduced equations with an adaptive Runge-Kutta
//!   scheme. It certifies the spectral exponentiation at large dimension.

pub mod full_space;
pub mod ode;
mod validate;

pub use full_space::{brute_force_distribution, brute_force_singlet_distribution, FullSpaceModel};
pub use ode::ode_distribution;
pub use validate::{validate, validate_with, ValidationCase, ValidationReport, VALIDATION_THRESHOLD};
