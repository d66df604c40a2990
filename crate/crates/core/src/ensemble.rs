//! Dicke-state configurations.
//!
//! Angular momenta are half-integers, so they are stored doubled: `two_j = 2J`
//! and `two_m = 2M`. Every physical quantity that must be an integer (the
//! excitation count, photon numbers, coupling factors) is derived from these
//! with exact integer arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Initial atomic state `|J, M⟩` together with the reduced detuning
/// `δ = Δ/|g|` and the coupling phase `φ = arg(g)`.
///
/// The photon mode always starts in vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DickeInitialState<T> {
    two_j: i64,
    two_m: i64,
    delta: T,
    phi: T,
}

impl<T: Real> DickeInitialState<T> {
    /// Validates `(2J, 2M)` and builds the state.
    pub fn new(two_j: i64, two_m: i64, delta: T, phi: T) -> Result<Self> {
        if two_j < 0 {
            return Err(Error::Range(format!("2J must be non-negative, got {two_j}")));
        }
        if (two_j - two_m).rem_euclid(2) != 0 {
            return Err(Error::ParityMismatch { two_j, two_m });
        }
        if two_m.abs() > two_j {
            return Err(Error::Range(format!("|2M| = {} exceeds 2J = {two_j}", two_m.abs())));
        }
        Ok(Self { two_j, two_m, delta, phi })
    }

    /// Symmetric Dicke state `J = N/2` with `excited` atoms up and `φ = 0`.
    pub fn from_excited_count(n_atoms: i64, excited: i64, delta: T) -> Result<Self> {
        if n_atoms < 1 {
            return Err(Error::Range(format!("need at least one atom, got {n_atoms}")));
        }
        if !(0..=n_atoms).contains(&excited) {
            return Err(Error::Range(format!(
                "excited count {excited} outside [0, {n_atoms}]"
            )));
        }
        Self::new(n_atoms, 2 * excited - n_atoms, delta, T::zero())
    }

    /// Same configuration with a different coupling phase.
    pub fn with_phi(self, phi: T) -> Self {
        Self { phi, ..self }
    }

    /// Same configuration with a different detuning.
    pub fn with_delta(self, delta: T) -> Self {
        Self { delta, ..self }
    }

    pub fn two_j(&self) -> i64 {
        self.two_j
    }

    pub fn two_m(&self) -> i64 {
        self.two_m
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    /// `J + M`: atomic excitations, and the largest photon number reachable.
    pub fn excitation_count(&self) -> u64 {
        ((self.two_j + self.two_m) / 2) as u64
    }

    /// `J - M`: atoms (in the symmetric picture) that start in the ground level.
    pub fn deexcitation_count(&self) -> u64 {
        ((self.two_j - self.two_m) / 2) as u64
    }

    /// Dimension `J + M + 1` of the conserved-excitation subspace.
    pub fn dimension(&self) -> usize {
        self.excitation_count() as usize + 1
    }

    pub fn j(&self) -> T {
        T::lit(self.two_j as f64) / T::lit(2.0)
    }

    pub fn m(&self) -> T {
        T::lit(self.two_m as f64) / T::lit(2.0)
    }
}
