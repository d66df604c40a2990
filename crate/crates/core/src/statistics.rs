//! Photon-number distribution of the emitted field and its observables.
//!
//! Tracing the atoms out of the evolved joint state leaves a photon density
//! matrix that is already diagonal in the number basis, with
//! `P(n, τ) = |A_n(τ)|²`. Every observable below is computed from that
//! probability vector alone, so the coupling phase can never reach them.

use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::DickeInitialState;
use crate::error::{Error, Result};
use crate::hamiltonian::EffectiveHamiltonian;
use crate::propagator::{spectral_decompose, EvolutionAmplitudes, SpectralDecomposition, TAU_BATCH};
use crate::scalar::Real;

/// Mean photon numbers below this make Mandel-Q undefined.
pub const MEAN_FLOOR: f64 = 1e-12;

/// Default uniform grid size on `(0, 1]` for [`q_min`].
pub const DEFAULT_QMIN_GRID: usize = 2000;

/// Golden-section refinement stops once the bracket is narrower than this.
pub const QMIN_REFINE_WIDTH: f64 = 1e-6;

/// `P(n)` for `n = 0..=J+M` at one time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonDistribution<T> {
    pub tau: T,
    pub probabilities: Vec<T>,
}

impl<T: Real> PhotonDistribution<T> {
    /// Wraps an arbitrary probability vector (synthetic distributions, oracle
    /// output). No normalisation is applied.
    pub fn from_probabilities(tau: T, probabilities: Vec<T>) -> Self {
        Self { tau, probabilities }
    }

    pub fn total(&self) -> T {
        self.probabilities.iter().copied().sum()
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Largest `|P_a(n) - P_b(n)|`, treating missing entries as zero.
    pub fn max_abs_difference(&self, other: &Self) -> T {
        let len = self.len().max(other.len());
        (0..len)
            .map(|n| {
                let a = self.probabilities.get(n).copied().unwrap_or_else(T::zero);
                let b = other.probabilities.get(n).copied().unwrap_or_else(T::zero);
                (a - b).abs()
            })
            .fold(T::zero(), T::max)
    }
}

/// Moments and shape descriptors of one distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmissionStatistics<T> {
    pub tau: T,
    pub mean: T,
    pub variance: T,
    pub std: T,
    /// `(σ² - ⟨n⟩)/⟨n⟩`; `None` when the mean is below [`MEAN_FLOOR`].
    pub mandel_q: Option<T>,
    /// `argmax_n P(n)` and its probability.
    pub fock_peak: (usize, T),
}

/// Minimum Mandel-Q over the first cycle `0 < τ ≤ 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QminResult<T> {
    pub q_min: T,
    pub tau_at_min: T,
    pub grid_points: usize,
    pub refined: bool,
}

/// `P(n) = |A_n|²`.
pub fn photon_distribution<T: Real>(amps: &EvolutionAmplitudes<T>) -> PhotonDistribution<T> {
    PhotonDistribution {
        tau: amps.tau,
        probabilities: amps.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
    }
}

pub fn moments<T: Real>(dist: &PhotonDistribution<T>) -> EmissionStatistics<T> {
    let p = &dist.probabilities;
    let mean: T = p.iter().enumerate().map(|(n, &pn)| T::from_count(n) * pn).sum();
    // Centred form: stays non-negative and avoids cancellation at small τ.
    let variance: T = p
        .iter()
        .enumerate()
        .map(|(n, &pn)| {
            let dev = T::from_count(n) - mean;
            dev * dev * pn
        })
        .sum();
    let mandel_q = (mean >= T::lit(MEAN_FLOOR)).then(|| variance / mean - T::one());
    let fock_peak = p
        .iter()
        .copied()
        .enumerate()
        .fold((0, T::neg_infinity()), |best, (n, pn)| if pn > best.1 { (n, pn) } else { best });
    EmissionStatistics {
        tau: dist.tau,
        mean,
        variance,
        std: variance.sqrt(),
        mandel_q,
        fock_peak,
    }
}

/// Coherent-state amplitude `|α| = τN/2` of the early-time emission from the
/// half-excited state.
pub fn birula_alpha<T: Real>(n_atoms: u64, tau: T) -> T {
    tau * T::lit(n_atoms as f64) / T::lit(2.0)
}

/// Poisson probabilities `e^{-μ} μⁿ / n!` for `n = 0..len`, in log space so
/// large means neither underflow nor overflow.
pub fn poisson_pmf<T: Real>(mean: T, len: usize) -> Vec<T> {
    if mean == T::zero() {
        return (0..len).map(|n| if n == 0 { T::one() } else { T::zero() }).collect();
    }
    let log_mean = mean.ln();
    let mut log_factorial = T::zero();
    (0..len)
        .map(|n| {
            if n > 0 {
                log_factorial += T::from_count(n).ln();
            }
            (T::from_count(n) * log_mean - mean - log_factorial).exp()
        })
        .collect()
}

/// Total-variation distance to Poisson(`mean`). Poisson mass beyond the
/// support of `dist` counts fully toward the distance.
pub fn poisson_tv_distance<T: Real>(dist: &PhotonDistribution<T>, mean: T) -> T {
    let reference = poisson_pmf(mean, dist.len());
    let covered: T = reference.iter().copied().sum();
    let tail = (T::one() - covered).max(T::zero());
    let body: T = dist
        .probabilities
        .iter()
        .zip(&reference)
        .map(|(&p, &q)| (p - q).abs())
        .sum();
    (body + tail) / T::lit(2.0)
}

/// One diagonalised configuration, ready to be evaluated at any `τ`.
#[derive(Debug, Clone)]
pub struct EmissionProcess<T> {
    state: DickeInitialState<T>,
    decomposition: SpectralDecomposition<T>,
}

impl<T: Real> EmissionProcess<T> {
    pub fn new(state: &DickeInitialState<T>) -> Result<Self> {
        let h = EffectiveHamiltonian::build(state)?;
        Self::from_hamiltonian(&h)
    }

    /// Uses an explicitly supplied `H'` (e.g. a deliberately perturbed one).
    pub fn from_hamiltonian(h: &EffectiveHamiltonian<T>) -> Result<Self> {
        Ok(Self { state: *h.source(), decomposition: spectral_decompose(h)? })
    }

    pub fn state(&self) -> &DickeInitialState<T> {
        &self.state
    }

    pub fn decomposition(&self) -> &SpectralDecomposition<T> {
        &self.decomposition
    }

    pub fn distribution(&self, tau: T) -> PhotonDistribution<T> {
        photon_distribution(&crate::propagator::evolution_amplitudes(&self.decomposition, tau))
    }

    /// Distributions at many times, in input order, parallel across batches.
    pub fn distributions(&self, taus: &[T]) -> Vec<PhotonDistribution<T>> {
        taus.par_chunks(TAU_BATCH)
            .flat_map_iter(|chunk| {
                self.decomposition
                    .amplitudes_batch(chunk)
                    .into_iter()
                    .map(|a| photon_distribution(&a))
            })
            .collect()
    }

    pub fn statistics(&self, tau: T) -> EmissionStatistics<T> {
        moments(&self.distribution(tau))
    }

    pub fn mandel_q(&self, tau: T) -> Option<T> {
        self.statistics(tau).mandel_q
    }

    /// Minimum Mandel-Q on a uniform grid of `(0, 1]`, optionally polished by
    /// golden-section search around the best grid point.
    pub fn q_min(&self, grid_points: usize, refine: bool) -> Result<QminResult<T>> {
        if grid_points < 100 {
            return Err(Error::Range(format!("Q_min grid needs at least 100 points, got {grid_points}")));
        }
        let step = T::one() / T::from_count(grid_points);
        let taus: Vec<T> = (1..=grid_points).map(|i| T::from_count(i) * step).collect();
        let qs: Vec<Option<T>> = self.distributions(&taus).iter().map(|d| moments(d).mandel_q).collect();

        let (best, q_best) = qs
            .iter()
            .enumerate()
            .filter_map(|(i, q)| q.map(|q| (i, q)))
            .fold(None, |acc: Option<(usize, T)>, (i, q)| match acc {
                Some((_, qa)) if qa <= q => acc,
                _ => Some((i, q)),
            })
            .ok_or(Error::AllUndefined)?;

        let mut result = QminResult { q_min: q_best, tau_at_min: taus[best], grid_points, refined: false };
        if refine {
            let lo = if best == 0 { T::zero() } else { taus[best - 1] };
            let hi = taus[(best + 1).min(grid_points - 1)];
            let (tau, q) = golden_section_min(lo, hi, T::lit(QMIN_REFINE_WIDTH), |t| {
                self.mandel_q(t).unwrap_or_else(T::infinity)
            });
            result.refined = true;
            if q < result.q_min {
                result.q_min = q;
                result.tau_at_min = tau;
            }
        }
        Ok(result)
    }
}

/// Minimises `f` on `(lo, hi)`; returns the best interior point found.
fn golden_section_min<T: Real>(mut lo: T, mut hi: T, width: T, f: impl Fn(T) -> T) -> (T, T) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > width {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// [`EmissionProcess::q_min`] for a fresh state.
pub fn q_min<T: Real>(state: &DickeInitialState<T>, grid_points: usize, refine: bool) -> Result<QminResult<T>> {
    EmissionProcess::new(state)?.q_min(grid_points, refine)
}

/// One [`EmissionStatistics`] per `τ`, from a single diagonalisation.
pub fn statistics_series<T: Real>(state: &DickeInitialState<T>, taus: &[T]) -> Result<Vec<EmissionStatistics<T>>> {
    validate_times(taus)?;
    let process = EmissionProcess::new(state)?;
    Ok(process.distributions(taus).iter().map(moments).collect())
}

/// Times must be finite, non-negative and non-decreasing.
pub fn validate_times<T: Real>(taus: &[T]) -> Result<()> {
    if let Some(bad) = taus.iter().find(|t| !t.is_finite() || **t < T::zero()) {
        return Err(Error::InvalidTimes(format!("tau must be finite and >= 0, got {bad}")));
    }
    if taus.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidTimes("tau values must be non-decreasing".into()));
    }
    Ok(())
}
