use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::DickeInitialState;
use crate::error::{Error, Result};
use crate::statistics::EmissionProcess;

use super::full_space::{brute_force_distribution, MAX_ATOMS};

/// Largest tolerated max-norm difference between the pipeline and brute force.
pub const VALIDATION_THRESHOLD: f64 = 1e-10;

/// One `(N, E, δ, τ)` comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationCase {
    pub n_atoms: usize,
    pub excited: usize,
    pub delta: f64,
    pub tau: f64,
    /// Max-norm difference of the photon distributions; infinite when the
    /// pipeline itself failed for this configuration.
    pub max_abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub max_atoms: usize,
    pub threshold: f64,
    pub cases: Vec<ValidationCase>,
    pub worst: Option<ValidationCase>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &ValidationCase> {
        self.cases.iter().filter(|c| c.max_abs_diff.is_nan() || c.max_abs_diff >= self.threshold)
    }
}

/// Compares the spectral pipeline against brute force on every
/// `N ≤ max_atoms`, `0 ≤ E ≤ N`, `δ`, `τ`.
pub fn validate(max_atoms: usize, deltas: &[f64], taus: &[f64]) -> Result<ValidationReport> {
    validate_with(max_atoms, deltas, taus, EmissionProcess::new)
}

/// [`validate`] with a caller-supplied pipeline constructor.
pub fn validate_with<F>(max_atoms: usize, deltas: &[f64], taus: &[f64], pipeline: F) -> Result<ValidationReport>
where
    F: Fn(&DickeInitialState<f64>) -> Result<EmissionProcess<f64>> + Sync,
{
    if max_atoms > MAX_ATOMS {
        return Err(Error::Dimension(max_atoms));
    }
    let cells: Vec<(usize, usize, f64)> = (1..=max_atoms)
        .flat_map(|n| (0..=n).flat_map(move |e| deltas.iter().map(move |&d| (n, e, d))))
        .collect();

    let per_cell: Vec<Vec<ValidationCase>> = cells
        .par_iter()
        .map(|&(n, e, delta)| {
            let process = DickeInitialState::from_excited_count(n as i64, e as i64, delta)
                .and_then(|s| pipeline(&s));
            taus.iter()
                .map(|&tau| {
                    let diff = match (&process, brute_force_distribution(n, e, delta, tau)) {
                        (Ok(p), Ok(truth)) => p.distribution(tau).max_abs_difference(&truth),
                        _ => f64::INFINITY,
                    };
                    ValidationCase { n_atoms: n, excited: e, delta, tau, max_abs_diff: diff }
                })
                .collect()
        })
        .collect();

    let cases: Vec<ValidationCase> = per_cell.into_iter().flatten().collect();
    let worst = cases
        .iter()
        .max_by(|a, b| a.max_abs_diff.total_cmp(&b.max_abs_diff))
        .cloned();
    let passed = cases.iter().all(|c| c.max_abs_diff < VALIDATION_THRESHOLD);
    Ok(ValidationReport { max_atoms, threshold: VALIDATION_THRESHOLD, cases, worst, passed })
}
