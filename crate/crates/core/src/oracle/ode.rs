//! Adaptive Dormand-Prince 5(4) integration of `i dG/dτ = H' G`.
//!
//! Uses the same `H'` as the spectral pipeline but never diagonalises it, so
//! agreement certifies the exponentiation rather than the matrix.

use num_complex::Complex64;

use crate::ensemble::DickeInitialState;
use crate::error::{Error, Result};
use crate::hamiltonian::EffectiveHamiltonian;
use crate::statistics::PhotonDistribution;

pub const MIN_TOL: f64 = 1e-12;
pub const MAX_TOL: f64 = 1e-6;

/// Butcher tableau; the autonomous system needs no time nodes.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integration statistics, mostly for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates from `G(0) = e_0` to `tau` and returns `G(tau)`.
pub fn integrate(h: &EffectiveHamiltonian<f64>, tau: f64, tol: f64) -> Result<(Vec<Complex64>, OdeStats)> {
    let d = h.dimension();
    let mut y = vec![Complex64::new(0.0, 0.0); d];
    y[0] = Complex64::new(1.0, 0.0);
    let mut stats = OdeStats::default();
    if tau == 0.0 {
        return Ok((y, stats));
    }

    // dG/dτ = -i H' G
    let rhs = |x: &[Complex64], out: &mut [Complex64]| {
        h.apply(x, out);
        out.iter_mut().for_each(|z| *z = Complex64::new(z.im, -z.re));
    };

    let mut k: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); d]; 7];
    let mut stage = vec![Complex64::new(0.0, 0.0); d];
    let mut y_new = vec![Complex64::new(0.0, 0.0); d];
    let mut t = 0.0;
    let mut step = (0.1 / h.norm_bound().max(1.0)).min(tau);
    rhs(&y, &mut k[0]);

    while t < tau {
        if step < 1e-15 * tau.max(1.0) {
            return Err(Error::StepFailure { tau: t, step });
        }
        step = step.min(tau - t);

        for s in 1..7 {
            for i in 0..d {
                let mut acc = y[i];
                for (j, a) in A[s].iter().enumerate().take(s) {
                    acc += k[j][i] * (step * a);
                }
                stage[i] = acc;
            }
            rhs(&stage, &mut k[s]);
            if s == 6 {
                y_new.copy_from_slice(&stage);
            }
        }

        let mut err_sq = 0.0;
        for i in 0..d {
            let mut e = Complex64::new(0.0, 0.0);
            for (j, w) in E.iter().enumerate() {
                e += k[j][i] * (step * w);
            }
            let scale = tol + tol * y[i].norm().max(y_new[i].norm());
            err_sq += (e.norm() / scale).powi(2);
        }
        let err = (err_sq / d as f64).sqrt();

        if err <= 1.0 {
            t = if tau - t - step <= 0.0 { tau } else { t + step };
            std::mem::swap(&mut y, &mut y_new);
            // First-same-as-last: the final stage is f(t + h, y_new).
            k.swap(0, 6);
            stats.accepted += 1;
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        step *= factor;
    }
    Ok((y, stats))
}

/// Photon distribution at `tau` via adaptive ODE integration.
pub fn ode_distribution(state: &DickeInitialState<f64>, tau: f64, tol: f64) -> Result<PhotonDistribution<f64>> {
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        return Err(Error::Range(format!("ODE tolerance {tol:e} outside [{MIN_TOL:e}, {MAX_TOL:e}]")));
    }
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::InvalidTimes(format!("tau must be finite and >= 0, got {tau}")));
    }
    let h = EffectiveHamiltonian::build(state)?;
    let (g, _) = integrate(&h, tau, tol)?;
    Ok(PhotonDistribution::from_probabilities(tau, g.iter().map(|z| z.norm_sqr()).collect()))
}
