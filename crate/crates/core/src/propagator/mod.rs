//! Spectral time evolution on the conserved-excitation subspace.
//!
//! `H'` is diagonalised once as `V diag(λ) Vᵀ`; the vacuum-start amplitudes at
//! any `τ = |g|t` are then
//!
//! ```text
//! A_n(τ) = Σ_k V[n,k] · exp(-iτλ_k) · V[0,k]
//! ```
//!
//! which costs O(d²) per time point. Everything here is in the interaction
//! picture: the free evolution only contributes a global phase per
//! excitation sector, which drops out of every photon-number statistic.

mod tridiag;

use num_complex::Complex;
use rayon::prelude::*;

use crate::ensemble::DickeInitialState;
use crate::error::{Error, Result};
use crate::hamiltonian::EffectiveHamiltonian;
use crate::scalar::Real;

/// Eigenvectors are produced in column blocks of this size and scattered
/// into row-major storage, so only one `d × d` buffer is ever live.
const COLUMN_BLOCK: usize = 256;

/// Time points evaluated together per pass over the eigenvector matrix.
pub const TAU_BATCH: usize = 16;

/// `H' = V diag(λ) Vᵀ` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T> {
    eigenvalues: Vec<T>,
    /// Row-major: `vectors[n * d + k] = V[n, k]`.
    vectors: Vec<T>,
    source: EffectiveHamiltonian<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn source(&self) -> &EffectiveHamiltonian<T> {
        &self.source
    }

    /// `V[n, k]`: photon-number component `n` of eigenvector `k`.
    pub fn entry(&self, n: usize, k: usize) -> T {
        self.vectors[n * self.dimension() + k]
    }

    /// Row `n` of `V`.
    pub fn row(&self, n: usize) -> &[T] {
        let d = self.dimension();
        &self.vectors[n * d..(n + 1) * d]
    }

    /// Eigenvector `k` (column `k` of `V`).
    pub fn eigenvector(&self, k: usize) -> Vec<T> {
        (0..self.dimension()).map(|n| self.entry(n, k)).collect()
    }

    /// `max |VᵀV - I|`. O(d³); meant for checks on moderate sizes.
    pub fn orthogonality_defect(&self) -> T {
        let d = self.dimension();
        let columns: Vec<Vec<T>> = (0..d).map(|k| self.eigenvector(k)).collect();
        let mut worst = T::zero();
        for a in 0..d {
            for b in a..d {
                let dot: T = columns[a].iter().zip(&columns[b]).map(|(&x, &y)| x * y).sum();
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `max |V diag(λ) Vᵀ - H'|`. O(d³).
    pub fn reconstruction_defect(&self) -> T {
        let d = self.dimension();
        let mut worst = T::zero();
        for r in 0..d {
            for c in r..d {
                let mut acc = T::zero();
                for k in 0..d {
                    acc += self.entry(r, k) * self.eigenvalues[k] * self.entry(c, k);
                }
                worst = worst.max((acc - self.source.entry(r, c)).abs());
            }
        }
        worst
    }

    fn weights(&self, tau: T) -> (Vec<T>, Vec<T>) {
        let first = self.row(0);
        self.eigenvalues
            .iter()
            .zip(first)
            .map(|(&lam, &v0)| {
                let (s, c) = (tau * lam).sin_cos();
                (v0 * c, -v0 * s)
            })
            .unzip()
    }

    /// Amplitudes at several times in one pass over `V`.
    ///
    /// Runs single-threaded; callers parallelise across batches.
    pub fn amplitudes_batch(&self, taus: &[T]) -> Vec<EvolutionAmplitudes<T>> {
        let d = self.dimension();
        let weights: Vec<(Vec<T>, Vec<T>)> = taus.iter().map(|&t| self.weights(t)).collect();
        let mut out: Vec<Vec<Complex<T>>> = vec![Vec::with_capacity(d); taus.len()];
        for n in 0..d {
            let row = self.row(n);
            for (b, (wr, wi)) in weights.iter().enumerate() {
                out[b].push(Complex::new(dot(row, wr), dot(row, wi)));
            }
        }
        taus.iter()
            .zip(out)
            .map(|(&tau, mut amplitudes)| {
                // U(0) = I exactly; the sum over V only reproduces it to rounding.
                if tau == T::zero() {
                    amplitudes.iter_mut().for_each(|a| *a = Complex::new(T::zero(), T::zero()));
                    amplitudes[0] = Complex::new(T::one(), T::zero());
                }
                EvolutionAmplitudes { tau, amplitudes }
            })
            .collect()
    }
}

/// Unrolled dot product; four independent partial sums let the compiler
/// keep the loop in vector registers.
#[inline]
fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    let mut acc = [T::zero(); 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let tail: T = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(&x, &y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Column `A_n(τ)` of the propagator for the vacuum start, indexed by photon
/// number `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionAmplitudes<T> {
    pub tau: T,
    pub amplitudes: Vec<Complex<T>>,
}

impl<T: Real> EvolutionAmplitudes<T> {
    /// `Σ |A_n|²`.
    pub fn norm_squared(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Diagonalises `H'`.
pub fn spectral_decompose<T: Real>(h: &EffectiveHamiltonian<T>) -> Result<SpectralDecomposition<T>> {
    let d = h.dimension();
    let (diag, off) = (h.diag(), h.offdiag());
    let eigenvalues = tridiag::eigenvalues(diag, off).map_err(|f| Error::ConvergenceFailure {
        dimension: d,
        iterations: f.iterations,
        index: f.index,
    })?;

    let norm = h.norm_bound();
    let mut vectors = vec![T::zero(); d * d];
    for start in (0..d).step_by(COLUMN_BLOCK) {
        let end = (start + COLUMN_BLOCK).min(d);
        let block: Vec<Vec<T>> = (start..end)
            .into_par_iter()
            .map(|k| tridiag::eigenvector(diag, off, eigenvalues[k], norm, k as u64))
            .collect();
        for (offset, column) in block.iter().enumerate() {
            let k = start + offset;
            for (n, &x) in column.iter().enumerate() {
                vectors[n * d + k] = x;
            }
        }
    }

    Ok(SpectralDecomposition { eigenvalues, vectors, source: h.clone() })
}

/// `A_n(τ)` for the vacuum start.
pub fn evolution_amplitudes<T: Real>(decomp: &SpectralDecomposition<T>, tau: T) -> EvolutionAmplitudes<T> {
    decomp
        .amplitudes_batch(std::slice::from_ref(&tau))
        .pop()
        .expect("one time point in, one out")
}

/// Coefficients of `|J, q⟩|M - q⟩` for `q = -J, -J+1, …, M` (in that order),
/// i.e. `exp(i(M - q)φ) · A_{M-q}(τ)`.
pub fn joint_state_amplitudes<T: Real>(
    state: &DickeInitialState<T>,
    decomp: &SpectralDecomposition<T>,
    tau: T,
) -> Vec<Complex<T>> {
    let amps = evolution_amplitudes(decomp, tau).amplitudes;
    let top = amps.len() - 1;
    (0..=top)
        .map(|i| {
            let n = top - i;
            let phase = Complex::from_polar(T::one(), T::from_count(n) * state.phi());
            phase * amps[n]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn decompose(two_j: i64, two_m: i64, delta: f64) -> SpectralDecomposition<f64> {
        let s = DickeInitialState::new(two_j, two_m, delta, 0.0).unwrap();
        spectral_decompose(&EffectiveHamiltonian::build(&s).unwrap()).unwrap()
    }

    #[test]
    fn single_atom_spectrum() {
        let dec = decompose(1, 1, 0.0);
        assert!((dec.eigenvalues()[0] + 1.0).abs() < 1e-15);
        assert!((dec.eigenvalues()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_atom_spectrum() {
        let dec = decompose(2, 0, 0.0);
        let r = 2f64.sqrt();
        assert!((dec.eigenvalues()[0] + r).abs() < 1e-15);
        assert!((dec.eigenvalues()[1] - r).abs() < 1e-15);
    }

    #[test]
    fn scalar_block() {
        let dec = decompose(10, -10, 3.0);
        assert_eq!(dec.eigenvalues(), &[-15.0]);
        assert_eq!(dec.entry(0, 0), 1.0);
        let a = evolution_amplitudes(&dec, 2.0);
        assert!((a.norm_squared() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_rabi_transfer() {
        let dec = decompose(1, 1, 0.0);
        let a = evolution_amplitudes(&dec, std::f64::consts::FRAC_PI_2);
        assert!((a.amplitudes[1].norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_at_zero() {
        let dec = decompose(30, 4, 2.0);
        let a = evolution_amplitudes(&dec, 0.0);
        assert!((a.amplitudes[0] - Complex::new(1.0, 0.0)).norm() < 1e-13);
        assert!(a.amplitudes[1..].iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn two_atom_oscillation() {
        let dec = decompose(2, 0, 0.0);
        for i in 0..50 {
            let tau = i as f64 * 0.13;
            let p1 = evolution_amplitudes(&dec, tau).amplitudes[1].norm_sqr();
            assert!((p1 - (2f64.sqrt() * tau).sin().powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn decomposition_invariants() {
        for (two_j, two_m, delta) in [(40, 0, 0.0), (100, 60, 10.0), (61, -31, 40.0), (300, 300, 0.0)] {
            let dec = decompose(two_j, two_m, delta);
            let d = dec.dimension() as f64;
            let lmax = dec.eigenvalues().iter().fold(0.0f64, |m, l| m.max(l.abs()));
            assert!(dec.orthogonality_defect() <= 1e-12 * d, "orthogonality");
            assert!(dec.reconstruction_defect() <= 1e-10 * lmax, "reconstruction");
            assert!(dec.eigenvalues().windows(2).all(|w| w[0] < w[1]));
            for k in 0..dec.dimension() {
                let first = dec.eigenvector(k).into_iter().find(|x| *x != 0.0).unwrap();
                assert!(first > 0.0);
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = decompose(200, 10, 3.0);
        let b = decompose(200, 10, 3.0);
        assert_eq!(a.eigenvalues(), b.eigenvalues());
        assert_eq!(a.vectors, b.vectors);
    }

    #[test]
    fn batch_matches_single() {
        let dec = decompose(80, 0, 5.0);
        let taus: Vec<f64> = (0..37).map(|i| i as f64 * 0.07).collect();
        for a in dec.amplitudes_batch(&taus) {
            assert_eq!(a, evolution_amplitudes(&dec, a.tau));
        }
    }

    #[test]
    fn f32_pipeline_is_usable() {
        let s = DickeInitialState::<f32>::new(20, 0, 1.0, 0.0).unwrap();
        let dec = spectral_decompose(&EffectiveHamiltonian::build(&s).unwrap()).unwrap();
        let a = evolution_amplitudes(&dec, 0.6);
        assert!((a.norm_squared() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn joint_state_phase() {
        let s = DickeInitialState::new(6, 2, 1.0, 0.0).unwrap();
        let dec = spectral_decompose(&EffectiveHamiltonian::build(&s).unwrap()).unwrap();
        let plain = evolution_amplitudes(&dec, 0.8).amplitudes;
        let zero = joint_state_amplitudes(&s, &dec, 0.8);
        let flipped = joint_state_amplitudes(&s.with_phi(std::f64::consts::PI), &dec, 0.8);
        let top = plain.len() - 1;
        for (i, (z, f)) in zero.iter().zip(&flipped).enumerate() {
            let n = top - i;
            assert_eq!(*z, plain[n]);
            let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            assert!((f - z * sign).norm() < 1e-14);
        }
    }

    /// Dense `exp(-iτH')` by Taylor series with scaling and squaring.
    fn dense_propagator(h: &EffectiveHamiltonian<f64>, tau: f64) -> Vec<Vec<Complex<f64>>> {
        let d = h.dimension();
        let m = h.to_dense();
        let scale = (h.norm_bound() * tau.abs()).max(1.0).log2().ceil() as i32 + 4;
        let step = tau / 2f64.powi(scale);
        let a: Vec<Vec<Complex<f64>>> = m
            .iter()
            .map(|row| row.iter().map(|&x| Complex::new(0.0, -step * x)).collect())
            .collect();
        let mul = |x: &Vec<Vec<Complex<f64>>>, y: &Vec<Vec<Complex<f64>>>| {
            (0..d)
                .map(|i| (0..d).map(|j| (0..d).map(|k| x[i][k] * y[k][j]).sum()).collect())
                .collect::<Vec<Vec<Complex<f64>>>>()
        };
        let mut result: Vec<Vec<Complex<f64>>> = (0..d)
            .map(|i| (0..d).map(|j| Complex::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        let mut term = result.clone();
        for k in 1..30 {
            term = mul(&term, &a);
            term.iter_mut().flatten().for_each(|z| *z /= k as f64);
            for i in 0..d {
                for j in 0..d {
                    result[i][j] += term[i][j];
                }
            }
        }
        for _ in 0..scale {
            result = mul(&result, &result);
        }
        result
    }

    #[test]
    fn group_property() {
        let s = DickeInitialState::new(16, 2, 3.0, 0.0).unwrap();
        let h = EffectiveHamiltonian::build(&s).unwrap();
        let dec = spectral_decompose(&h).unwrap();
        let (t1, t2) = (0.9, 1.7);
        let first = evolution_amplitudes(&dec, t1).amplitudes;
        let u = dense_propagator(&h, t2);
        let both = evolution_amplitudes(&dec, t1 + t2).amplitudes;
        for (n, target) in both.iter().enumerate() {
            let stepped: Complex<f64> = (0..first.len()).map(|k| u[n][k] * first[k]).sum();
            assert!((stepped - target).norm() < 1e-10);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn norm_is_conserved(n_atoms in 1i64..=200, frac in 0.0f64..=1.0, delta in 0.0f64..=40.0, tau in 0.0f64..=50.0) {
            let excited = ((n_atoms as f64) * frac).round() as i64;
            let s = DickeInitialState::from_excited_count(n_atoms, excited, delta).unwrap();
            let dec = spectral_decompose(&EffectiveHamiltonian::build(&s).unwrap()).unwrap();
            let a = evolution_amplitudes(&dec, tau);
            prop_assert!((a.norm_squared() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn phase_never_changes_moduli(phi in -10.0f64..10.0, tau in 0.0f64..5.0) {
            let s = DickeInitialState::new(12, 0, 2.0, phi).unwrap();
            let dec = spectral_decompose(&EffectiveHamiltonian::build(&s).unwrap()).unwrap();
            let plain = evolution_amplitudes(&dec, tau).amplitudes;
            let joint = joint_state_amplitudes(&s, &dec, tau);
            let top = plain.len() - 1;
            for (i, z) in joint.iter().enumerate() {
                prop_assert!((z.norm() - plain[top - i].norm()).abs() <= 1e-15);
            }
        }
    }
}
