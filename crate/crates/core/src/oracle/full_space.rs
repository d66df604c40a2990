//! Brute-force Tavis-Cummings evolution in the uncoupled product basis.
//!
//! Basis states are `|s⟩ ⊗ |n⟩` where bit `a` of the spin configuration `s`
//! is set when atom `a` is excited, and `n < fock_cutoff` photons. Nothing
//! here uses the collective `|J, M⟩` basis or the tridiagonal reduction.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statistics::PhotonDistribution;

pub const MAX_ATOMS: usize = 4;

/// Interaction Hamiltonian `δ J^z + e^{-iφ} a J⁺ + e^{iφ} a† J⁻` (units of
/// `|g|`) on `2^N × fock_cutoff` states, with its eigendecomposition.
#[derive(Debug, Clone)]
pub struct FullSpaceModel {
    n_atoms: usize,
    fock_cutoff: usize,
    hamiltonian: DMatrix<Complex64>,
    eigen: SymmetricEigen<Complex64, nalgebra::Dyn>,
}

impl FullSpaceModel {
    /// `fock_cutoff` counts photon levels `0..fock_cutoff` and must be at
    /// least `n_atoms + 1`; with that many levels the truncation is exact.
    pub fn new(n_atoms: usize, fock_cutoff: usize, delta: f64, phi: f64) -> Result<Self> {
        if n_atoms > MAX_ATOMS {
            return Err(Error::Dimension(n_atoms));
        }
        if n_atoms == 0 {
            return Err(Error::Range("need at least one atom".into()));
        }
        if fock_cutoff < n_atoms + 1 {
            return Err(Error::Range(format!(
                "fock cutoff {fock_cutoff} below n_atoms + 1 = {}",
                n_atoms + 1
            )));
        }

        let configs = 1usize << n_atoms;
        let dim = configs * fock_cutoff;
        let index = |s: usize, n: usize| s * fock_cutoff + n;
        let lower = Complex64::from_polar(1.0, phi);
        let raise = lower.conj();

        let mut h = DMatrix::<Complex64>::zeros(dim, dim);
        for s in 0..configs {
            let jz = s.count_ones() as f64 - n_atoms as f64 / 2.0;
            for n in 0..fock_cutoff {
                let col = index(s, n);
                h[(col, col)] += Complex64::new(delta * jz, 0.0);
                for a in 0..n_atoms {
                    let bit = 1 << a;
                    if s & bit == 0 && n > 0 {
                        // a σ⁺: absorb a photon, excite atom a.
                        h[(index(s | bit, n - 1), col)] += raise * (n as f64).sqrt();
                    }
                    if s & bit != 0 && n + 1 < fock_cutoff {
                        // a† σ⁻: emit a photon, de-excite atom a.
                        h[(index(s & !bit, n + 1), col)] += lower * ((n + 1) as f64).sqrt();
                    }
                }
            }
        }

        let eigen = h.clone().symmetric_eigen();
        Ok(Self { n_atoms, fock_cutoff, hamiltonian: h, eigen })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    pub fn dimension(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &DMatrix<Complex64> {
        &self.hamiltonian
    }

    /// Total excitations (excited atoms plus photons) of a basis state.
    pub fn excitation_number(&self, index: usize) -> usize {
        (index / self.fock_cutoff).count_ones() as usize + index % self.fock_cutoff
    }

    /// `max |H - H†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let h = &self.hamiltonian;
        (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |[H, N_exc]|` entrywise.
    pub fn excitation_commutator_defect(&self) -> f64 {
        let dim = self.dimension();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                let diff = self.excitation_number(r).abs_diff(self.excitation_number(c)) as f64;
                worst = worst.max(self.hamiltonian[(r, c)].norm() * diff);
            }
        }
        worst
    }

    /// Symmetric Dicke state with `excited` atoms up, photon vacuum.
    pub fn dicke_state(&self, excited: usize) -> Result<DVector<Complex64>> {
        if excited > self.n_atoms {
            return Err(Error::Range(format!("excited {excited} > {} atoms", self.n_atoms)));
        }
        let configs: Vec<usize> = (0..1usize << self.n_atoms)
            .filter(|s| s.count_ones() as usize == excited)
            .collect();
        let amp = Complex64::new(1.0 / (configs.len() as f64).sqrt(), 0.0);
        let mut psi = DVector::zeros(self.dimension());
        for s in configs {
            psi[s * self.fock_cutoff] = amp;
        }
        Ok(psi)
    }

    /// Two-atom singlet `(|ge⟩ - |eg⟩)/√2` with photon vacuum.
    pub fn singlet_state(&self) -> Result<DVector<Complex64>> {
        if self.n_atoms != 2 {
            return Err(Error::Range("the singlet needs exactly two atoms".into()));
        }
        let mut psi = DVector::zeros(self.dimension());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // Spin configurations 0b01 and 0b10.
        psi[self.fock_cutoff] = Complex64::new(r, 0.0);
        psi[2 * self.fock_cutoff] = Complex64::new(-r, 0.0);
        Ok(psi)
    }

    /// `exp(-iτH) ψ`.
    pub fn evolve(&self, psi: &DVector<Complex64>, tau: f64) -> DVector<Complex64> {
        let w = &self.eigen.eigenvectors;
        let mut coeffs = w.adjoint() * psi;
        for (c, &lam) in coeffs.iter_mut().zip(self.eigen.eigenvalues.iter()) {
            *c *= Complex64::from_polar(1.0, -tau * lam);
        }
        w * coeffs
    }

    /// Photon-number marginal after tracing out the atoms.
    pub fn photon_marginal(&self, psi: &DVector<Complex64>, tau: f64) -> PhotonDistribution<f64> {
        let mut p = vec![0.0; self.fock_cutoff];
        for (i, z) in psi.iter().enumerate() {
            p[i % self.fock_cutoff] += z.norm_sqr();
        }
        PhotonDistribution::from_probabilities(tau, p)
    }

    pub fn distribution(&self, psi0: &DVector<Complex64>, tau: f64) -> PhotonDistribution<f64> {
        self.photon_marginal(&self.evolve(psi0, tau), tau)
    }

    /// `⟨N_exc⟩` in state `psi`.
    pub fn mean_excitation(&self, psi: &DVector<Complex64>) -> f64 {
        psi.iter()
            .enumerate()
            .map(|(i, z)| z.norm_sqr() * self.excitation_number(i) as f64)
            .sum()
    }
}

/// Photon distribution from the symmetric Dicke state of `n_atoms` atoms with
/// `excited` of them up, evolved by brute force. The result has one entry per
/// retained photon level (`n_atoms + 2` of them), not `J + M + 1`.
pub fn brute_force_distribution(n_atoms: usize, excited: usize, delta: f64, tau: f64) -> Result<PhotonDistribution<f64>> {
    let model = FullSpaceModel::new(n_atoms, n_atoms + 2, delta, 0.0)?;
    let psi0 = model.dicke_state(excited)?;
    Ok(model.distribution(&psi0, tau))
}

/// Same, starting from the two-atom singlet (a `j = 0` dark state).
pub fn brute_force_singlet_distribution(delta: f64, tau: f64) -> Result<PhotonDistribution<f64>> {
    let model = FullSpaceModel::new(2, 4, delta, 0.0)?;
    let psi0 = model.singlet_state()?;
    Ok(model.distribution(&psi0, tau))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structural_invariants() {
        for n in 1..=4 {
            let m = FullSpaceModel::new(n, n + 2, 1.7, 0.4).unwrap();
            assert_eq!(m.dimension(), (1 << n) * (n + 2));
            assert!(m.hermiticity_defect() < 1e-14);
            assert!(m.excitation_commutator_defect() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(FullSpaceModel::new(5, 7, 0.0, 0.0).unwrap_err(), Error::Dimension(5));
        assert!(matches!(FullSpaceModel::new(3, 3, 0.0, 0.0), Err(Error::Range(_))));
        assert!(matches!(brute_force_distribution(2, 3, 0.0, 0.0), Err(Error::Range(_))));
        assert!(matches!(brute_force_distribution(6, 3, 0.0, 0.0), Err(Error::Dimension(6))));
    }

    #[test]
    fn single_atom_rabi() {
        let p = brute_force_distribution(1, 1, 0.0, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((p.probabilities[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singlet_is_dark() {
        for tau in [0.0, 0.3, 1.1, 2.9, 10.0] {
            for delta in [0.0, 1.0, 10.0] {
                let p = brute_force_singlet_distribution(delta, tau).unwrap();
                assert!((p.probabilities[0] - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn evolution_conserves_norm_and_excitations() {
        let m = FullSpaceModel::new(4, 6, 2.0, 0.9).unwrap();
        let psi0 = m.dicke_state(3).unwrap();
        let e0 = m.mean_excitation(&psi0);
        for tau in [0.1, 0.7, 2.5] {
            let psi = m.evolve(&psi0, tau);
            assert!((psi.norm() - 1.0).abs() < 1e-12);
            assert!((m.mean_excitation(&psi) - e0).abs() < 1e-12);
        }
    }

    #[test]
    fn cutoff_is_exact() {
        for n in 1..=4 {
            for e in 0..=n {
                let small = FullSpaceModel::new(n, n + 1, 1.0, 0.0).unwrap();
                let big = FullSpaceModel::new(n, n + 3, 1.0, 0.0).unwrap();
                let a = small.distribution(&small.dicke_state(e).unwrap(), 1.3);
                let b = big.distribution(&big.dicke_state(e).unwrap(), 1.3);
                assert!(a.max_abs_difference(&b) <= 1e-13);
            }
        }
    }

    #[test]
    fn phase_independent_marginal() {
        let plain = FullSpaceModel::new(3, 5, 1.0, 0.0).unwrap();
        let phased = FullSpaceModel::new(3, 5, 1.0, 1.3).unwrap();
        for e in 0..=3 {
            let a = plain.distribution(&plain.dicke_state(e).unwrap(), 0.77);
            let b = phased.distribution(&phased.dicke_state(e).unwrap(), 0.77);
            assert!(a.max_abs_difference(&b) <= 1e-12);
        }
    }
}
