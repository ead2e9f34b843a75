use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{LatticeHamiltonian, SingleExcitationState};
use crate::error::{Error, Result};
use crate::model::{Geometry, ModelParams};

/// Largest lattice accepted by the dense eigensolver.
pub const DENSE_SITE_LIMIT: usize = 2000;

/// Full eigen-decomposition of a lattice Hamiltonian.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Ascending.
    pub energies: Vec<f64>,
    /// Orthonormal eigenvectors, one per column, in the order of `energies`.
    pub states: DMatrix<Complex64>,
    pub params: ModelParams,
    pub geometry: Geometry,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn state(&self, n: usize) -> SingleExcitationState {
        SingleExcitationState::from_slice(self.states.column(n).as_slice())
            .expect("lattice eigenvectors carry both atomic entries")
    }

    /// `|alpha1|^2 + |alpha2|^2` of eigenvector `n`.
    pub fn atomic_weight(&self, n: usize) -> f64 {
        self.states[(0, n)].norm_sqr() + self.states[(1, n)].norm_sqr()
    }

    /// `||H v_n - E_n v_n||`.
    pub fn residual(&self, hamiltonian: &LatticeHamiltonian, n: usize) -> f64 {
        let v = self.states.column(n);
        let mut hv = vec![Complex64::new(0.0, 0.0); v.len()];
        hamiltonian.apply(v.as_slice(), &mut hv);
        hv.iter()
            .zip(v.iter())
            .map(|(a, b)| (a - b * self.energies[n]).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Dense Hermitian eigen-decomposition (Householder tridiagonalization plus
/// implicit QR). Deterministic for a given build and input.
pub fn diagonalize(hamiltonian: &LatticeHamiltonian) -> Result<SpectrumResult> {
    let n_sites = hamiltonian.geometry().n_sites();
    if n_sites > DENSE_SITE_LIMIT {
        return Err(Error::DenseCapExceeded { n_sites, limit: DENSE_SITE_LIMIT });
    }
    let dim = hamiltonian.dimension();
    let eigen = hamiltonian
        .to_dense()
        .try_symmetric_eigen(f64::EPSILON, 1000 * dim)
        .ok_or(Error::NoConvergence(dim))?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));
    let energies = order.iter().map(|&k| eigen.eigenvalues[k]).collect();
    let states = DMatrix::from_fn(dim, dim, |i, j| eigen.eigenvectors[(i, order[j])]);
    Ok(SpectrumResult {
        energies,
        states,
        params: *hamiltonian.params(),
        geometry: *hamiltonian.geometry(),
    })
}
