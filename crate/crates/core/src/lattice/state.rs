use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Amplitudes of one single-excitation state: the two atoms, then one entry
/// per resonator site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleExcitationState {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub beta: Vec<Complex64>,
}

impl SingleExcitationState {
    /// `sigma_1^+ |G>`.
    pub fn atom1_excited(n_sites: usize) -> Self {
        Self::atomic(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), n_sites)
    }

    /// `sigma_2^+ |G>`.
    pub fn atom2_excited(n_sites: usize) -> Self {
        Self::atomic(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), n_sites)
    }

    /// Photonic vacuum with the given atomic amplitudes.
    pub fn atomic(alpha1: Complex64, alpha2: Complex64, n_sites: usize) -> Self {
        Self { alpha1, alpha2, beta: vec![Complex64::new(0.0, 0.0); n_sites] }
    }

    /// Splits a flat basis vector `[atom 1, atom 2, sites...]`.
    pub fn from_slice(v: &[Complex64]) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: v.len() });
        }
        Ok(Self { alpha1: v[0], alpha2: v[1], beta: v[2..].to_vec() })
    }

    pub fn to_vector(&self) -> DVector<Complex64> {
        let mut v = Vec::with_capacity(self.dimension());
        v.push(self.alpha1);
        v.push(self.alpha2);
        v.extend_from_slice(&self.beta);
        DVector::from_vec(v)
    }

    pub fn n_sites(&self) -> usize {
        self.beta.len()
    }

    pub fn dimension(&self) -> usize {
        self.beta.len() + 2
    }

    pub fn atomic_weight(&self) -> f64 {
        self.alpha1.norm_sqr() + self.alpha2.norm_sqr()
    }

    pub fn photon_weight(&self) -> f64 {
        self.beta.iter().map(|b| b.norm_sqr()).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.atomic_weight() + self.photon_weight()
    }

    /// `|beta_j|^2` per site.
    pub fn beta_abs2(&self) -> Vec<f64> {
        self.beta.iter().map(|b| b.norm_sqr()).collect()
    }

    pub(crate) fn require_normalized(&self, tol: f64) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > tol {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }
}
