use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::model::{validate, Geometry, ModelParams};

pub const ATOM1: usize = 0;
pub const ATOM2: usize = 1;

/// Basis index of resonator site `j`.
pub const fn site_index(j: usize) -> usize {
    2 + j
}

/// Single-excitation Hamiltonian of the atoms plus an open resonator chain.
///
/// Stored structurally; [`LatticeHamiltonian::to_dense`] materializes the
/// Hermitian matrix and [`LatticeHamiltonian::apply`] is the sparse product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeHamiltonian {
    params: ModelParams,
    geometry: Geometry,
}

pub fn assemble_hamiltonian(params: &ModelParams, geometry: &Geometry) -> Result<LatticeHamiltonian> {
    let v = validate(params, geometry)?;
    Ok(LatticeHamiltonian { params: v.params, geometry: v.geometry })
}

impl LatticeHamiltonian {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn dimension(&self) -> usize {
        self.geometry.n_sites() + 2
    }

    fn exchange(&self) -> Complex64 {
        Complex64::from_polar(self.params.lambda, self.params.phi)
    }

    /// Matrix element `<i|H|j>`.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        let p = &self.params;
        let sites = self.geometry.atom_sites();
        match (i, j) {
            (ATOM1, ATOM1) | (ATOM2, ATOM2) => Complex64::new(p.omega_a, 0.0),
            (ATOM1, ATOM2) => self.exchange(),
            (ATOM2, ATOM1) => self.exchange().conj(),
            (a, s) | (s, a) if a < 2 && s >= 2 => {
                if sites[a].contains(&(s - 2)) {
                    Complex64::new(p.g, 0.0)
                } else {
                    zero
                }
            }
            _ if i == j => Complex64::new(p.omega_c, 0.0),
            _ if i.abs_diff(j) == 1 => Complex64::new(-p.xi, 0.0),
            _ => zero,
        }
    }

    /// Dense Hermitian matrix; every off-diagonal pair is written once.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = self.dimension();
        let p = &self.params;
        let mut h = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        let mut pair = |i: usize, j: usize, v: Complex64| {
            h[(i, j)] = v;
            h[(j, i)] = v.conj();
        };
        pair(ATOM1, ATOM1, Complex64::new(p.omega_a, 0.0));
        pair(ATOM2, ATOM2, Complex64::new(p.omega_a, 0.0));
        pair(ATOM1, ATOM2, self.exchange());
        for (atom, sites) in self.geometry.atom_sites().into_iter().enumerate() {
            for s in sites {
                pair(atom, site_index(s), Complex64::new(p.g, 0.0));
            }
        }
        let n = self.geometry.n_sites();
        for j in 0..n {
            pair(site_index(j), site_index(j), Complex64::new(p.omega_c, 0.0));
            if j + 1 < n {
                pair(site_index(j), site_index(j + 1), Complex64::new(-p.xi, 0.0));
            }
        }
        h
    }

    /// `out = H x`.
    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let p = &self.params;
        let n = self.geometry.n_sites();
        debug_assert_eq!(x.len(), n + 2);
        debug_assert_eq!(out.len(), n + 2);
        let ex = self.exchange();
        let [s1, s2] = self.geometry.atom_sites();
        let g = p.g;

        out[ATOM1] = p.omega_a * x[ATOM1] + ex * x[ATOM2] + g * (x[site_index(s1[0])] + x[site_index(s1[1])]);
        out[ATOM2] = p.omega_a * x[ATOM2] + ex.conj() * x[ATOM1] + g * (x[site_index(s2[0])] + x[site_index(s2[1])]);

        let beta = &x[2..];
        let dst = &mut out[2..];
        for j in 0..n {
            let mut acc = p.omega_c * beta[j];
            if j > 0 {
                acc -= p.xi * beta[j - 1];
            }
            if j + 1 < n {
                acc -= p.xi * beta[j + 1];
            }
            dst[j] = acc;
        }
        for s in s1 {
            dst[s] += g * x[ATOM1];
        }
        for s in s2 {
            dst[s] += g * x[ATOM2];
        }
    }

    /// Gershgorin enclosure `(lo, hi)` of the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let p = &self.params;
        let atom_radius = p.lambda + 2.0 * p.g;
        let site_radius = 2.0 * p.xi + p.g;
        let lo = (p.omega_a - atom_radius).min(p.omega_c - site_radius);
        let hi = (p.omega_a + atom_radius).max(p.omega_c + site_radius);
        (lo, hi)
    }
}
