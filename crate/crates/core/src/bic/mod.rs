//! Bound states in the continuum of the finite lattice.
//!
//! A lattice eigenstate is reported as a BIC when its energy lies inside the
//! photonic band, it carries atomic weight, and most of its probability sits
//! on the atoms and on the resonators around the coupling points.

mod density;

pub use density::{concurrence, reduce_to_atoms, AtomDensityMatrix, DENSITY_TOL, EE, EG, GE, GG};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{LatticeHamiltonian, SingleExcitationState, SpectrumResult};
use crate::markov::{EffectiveMatrix, DEFAULT_BIC_TOL};
use crate::model::Geometry;

/// Thresholds of the BIC test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BicCriteria {
    /// States must lie in `(band_lo + margin, band_hi - margin)`.
    pub band_margin: f64,
    /// Minimum `|alpha1|^2 + |alpha2|^2`.
    pub min_atomic_weight: f64,
    /// Sites of padding `W` around the outermost coupling points.
    pub localization_window: usize,
    /// Minimum probability on the atoms plus the sites of
    /// `[first - W, last + W]`.
    pub min_localized_fraction: f64,
    /// Eigenvalues closer than this are treated as one degenerate subspace.
    pub degeneracy_tol: f64,
}

impl Default for BicCriteria {
    fn default() -> Self {
        Self {
            band_margin: 1e-6,
            min_atomic_weight: 0.01,
            localization_window: 20,
            min_localized_fraction: 0.75,
            degeneracy_tol: 1e-9,
        }
    }
}

/// One bound state in the continuum.
#[derive(Debug, Clone, PartialEq)]
pub struct BicProfile {
    pub energy: f64,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    /// `|beta_j|^2` per site.
    pub beta_abs2: Vec<f64>,
    pub rho_atoms: AtomDensityMatrix,
    pub concurrence: f64,
    /// Probability on the atoms and inside the localization window.
    pub localized_fraction: f64,
    /// The full eigenvector, global phase fixed.
    pub state: SingleExcitationState,
}

impl BicProfile {
    pub fn atomic_weight(&self) -> f64 {
        self.alpha1.norm_sqr() + self.alpha2.norm_sqr()
    }

    pub fn photon_weight(&self) -> f64 {
        self.beta_abs2.iter().sum()
    }

    /// `||H v - E v||`.
    pub fn residual(&self, hamiltonian: &LatticeHamiltonian) -> f64 {
        let v = self.state.to_vector();
        let mut hv = vec![Complex64::new(0.0, 0.0); v.len()];
        hamiltonian.apply(v.as_slice(), &mut hv);
        hv.iter().zip(v.iter()).map(|(a, b)| (a - b * self.energy).norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `|beta_j|^2` of a BIC.
pub fn photon_profile(bic: &BicProfile) -> &[f64] {
    &bic.beta_abs2
}

/// Inclusive site range `[first - W, last + W]`, clipped to the lattice.
pub fn localization_range(geometry: &Geometry, window: usize) -> (usize, usize) {
    let lo = geometry.first_site().saturating_sub(window);
    let hi = (geometry.last_site() + window).min(geometry.n_sites() - 1);
    (lo, hi)
}

/// Sites between the second and third coupling point (`[m1, n2]` for a
/// braided pair), inclusive.
pub fn inner_region(geometry: &Geometry) -> (usize, usize) {
    let mut s = [geometry.n1(), geometry.n2(), geometry.m1(), geometry.m2()];
    s.sort_unstable();
    (s[1], s[2])
}

fn range_weight(v: &[Complex64], (lo, hi): (usize, usize)) -> f64 {
    v[2 + lo..=2 + hi].iter().map(|z| z.norm_sqr()).sum()
}

fn localized_fraction(v: &[Complex64], range: (usize, usize)) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr() + range_weight(v, range)
}

/// Localized fraction of eigenstate `n` of `spectrum`, with the window
/// padded by `window` sites.
pub fn eigenstate_localization(spectrum: &SpectrumResult, n: usize, window: usize) -> f64 {
    let range = localization_range(&spectrum.geometry, window);
    localized_fraction(spectrum.states.column(n).as_slice(), range)
}

/// Phase convention: `alpha1` real positive, or `alpha2` when `alpha1`
/// vanishes, or else the first nonzero site amplitude.
fn fix_phase(v: &mut [Complex64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(pivot) = v.iter().find(|z| z.norm() > 1e-8 * scale).copied() {
        let phase = pivot.conj() / pivot.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Candidate vectors for one cluster of (numerically) degenerate eigenstates,
/// rotated so that they extremize photon weight in the inner region. Each
/// comes with its Rayleigh energy.
fn rotated_cluster(spectrum: &SpectrumResult, members: &[usize]) -> Vec<(f64, Vec<Complex64>)> {
    let column = |n: usize| spectrum.states.column(n).as_slice().to_vec();
    if members.len() == 1 {
        let n = members[0];
        return vec![(spectrum.energies[n], column(n))];
    }
    let inner = inner_region(&spectrum.geometry);
    let vectors: Vec<Vec<Complex64>> = members.iter().map(|&n| column(n)).collect();
    let k = members.len();
    let overlap = DMatrix::from_fn(k, k, |i, j| {
        vectors[i][2 + inner.0..=2 + inner.1]
            .iter()
            .zip(&vectors[j][2 + inner.0..=2 + inner.1])
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
    });
    let eig = overlap.symmetric_eigen();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    order
        .into_iter()
        .map(|col| {
            let coeffs = eig.eigenvectors.column(col);
            let dim = vectors[0].len();
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            let mut energy = 0.0;
            for (i, c) in coeffs.iter().enumerate() {
                energy += c.norm_sqr() * spectrum.energies[members[i]];
                for (dst, src) in v.iter_mut().zip(&vectors[i]) {
                    *dst += c * src;
                }
            }
            (energy, v)
        })
        .collect()
}

/// Every eigenstate that lies inside the band, carries at least
/// `min_atomic_weight` on the atoms and is localized around the coupling
/// points; sorted by energy.
///
/// Degenerate eigenvalues are handled as a subspace: the basis is rotated to
/// extremize the photon weight between the inner coupling points before the
/// test is applied, so that degenerate BICs come out as distinct profiles.
pub fn find_bics(spectrum: &SpectrumResult, criteria: &BicCriteria) -> Result<Vec<BicProfile>> {
    let (band_lo, band_hi) = spectrum.params.band_edges();
    let inside = |e: f64| e > band_lo + criteria.band_margin && e < band_hi - criteria.band_margin;
    let window = localization_range(&spectrum.geometry, criteria.localization_window);

    let in_band: Vec<usize> = (0..spectrum.len()).filter(|&n| inside(spectrum.energies[n])).collect();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for n in in_band {
        match clusters.last_mut() {
            Some(c) if spectrum.energies[n] - spectrum.energies[*c.last().unwrap()] <= criteria.degeneracy_tol => c.push(n),
            _ => clusters.push(vec![n]),
        }
    }

    let mut out = Vec::new();
    for members in clusters {
        if members.iter().all(|&n| spectrum.atomic_weight(n) < criteria.min_atomic_weight) {
            continue;
        }
        for (energy, mut v) in rotated_cluster(spectrum, &members) {
            let atomic = v[0].norm_sqr() + v[1].norm_sqr();
            let localized = localized_fraction(&v, window);
            if atomic < criteria.min_atomic_weight || localized < criteria.min_localized_fraction {
                continue;
            }
            fix_phase(&mut v);
            let state = SingleExcitationState::from_slice(&v)?;
            let rho_atoms = reduce_to_atoms(&state)?;
            let conc = concurrence(&rho_atoms)?;
            out.push(BicProfile {
                energy,
                alpha1: state.alpha1,
                alpha2: state.alpha2,
                beta_abs2: state.beta_abs2(),
                rho_atoms,
                concurrence: conc,
                localized_fraction: localized,
                state,
            });
        }
    }
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(out)
}

/// Lattice BIC energy against the nearest real eigenvalue of the effective
/// matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyCheck {
    pub lattice_energy: f64,
    /// Real part of the closest eigenvalue with `|Im| < DEFAULT_BIC_TOL`.
    pub markov_energy: Option<f64>,
    pub deviation: Option<f64>,
}

pub fn bic_energy_check(bic: &BicProfile, markov: &EffectiveMatrix) -> EnergyCheck {
    let markov_energy = crate::markov::eigen2(markov)
        .values()
        .into_iter()
        .filter(|e| e.im.abs() < DEFAULT_BIC_TOL)
        .map(|e| e.re)
        .min_by(|a, b| (a - bic.energy).abs().total_cmp(&(b - bic.energy).abs()));
    EnergyCheck {
        lattice_energy: bic.energy,
        markov_energy,
        deviation: markov_energy.map(|e| (e - bic.energy).abs()),
    }
}
