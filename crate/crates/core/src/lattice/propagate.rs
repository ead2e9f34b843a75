use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_times, SingleExcitationState, SpectrumResult};
use crate::error::{Error, Result};
use crate::model::{Geometry, ModelParams};

/// Emitted light reaches a lattice boundary within the requested window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightConeWarning {
    /// `2 xi t_max`, in sites.
    pub reach: f64,
    /// Sites between the outermost coupling point and the nearer boundary.
    pub boundary_distance: usize,
}

impl std::fmt::Display for LightConeWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "light cone reaches {:.1} sites but the boundary is {} sites from the outermost coupling point",
            self.reach, self.boundary_distance
        )
    }
}

/// `Some` when `2 xi t_max` exceeds the distance to the boundary.
pub fn check_light_cone(params: &ModelParams, geometry: &Geometry, t_max: f64) -> Option<LightConeWarning> {
    let reach = 2.0 * params.xi * t_max;
    let boundary_distance = geometry.boundary_distance();
    (reach > boundary_distance as f64).then_some(LightConeWarning { reach, boundary_distance })
}

/// Populations along a lattice trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub pop1: Vec<f64>,
    pub pop2: Vec<f64>,
    pub photon_total: Vec<f64>,
    pub light_cone: Option<LightConeWarning>,
}

impl Trajectory {
    pub(crate) fn with_capacity(n: usize) -> Self {
        Self {
            times: Vec::with_capacity(n),
            pop1: Vec::with_capacity(n),
            pop2: Vec::with_capacity(n),
            photon_total: Vec::with_capacity(n),
            light_cone: None,
        }
    }

    pub(crate) fn record(&mut self, t: f64, psi: &[Complex64]) {
        self.times.push(t);
        self.pop1.push(psi[0].norm_sqr());
        self.pop2.push(psi[1].norm_sqr());
        self.photon_total.push(psi[2..].iter().map(|b| b.norm_sqr()).sum());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `pop1 + pop2 + photon_total` at sample `k`.
    pub fn total(&self, k: usize) -> f64 {
        self.pop1[k] + self.pop2[k] + self.photon_total[k]
    }
}

fn initial_vector(spectrum: &SpectrumResult, initial: &SingleExcitationState) -> Result<DVector<Complex64>> {
    if initial.dimension() != spectrum.len() {
        return Err(Error::DimensionMismatch { expected: spectrum.len(), got: initial.dimension() });
    }
    initial.require_normalized(1e-10)?;
    Ok(initial.to_vector())
}

struct Expansion<'a> {
    spectrum: &'a SpectrumResult,
    coefficients: DVector<Complex64>,
}

impl<'a> Expansion<'a> {
    fn new(spectrum: &'a SpectrumResult, psi0: &DVector<Complex64>) -> Self {
        Self { spectrum, coefficients: spectrum.states.ad_mul(psi0) }
    }

    fn at(&self, t: f64) -> DVector<Complex64> {
        let phased = DVector::from_iterator(
            self.coefficients.len(),
            self.coefficients
                .iter()
                .zip(&self.spectrum.energies)
                .map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t)),
        );
        &self.spectrum.states * phased
    }
}

/// `psi(t) = sum_n exp(-i E_n t) <n|psi(0)> |n>`.
pub fn evolve_state(spectrum: &SpectrumResult, initial: &SingleExcitationState, t: f64) -> Result<SingleExcitationState> {
    let psi0 = initial_vector(spectrum, initial)?;
    if t == 0.0 {
        return Ok(initial.clone());
    }
    SingleExcitationState::from_slice(Expansion::new(spectrum, &psi0).at(t).as_slice())
}

/// Exact spectral propagation of `initial` to each of `times`.
///
/// The returned trajectory carries a [`LightConeWarning`] when light emitted
/// at the coupling points can reach the boundary before the last time.
pub fn propagate(spectrum: &SpectrumResult, initial: &SingleExcitationState, times: &[f64]) -> Result<Trajectory> {
    check_times(times)?;
    let psi0 = initial_vector(spectrum, initial)?;
    let expansion = Expansion::new(spectrum, &psi0);
    let mut out = Trajectory::with_capacity(times.len());
    for &t in times {
        if t == 0.0 {
            out.record(t, psi0.as_slice());
        } else {
            out.record(t, expansion.at(t).as_slice());
        }
    }
    if let Some(&t_max) = times.last() {
        out.light_cone = check_light_cone(&spectrum.params, &spectrum.geometry, t_max);
    }
    Ok(out)
}
