//! Full single-excitation lattice model.
//!
//! The basis is ordered `[atom 1, atom 2, site 0, ..., site N_c - 1]` in every
//! vector, matrix and serialized output. The resonator chain has open ends.

mod chebyshev;
mod hamiltonian;
mod propagate;
mod rk4;
mod spectrum;
mod state;

pub use chebyshev::{bessel_j_sequence, propagate_chebyshev};
pub use hamiltonian::{assemble_hamiltonian, site_index, LatticeHamiltonian, ATOM1, ATOM2};
pub use propagate::{check_light_cone, evolve_state, propagate, LightConeWarning, Trajectory};
pub use rk4::{integrate_rk4, rhs_amplitude_equations};
pub use spectrum::{diagonalize, SpectrumResult, DENSE_SITE_LIMIT};
pub use state::SingleExcitationState;

use crate::error::{Error, Result};

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if let Some(t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Error::InvalidTimes(format!("negative or non-finite time {t}")));
    }
    if let Some(k) = times.windows(2).position(|w| w[1] < w[0]) {
        return Err(Error::InvalidTimes(format!("times not sorted at index {}", k + 1)));
    }
    Ok(())
}
