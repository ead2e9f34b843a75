use num_complex::Complex64;

use super::{assemble_hamiltonian, LatticeHamiltonian, SingleExcitationState};
use crate::error::Result;
use crate::model::{Geometry, ModelParams};

/// Time derivative `-i H psi` of the amplitude equations in real space.
pub fn rhs_amplitude_equations(
    state: &SingleExcitationState,
    params: &ModelParams,
    geometry: &Geometry,
) -> Result<SingleExcitationState> {
    let h = assemble_hamiltonian(params, geometry)?;
    let x = state.to_vector();
    let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
    derivative(&h, x.as_slice(), &mut out);
    SingleExcitationState::from_slice(&out)
}

fn derivative(h: &LatticeHamiltonian, x: &[Complex64], out: &mut [Complex64]) {
    h.apply(x, out);
    for v in out.iter_mut() {
        *v *= Complex64::new(0.0, -1.0);
    }
}

/// Classical fourth-order Runge-Kutta with fixed step `dt` up to `t_end`
/// (a final shorter step lands exactly on `t_end`). Kept as an independent
/// cross-check of the spectral propagator.
pub fn integrate_rk4(
    hamiltonian: &LatticeHamiltonian,
    initial: &SingleExcitationState,
    dt: f64,
    t_end: f64,
) -> Result<SingleExcitationState> {
    let dim = hamiltonian.dimension();
    let mut y: Vec<Complex64> = initial.to_vector().as_slice().to_vec();
    let zero = vec![Complex64::new(0.0, 0.0); dim];
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero);
    let full = (t_end / dt + 1e-9).floor() as usize;
    let remainder = t_end - full as f64 * dt;
    let last = if remainder > 1e-9 * dt { Some(remainder) } else { None };
    for h in std::iter::repeat(dt).take(full).chain(last) {
        derivative(hamiltonian, &y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        derivative(hamiltonian, &tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        derivative(hamiltonian, &tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + h * k3[i];
        }
        derivative(hamiltonian, &tmp, &mut k4);
        for i in 0..dim {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    SingleExcitationState::from_slice(&y)
}
