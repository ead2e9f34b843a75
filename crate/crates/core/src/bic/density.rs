//! Reduced two-atom states and Wootters concurrence.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::SingleExcitationState;

/// Tolerance used when checking density-matrix invariants.
pub const DENSITY_TOL: f64 = 1e-12;

/// Index of `|gg>`, `|ge>`, `|eg>`, `|ee>`; `|ge>` has atom 1 in the ground
/// state and atom 2 excited.
pub const GG: usize = 0;
pub const GE: usize = 1;
pub const EG: usize = 2;
pub const EE: usize = 3;

/// Two-atom density matrix in the basis `{|gg>, |ge>, |eg>, |ee>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomDensityMatrix(pub Matrix4<Complex64>);

impl AtomDensityMatrix {
    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    /// Real and imaginary parts as nested row-major arrays.
    pub fn to_re_im(&self) -> ([[f64; 4]; 4], [[f64; 4]; 4]) {
        let mut re = [[0.0; 4]; 4];
        let mut im = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                re[i][j] = self.0[(i, j)].re;
                im[i][j] = self.0[(i, j)].im;
            }
        }
        (re, im)
    }

    pub fn ground_population(&self) -> f64 {
        self.0[(GG, GG)].re
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Checks Hermiticity, unit trace and positivity within [`DENSITY_TOL`].
    pub fn validate(&self) -> Result<()> {
        let herm = (self.0 - self.0.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let lowest = self.0.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        if lowest < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(())
    }
}

/// Traces out the photons: `rho = p_g |gg><gg| + |chi><chi|` with
/// `|chi> = alpha2 |ge> + alpha1 |eg>` and `p_g` the photon weight.
pub fn reduce_to_atoms(state: &SingleExcitationState) -> Result<AtomDensityMatrix> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }
    let mut rho = Matrix4::from_element(Complex64::new(0.0, 0.0));
    // p_g from the complement keeps the trace exact for normalized input
    rho[(GG, GG)] = Complex64::new(state.photon_weight(), 0.0);
    let chi = [(GE, state.alpha2), (EG, state.alpha1)];
    for (i, a) in chi {
        for (j, b) in chi {
            rho[(i, j)] = a * b.conj();
        }
    }
    Ok(AtomDensityMatrix(rho))
}

#[rustfmt::skip]
fn sigma_yy() -> Matrix4<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Matrix4::new(
        zero, zero, zero, -one,
        zero, zero, one, zero,
        zero, one, zero, zero,
        -one, zero, zero, zero,
    )
}

/// Principal square root of a positive semidefinite matrix. Eigenvalues at
/// rounding level are set to zero so that their noise is not amplified.
fn psd_sqrt(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let eig = m.symmetric_eigen();
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let floor = 16.0 * f64::EPSILON * top;
    let roots = eig.eigenvalues.map(|e| Complex64::new(if e > floor { e.sqrt() } else { 0.0 }, 0.0));
    eig.eigenvectors * Matrix4::from_diagonal(&roots) * eig.eigenvectors.adjoint()
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)`, with `l_i` the
/// descending square roots of the eigenvalues of `rho (Y x Y) rho* (Y x Y)`.
///
/// The `l_i` are computed directly as the singular values of
/// `sqrt(rho) (Y x Y) sqrt(rho)*`, which avoids a second square root.
pub fn concurrence(rho: &AtomDensityMatrix) -> Result<f64> {
    rho.validate()?;
    let s = psd_sqrt(&rho.0);
    let a = s * sigma_yy() * s.map(|z| z.conj());
    let mut l: Vec<f64> = a.singular_values().iter().cloned().collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}
