//! Chebyshev expansion of `exp(-iHt)` using only sparse products, for
//! lattices beyond the dense eigensolver limit.

use num_complex::Complex64;

use super::{check_light_cone, check_times, LatticeHamiltonian, SingleExcitationState, Trajectory};
use crate::error::{Error, Result};

/// Largest `a dt` (spectral half-width times step) per expansion.
const MAX_ARGUMENT: f64 = 20.0;
/// Terms with `|J_k| below this are dropped.
const BESSEL_CUTOFF: f64 = 1e-18;

/// `J_0(x), ..., J_kmax(x)` for `x >= 0` by Miller's backward recurrence,
/// normalized with `J_0 + 2 sum J_2k = 1`.
pub fn bessel_j_sequence(x: f64, kmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let top = kmax.max(x.ceil() as usize);
    let mut start = top + 20 + (40.0 * top as f64).sqrt() as usize;
    start += start % 2;

    let mut next = 0.0; // J_{k+1}
    let mut current = 1e-300; // J_k
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * current - next;
        next = current;
        current = prev;
        // `current` is now J_{k-1}
        if k - 1 <= kmax {
            out[k - 1] = current;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * current;
        }
        if current.abs() > 1e250 {
            let s = 1e-250;
            current *= s;
            next *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    norm += current;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

struct Stepper<'a> {
    h: &'a LatticeHamiltonian,
    center: f64,
    half_width: f64,
    work: [Vec<Complex64>; 3],
    acc: Vec<Complex64>,
}

impl<'a> Stepper<'a> {
    fn new(h: &'a LatticeHamiltonian) -> Self {
        let (lo, hi) = h.spectral_bounds();
        let dim = h.dimension();
        let zero = vec![Complex64::new(0.0, 0.0); dim];
        Self {
            h,
            center: 0.5 * (lo + hi),
            half_width: 0.5 * (hi - lo) * 1.01 + 1e-12,
            work: [zero.clone(), zero.clone(), zero.clone()],
            acc: zero,
        }
    }

    /// `out = (H - center) / half_width * x`.
    fn scaled_apply(h: &LatticeHamiltonian, center: f64, half_width: f64, x: &[Complex64], out: &mut [Complex64]) {
        h.apply(x, out);
        for (o, xi) in out.iter_mut().zip(x) {
            *o = (*o - center * xi) / half_width;
        }
    }

    /// Advances `psi` in place by `dt <= MAX_ARGUMENT / half_width`.
    fn step(&mut self, psi: &mut [Complex64], dt: f64) {
        let x = self.half_width * dt;
        let kmax = (x + 10.0 * x.cbrt() + 30.0).ceil() as usize;
        let bessel = bessel_j_sequence(x, kmax);
        let n_terms = bessel.iter().rposition(|j| j.abs() > BESSEL_CUTOFF).map_or(1, |k| k + 1);

        let [t0, t1, t2] = &mut self.work;
        t0.copy_from_slice(psi);
        for (a, p) in self.acc.iter_mut().zip(psi.iter()) {
            *a = bessel[0] * p;
        }
        if n_terms > 1 {
            Self::scaled_apply(self.h, self.center, self.half_width, t0, t1);
            let c = Complex64::new(0.0, -2.0 * bessel[1]);
            for (a, v) in self.acc.iter_mut().zip(t1.iter()) {
                *a += c * v;
            }
        }
        let mut phase = Complex64::new(0.0, -1.0);
        for k in 2..n_terms {
            // t2 = 2 H~ t1 - t0
            Self::scaled_apply(self.h, self.center, self.half_width, t1, t2);
            for (v, old) in t2.iter_mut().zip(t0.iter()) {
                *v = 2.0 * *v - old;
            }
            phase *= Complex64::new(0.0, -1.0);
            let c = 2.0 * bessel[k] * phase;
            for (a, v) in self.acc.iter_mut().zip(t2.iter()) {
                *a += c * v;
            }
            std::mem::swap(t0, t1);
            std::mem::swap(t1, t2);
        }
        let global = Complex64::from_polar(1.0, -self.center * dt);
        for (p, a) in psi.iter_mut().zip(&self.acc) {
            *p = global * a;
        }
    }

    fn advance(&mut self, psi: &mut [Complex64], dt: f64) {
        if dt <= 0.0 {
            return;
        }
        let max_dt = MAX_ARGUMENT / self.half_width;
        let n = (dt / max_dt).ceil().max(1.0) as usize;
        let sub = dt / n as f64;
        for _ in 0..n {
            self.step(psi, sub);
        }
    }
}

/// Propagates `initial` by repeated Chebyshev steps between output times.
/// Accurate to near machine precision and limited only by memory, not by
/// [`super::DENSE_SITE_LIMIT`].
pub fn propagate_chebyshev(
    hamiltonian: &LatticeHamiltonian,
    initial: &SingleExcitationState,
    times: &[f64],
) -> Result<Trajectory> {
    check_times(times)?;
    if initial.dimension() != hamiltonian.dimension() {
        return Err(Error::DimensionMismatch { expected: hamiltonian.dimension(), got: initial.dimension() });
    }
    initial.require_normalized(1e-10)?;

    let mut psi: Vec<Complex64> = initial.to_vector().as_slice().to_vec();
    let mut stepper = Stepper::new(hamiltonian);
    let mut out = Trajectory::with_capacity(times.len());
    let mut now = 0.0;
    for &t in times {
        stepper.advance(&mut psi, t - now);
        now = t;
        out.record(t, &psi);
    }
    if let Some(&t_max) = times.last() {
        out.light_cone = check_light_cone(hamiltonian.params(), hamiltonian.geometry(), t_max);
    }
    Ok(out)
}
