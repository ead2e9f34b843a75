//! Markovian effective description of the two atoms.
//!
//! Eliminating the waveguide leaves a 2x2 non-Hermitian generator `M` for the
//! atomic amplitudes, `i d(alpha)/dt = M alpha`. At band-center resonance the
//! propagation phases between coupling points reduce to integer powers of the
//! imaginary unit, so the dissipative part of `M` is known exactly and a
//! vanishing imaginary part of an eigenvalue of `M` marks a bound state in the
//! continuum.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Geometry, ModelParams};

/// Default threshold on `|Im eps|` below which an eigenvalue counts as a BIC,
/// in units of `xi`.
pub const DEFAULT_BIC_TOL: f64 = 1e-9;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `i^n` for a non-negative integer exponent, by table lookup.
pub fn i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Interference sums entering the effective matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceKernel {
    pub s11: Complex64,
    pub s22: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
}

impl InterferenceKernel {
    pub fn is_zero(&self) -> bool {
        [self.s11, self.s22, self.s12, self.s21].iter().all(|s| *s == Complex64::new(0.0, 0.0))
    }
}

/// Sums of `i^|x - y|` over pairs of coupling points.
pub fn i_power_kernel(geometry: &Geometry) -> InterferenceKernel {
    let [atom1, atom2] = geometry.atom_sites();
    let cross = |a: [usize; 2], b: [usize; 2]| -> Complex64 {
        a.iter().flat_map(|&x| b.iter().map(move |&y| i_pow(x.abs_diff(y)))).sum()
    };
    InterferenceKernel {
        s11: 1.0 + i_pow(atom1[0].abs_diff(atom1[1])),
        s22: 1.0 + i_pow(atom2[0].abs_diff(atom2[1])),
        s12: cross(atom1, atom2),
        s21: cross(atom2, atom1),
    }
}

/// The effective generator `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl EffectiveMatrix {
    pub fn trace(&self) -> Complex64 {
        self.m11 + self.m22
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [self.m11 * v[0] + self.m12 * v[1], self.m21 * v[0] + self.m22 * v[1]]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        [self.m11, self.m12, self.m21, self.m22].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.m11.im.abs() <= tol
            && self.m22.im.abs() <= tol
            && (self.m12 - self.m21.conj()).norm() <= tol
    }

    fn shifted(&self, z: Complex64) -> Self {
        Self { m11: self.m11 - z, m22: self.m22 - z, ..*self }
    }
}

/// Builds `M` for the given parameters; assumes `omega_a` sits at the band
/// center (see [`crate::model::validate`]).
pub fn build_effective_matrix(params: &ModelParams, geometry: &Geometry) -> EffectiveMatrix {
    let kernel = i_power_kernel(geometry);
    let gamma = params.gamma();
    let omega = Complex64::new(params.omega_a, 0.0);
    let exchange = Complex64::from_polar(params.lambda, params.phi);
    EffectiveMatrix {
        m11: omega - I * gamma * kernel.s11,
        m22: omega - I * gamma * kernel.s22,
        m12: exchange - I * (gamma / 2.0) * kernel.s12,
        m21: exchange.conj() - I * (gamma / 2.0) * kernel.s21,
    }
}

/// An eigenvalue of `M` with a unit eigenvector whose first nonzero entry is
/// real and positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenPair2 {
    pub value: Complex64,
    pub vector: [Complex64; 2],
}

/// Both eigenpairs of `M`. At an exceptional point the matrix is defective:
/// the single eigenvector is returned twice and `defective` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigen2 {
    pub pairs: [EigenPair2; 2],
    pub defective: bool,
}

impl Eigen2 {
    pub fn values(&self) -> [Complex64; 2] {
        [self.pairs[0].value, self.pairs[1].value]
    }
}

/// Relative eigenvalue splitting below which `M` is treated as defective.
const DEFECTIVE_REL_TOL: f64 = 1e-10;

fn normalize(v: [Complex64; 2]) -> [Complex64; 2] {
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let pivot = if v[0].norm() > 1e-14 * norm { v[0] } else { v[1] };
    let phase = pivot.conj() / pivot.norm();
    [v[0] * phase / norm, v[1] * phase / norm]
}

fn null_vector(m: &EffectiveMatrix, value: Complex64) -> Option<[Complex64; 2]> {
    // Each row of M - eps gives a candidate orthogonal to it; keep the larger.
    let a = [m.m12, value - m.m11];
    let b = [value - m.m22, m.m21];
    let na = a[0].norm_sqr() + a[1].norm_sqr();
    let nb = b[0].norm_sqr() + b[1].norm_sqr();
    let scale = m.norm().max(f64::MIN_POSITIVE);
    if na.max(nb).sqrt() <= 1e-14 * scale {
        None
    } else if na >= nb {
        Some(normalize(a))
    } else {
        Some(normalize(b))
    }
}

/// Closed-form eigen-decomposition using the principal square root of the
/// discriminant. Branch flips of the square root across exceptional points are
/// resolved by the continuity tracking in [`sweep_phase`].
pub fn eigen2(m: &EffectiveMatrix) -> Eigen2 {
    let half_trace = m.trace() / 2.0;
    let half_diff = (m.m11 - m.m22) / 2.0;
    let root = (half_diff * half_diff + m.m12 * m.m21).sqrt();
    let values = [half_trace + root, half_trace - root];
    let scale = m.norm().max(f64::MIN_POSITIVE);

    if root.norm() <= DEFECTIVE_REL_TOL * scale {
        let value = half_trace;
        return match null_vector(m, value) {
            // M = value * identity: every vector is an eigenvector.
            None => Eigen2 {
                pairs: [
                    EigenPair2 { value, vector: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)] },
                    EigenPair2 { value, vector: [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)] },
                ],
                defective: false,
            },
            Some(vector) => Eigen2 {
                pairs: [EigenPair2 { value, vector }, EigenPair2 { value, vector }],
                defective: true,
            },
        };
    }

    let pair = |value: Complex64| EigenPair2 {
        value,
        vector: null_vector(m, value).expect("non-degenerate eigenvalue has a null vector"),
    };
    Eigen2 { pairs: [pair(values[0]), pair(values[1])], defective: false }
}

/// Number of eigenvalues with `|Im eps| < tol`.
pub fn count_bics(eigenvalues: [Complex64; 2], tol: f64) -> usize {
    eigenvalues.iter().filter(|e| e.im.abs() < tol).count()
}

/// One point of a coupling-phase sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSweepRecord {
    pub phi: f64,
    pub eigen1: Complex64,
    pub eigen2: Complex64,
    pub n_bics: usize,
}

fn initial_order(mut values: [Complex64; 2]) -> [Complex64; 2] {
    // Branch 1 is the more strongly damped one; ties go to the smaller real part.
    let key = |z: &Complex64| (z.im, z.re);
    if key(&values[1]) < key(&values[0]) {
        values.swap(0, 1);
    }
    values
}

/// Assigns eigenvalues to two continuous branches: at each step the pairing
/// with the smaller total distance to the previous point wins.
pub fn track_branches(points: &[[Complex64; 2]]) -> Vec<[Complex64; 2]> {
    let mut out: Vec<[Complex64; 2]> = Vec::with_capacity(points.len());
    for (k, &values) in points.iter().enumerate() {
        let next = if k == 0 {
            initial_order(values)
        } else {
            let prev = out[k - 1];
            let keep = (values[0] - prev[0]).norm() + (values[1] - prev[1]).norm();
            let swap = (values[1] - prev[0]).norm() + (values[0] - prev[1]).norm();
            if swap < keep {
                [values[1], values[0]]
            } else {
                values
            }
        };
        out.push(next);
    }
    out
}

/// Eigenvalues of `M` across `phi_grid` (which replaces `params.phi`), with
/// continuity-tracked branches.
pub fn sweep_phase(
    params: &ModelParams,
    geometry: &Geometry,
    phi_grid: &[f64],
    bic_tol: f64,
) -> Result<Vec<PhaseSweepRecord>> {
    if phi_grid.is_empty() {
        return Err(Error::EmptyPhaseGrid);
    }
    if let Some(k) = phi_grid.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::NonIncreasingGrid(k + 1));
    }
    let raw: Vec<[Complex64; 2]> = phi_grid
        .iter()
        .map(|&phi| eigen2(&build_effective_matrix(&params.with_phi(phi), geometry)).values())
        .collect();
    let tracked = track_branches(&raw);
    Ok(phi_grid
        .iter()
        .zip(tracked)
        .map(|(&phi, [e1, e2])| PhaseSweepRecord {
            phi,
            eigen1: e1,
            eigen2: e2,
            n_bics: count_bics([e1, e2], bic_tol),
        })
        .collect())
}

/// `exp(-i M t)` as a 2x2 matrix in row-major order.
pub fn propagator(m: &EffectiveMatrix, t: f64) -> [[Complex64; 2]; 2] {
    let eig = eigen2(m);
    let id = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];
    if eig.defective {
        // Jordan block: M = eps + N with N nilpotent, exp(-iMt) = e^{-i eps t} (1 - i t N).
        let eps = eig.pairs[0].value;
        let n = m.shifted(eps);
        let f = (-I * eps * t).exp();
        return [
            [f * (id[0][0] - I * t * n.m11), f * (-I * t * n.m12)],
            [f * (-I * t * n.m21), f * (id[1][1] - I * t * n.m22)],
        ];
    }
    // Spectral form written through the half-splitting s:
    // exp(-iMt) = e^{-i h t} [cos(s t) - i sin(s t)/s (M - h)], h = tr/2.
    let h = m.trace() / 2.0;
    let s = (eig.pairs[0].value - eig.pairs[1].value) / 2.0;
    let phase = (-I * h * t).exp();
    let c = (s * t).cos();
    let sinc = if s.norm() == 0.0 { Complex64::new(t, 0.0) } else { (s * t).sin() / s };
    let n = m.shifted(h);
    [
        [phase * (c - I * sinc * n.m11), phase * (-I * sinc * n.m12)],
        [phase * (-I * sinc * n.m21), phase * (c - I * sinc * n.m22)],
    ]
}

/// Atomic amplitudes at one time under the effective dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkovSample {
    pub t: f64,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
}

impl MarkovSample {
    pub fn populations(&self) -> (f64, f64) {
        (self.alpha1.norm_sqr(), self.alpha2.norm_sqr())
    }
}

/// Propagates `initial` under `i d(alpha)/dt = M alpha`.
pub fn evolve_markov(
    params: &ModelParams,
    geometry: &Geometry,
    initial: [Complex64; 2],
    times: &[f64],
) -> Result<Vec<MarkovSample>> {
    let norm2 = initial[0].norm_sqr() + initial[1].norm_sqr();
    if (norm2 - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm2));
    }
    if let Some(t) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::InvalidTimes(format!("negative or non-finite time {t}")));
    }
    let m = build_effective_matrix(params, geometry);
    Ok(times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                return MarkovSample { t, alpha1: initial[0], alpha2: initial[1] };
            }
            let u = propagator(&m, t);
            MarkovSample {
                t,
                alpha1: u[0][0] * initial[0] + u[0][1] * initial[1],
                alpha2: u[1][0] * initial[0] + u[1][1] * initial[1],
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const G: f64 = 0.1;
    const GAMMA: f64 = 0.01;
    const LAMBDA: f64 = 0.016;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn geometry(size: usize, delta: usize) -> Geometry {
        Geometry::new(0, size, delta, delta + size, size + delta + 1).unwrap()
    }

    fn params(phi: f64) -> ModelParams {
        ModelParams { g: G, lambda: LAMBDA, ..ModelParams::default() }.with_phi(phi)
    }

    #[test]
    fn i_pow_table() {
        assert_eq!(i_pow(0), c(1.0, 0.0));
        assert_eq!(i_pow(5), c(0.0, 1.0));
        assert_eq!(i_pow(14), c(-1.0, 0.0));
        assert_eq!(i_pow(1023), c(0.0, -1.0));
    }

    #[test]
    fn kernel_examples() {
        let k = i_power_kernel(&geometry(12, 4));
        assert_eq!((k.s11, k.s22, k.s12, k.s21), (c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0), c(4.0, 0.0)));
        let k = i_power_kernel(&geometry(14, 4));
        assert!(k.is_zero());
        let k = i_power_kernel(&geometry(17, 5));
        assert_eq!(k.s11, c(1.0, 1.0));
        assert_eq!(k.s12, c(0.0, 2.0));
        assert_eq!(k.s21, c(0.0, 2.0));
    }

    #[test]
    fn matrix_examples() {
        let m = build_effective_matrix(&params(0.0), &geometry(12, 4));
        assert!((m.m11 - c(0.0, -0.02)).norm() < 1e-15);
        assert!((m.m12 - c(0.016, -0.02)).norm() < 1e-15);

        for phi in [0.0, 0.7, PI, 5.0] {
            let m = build_effective_matrix(&params(phi), &geometry(14, 4));
            assert!(m.is_hermitian(0.0));
            assert_eq!(m.m11, c(0.0, 0.0));
            assert_eq!(m.m21, m.m12.conj());
            assert!((m.m21 - Complex64::from_polar(LAMBDA, -phi)).norm() < 1e-16);
        }

        let p = ModelParams { g: 0.0, omega_a: 0.3, ..params(1.1) };
        let m = build_effective_matrix(&p, &geometry(12, 4));
        assert_eq!(m.m11, c(0.3, 0.0));
        assert_eq!(m.m12, Complex64::from_polar(LAMBDA, 1.1));
    }

    fn sorted_by_im(e: Eigen2) -> [Complex64; 2] {
        let mut v = e.values();
        v.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        v
    }

    #[test]
    fn eigen_examples() {
        // phi = 0: one exactly real eigenvalue at -lambda, the other damped by 4 Gamma.
        let e = eigen2(&build_effective_matrix(&params(0.0), &geometry(12, 4)));
        let [damped, bound] = sorted_by_im(e);
        assert!((bound - c(-LAMBDA, 0.0)).norm() < 1e-16);
        assert!((damped - c(LAMBDA, -4.0 * GAMMA)).norm() < 1e-16);
        assert!(!e.defective);

        let e = eigen2(&build_effective_matrix(&params(PI / 2.0), &geometry(12, 4)));
        let [a, b] = sorted_by_im(e);
        assert!((a.im + 3.2 * GAMMA).abs() < 1e-12);
        assert!((b.im + 0.8 * GAMMA).abs() < 1e-12);

        for phi in [0.0, 1.0, 2.5, PI] {
            let e = eigen2(&build_effective_matrix(&params(phi), &geometry(17, 5)));
            for v in e.values() {
                assert!((v.im + GAMMA).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenvectors_are_normalized_with_real_lead() {
        let m = build_effective_matrix(&params(0.4), &geometry(12, 4));
        for p in eigen2(&m).pairs {
            let n = p.vector[0].norm_sqr() + p.vector[1].norm_sqr();
            assert!((n - 1.0).abs() < 1e-14);
            assert!(p.vector[0].im.abs() < 1e-15 && p.vector[0].re > 0.0);
            let r = m.apply(p.vector);
            let res = ((r[0] - p.value * p.vector[0]).norm_sqr() + (r[1] - p.value * p.vector[1]).norm_sqr()).sqrt();
            assert!(res < 1e-12 * m.norm());
        }
    }

    #[test]
    fn defective_matrix_flagged() {
        // [[0, 1], [0, 0]] is a Jordan block.
        let m = EffectiveMatrix { m11: c(0.0, 0.0), m12: c(1.0, 0.0), m21: c(0.0, 0.0), m22: c(0.0, 0.0) };
        let e = eigen2(&m);
        assert!(e.defective);
        assert_eq!(e.pairs[0].vector, e.pairs[1].vector);
        assert_eq!(e.pairs[0].vector, [c(1.0, 0.0), c(0.0, 0.0)]);

        let u = propagator(&m, 2.0);
        assert_eq!(u[0][1], c(0.0, -2.0));
        assert_eq!(u[0][0], c(1.0, 0.0));

        let scalar = EffectiveMatrix { m11: c(0.5, -0.1), m12: c(0.0, 0.0), m21: c(0.0, 0.0), m22: c(0.5, -0.1) };
        assert!(!eigen2(&scalar).defective);
    }

    #[test]
    fn bic_counts() {
        let count = |size, delta, phi| {
            count_bics(eigen2(&build_effective_matrix(&params(phi), &geometry(size, delta))).values(), DEFAULT_BIC_TOL)
        };
        assert_eq!(count(12, 4, 0.0), 1);
        assert_eq!(count(12, 4, PI / 3.0), 0);
        for phi in [0.0, 1.0, PI, 4.0] {
            assert_eq!(count(14, 4, phi), 2);
            assert_eq!(count(14, 2, phi), 2);
            assert_eq!(count(17, 5, phi), 0);
        }
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let g = geometry(12, 4);
        assert_eq!(sweep_phase(&params(0.0), &g, &[], 1e-9).unwrap_err(), Error::EmptyPhaseGrid);
        assert_eq!(sweep_phase(&params(0.0), &g, &[0.0, 1.0, 1.0], 1e-9).unwrap_err(), Error::NonIncreasingGrid(2));
    }

    #[test]
    fn sweep_keeps_bic_on_second_branch() {
        let grid: Vec<f64> = (0..=800).map(|k| k as f64 * PI / 200.0).collect();
        let records = sweep_phase(&params(0.0), &geometry(12, 4), &grid, DEFAULT_BIC_TOL).unwrap();
        for r in &records {
            assert!(r.eigen1.im < 0.0);
        }
        for l in 0..=4 {
            assert!(records[200 * l].eigen2.im.abs() < 1e-12, "l = {l}");
        }
        assert!((records[0].eigen1.im + 4.0 * GAMMA).abs() < 1e-12);
    }

    #[test]
    fn markov_limits() {
        let g = geometry(14, 4);
        let one = [c(1.0, 0.0), c(0.0, 0.0)];
        let times: Vec<f64> = (0..50).map(|k| k as f64 * 7.3).collect();
        for s in evolve_markov(&params(0.0), &g, one, &times).unwrap() {
            assert!((s.alpha1.norm_sqr() - (LAMBDA * s.t).cos().powi(2)).abs() < 1e-12);
        }

        let p = ModelParams { g: 0.0, lambda: 0.0, ..params(0.3) };
        let start = [c(0.6, 0.0), c(0.0, 0.8)];
        for s in evolve_markov(&p, &g, start, &[0.0, 10.0, 1000.0]).unwrap() {
            assert!((s.alpha1.norm_sqr() - 0.36).abs() < 1e-14);
            assert!((s.alpha2.norm_sqr() - 0.64).abs() < 1e-14);
        }

        let long = evolve_markov(&params(0.0), &geometry(12, 4), one, &[5000.0]).unwrap();
        let (p1, p2) = long[0].populations();
        assert!((p1 - 0.25).abs() < 1e-9 && (p2 - 0.25).abs() < 1e-9);
    }

    #[test]
    fn markov_rejects_bad_input() {
        let g = geometry(12, 4);
        assert!(matches!(
            evolve_markov(&params(0.0), &g, [c(1.0, 0.0), c(1.0, 0.0)], &[0.0]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            evolve_markov(&params(0.0), &g, [c(1.0, 0.0), c(0.0, 0.0)], &[-1.0]),
            Err(Error::InvalidTimes(_))
        ));
    }

    #[test]
    fn initial_state_returned_exactly() {
        let start = [c(0.6, 0.0), c(0.0, 0.8)];
        let s = evolve_markov(&params(1.0), &geometry(12, 4), start, &[0.0]).unwrap();
        assert_eq!([s[0].alpha1, s[0].alpha2], start);
    }
}
