//! Physical parameters and coupling geometry shared by every backend.
//!
//! Energies are measured in units of the photon hopping `xi`; the default
//! configuration puts the resonator frequency at the origin and the atoms on
//! resonance with the band center.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Extra sites kept between the light cone and each lattice boundary.
pub const LIGHT_CONE_MARGIN: usize = 40;

/// Scalar parameters of the two-atom Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelParams {
    /// Atomic transition frequency.
    pub omega_a: f64,
    /// Bare resonator frequency.
    pub omega_c: f64,
    /// Nearest-neighbour photon hopping, the energy unit.
    pub xi: f64,
    /// Atom-waveguide coupling at every coupling point.
    pub g: f64,
    /// Strength of the direct atom-atom exchange.
    pub lambda: f64,
    /// Phase of the direct exchange, in radians.
    pub phi: f64,
}

impl Default for ModelParams {
    /// `g = 0.1`, `lambda = 1.6 g^2 / xi`, everything on resonance.
    fn default() -> Self {
        let g = 0.1;
        Self {
            omega_a: 0.0,
            omega_c: 0.0,
            xi: 1.0,
            g,
            lambda: 1.6 * g * g,
            phi: 0.0,
        }
    }
}

impl ModelParams {
    pub fn with_phi(self, phi: f64) -> Self {
        Self { phi, ..self }
    }

    /// Collective decay scale `g^2 / xi`.
    pub fn gamma(&self) -> f64 {
        self.g * self.g / self.xi
    }

    /// Single-photon band energy at wavenumber `k`.
    pub fn dispersion(&self, k: f64) -> f64 {
        self.omega_c - 2.0 * self.xi * k.cos()
    }

    /// Lower and upper edges of the photonic band.
    pub fn band_edges(&self) -> (f64, f64) {
        (self.omega_c - 2.0 * self.xi, self.omega_c + 2.0 * self.xi)
    }

    fn check(&self) -> Result<()> {
        let fields = [
            ("omega_a", self.omega_a),
            ("omega_c", self.omega_c),
            ("xi", self.xi),
            ("g", self.g),
            ("lambda", self.lambda),
            ("phi", self.phi),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        if self.xi <= 0.0 {
            return Err(Error::NonPositiveHopping(self.xi));
        }
        if self.g < 0.0 {
            return Err(Error::NegativeCoupling { name: "g", value: self.g });
        }
        if self.lambda < 0.0 {
            return Err(Error::NegativeCoupling { name: "lambda", value: self.lambda });
        }
        Ok(())
    }
}

/// `omega_c - 2 xi cos k`.
pub fn dispersion(k: f64, params: &ModelParams) -> f64 {
    params.dispersion(k)
}

/// `g^2 / xi`.
pub fn gamma(params: &ModelParams) -> f64 {
    params.gamma()
}

/// Relative order of the four coupling points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arrangement {
    /// `n1 < m1 < n2 < m2` or the mirror image `m1 < n1 < m2 < n2`.
    Braided,
    /// One atom's coupling points both lie between the other's.
    Nested,
    /// The two atoms occupy disjoint intervals.
    Separate,
}

/// Coupling sites of the two atoms on an open lattice of `n_sites` resonators.
///
/// Atom 1 couples at `n1 < n2`, atom 2 at `m1 < m2`; all four sites are
/// distinct and inside the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGeometry", into = "RawGeometry")]
pub struct Geometry {
    n1: usize,
    n2: usize,
    m1: usize,
    m2: usize,
    n_sites: usize,
}

#[derive(Serialize, Deserialize)]
struct RawGeometry {
    n1: usize,
    n2: usize,
    m1: usize,
    m2: usize,
    n_sites: usize,
}

impl TryFrom<RawGeometry> for Geometry {
    type Error = Error;

    fn try_from(raw: RawGeometry) -> Result<Self> {
        Geometry::new(raw.n1, raw.n2, raw.m1, raw.m2, raw.n_sites)
    }
}

impl From<Geometry> for RawGeometry {
    fn from(g: Geometry) -> Self {
        RawGeometry { n1: g.n1, n2: g.n2, m1: g.m1, m2: g.m2, n_sites: g.n_sites }
    }
}

impl Geometry {
    pub fn new(n1: usize, n2: usize, m1: usize, m2: usize, n_sites: usize) -> Result<Self> {
        let geometry = Self { n1, n2, m1, m2, n_sites };
        geometry.check()?;
        Ok(geometry)
    }

    /// Two atoms of equal size `size` separated by `delta >= 1`, placed so the
    /// occupied span sits in the middle of the lattice.
    pub fn centered(size: usize, delta: usize, n_sites: usize) -> Result<Self> {
        let span = size + delta;
        if span >= n_sites {
            return Err(Error::IndexOutOfRange { index: span, n_sites });
        }
        let n1 = (n_sites - 1 - span) / 2;
        Self::new(n1, n1 + size, n1 + delta, n1 + delta + size, n_sites)
    }

    /// Same coupling pattern on a lattice of `n_sites`, re-centered.
    pub fn resized(&self, n_sites: usize) -> Result<Self> {
        let shift = self.first_site();
        let span = self.last_site() - shift;
        if span >= n_sites {
            return Err(Error::IndexOutOfRange { index: span, n_sites });
        }
        let offset = (n_sites - 1 - span) / 2;
        Self::new(
            self.n1 - shift + offset,
            self.n2 - shift + offset,
            self.m1 - shift + offset,
            self.m2 - shift + offset,
            n_sites,
        )
    }

    fn check(&self) -> Result<()> {
        for index in [self.n1, self.n2, self.m1, self.m2] {
            if index >= self.n_sites {
                return Err(Error::IndexOutOfRange { index, n_sites: self.n_sites });
            }
        }
        let sites = [self.n1, self.n2, self.m1, self.m2];
        for i in 0..4 {
            for j in (i + 1)..4 {
                if sites[i] == sites[j] {
                    return Err(Error::CoincidentSites);
                }
            }
        }
        if self.n1 > self.n2 {
            return Err(Error::UnorderedSites { atom: 1, first: self.n1, second: self.n2 });
        }
        if self.m1 > self.m2 {
            return Err(Error::UnorderedSites { atom: 2, first: self.m1, second: self.m2 });
        }
        Ok(())
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn m2(&self) -> usize {
        self.m2
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Coupling sites of atom 1 and atom 2.
    pub fn atom_sites(&self) -> [[usize; 2]; 2] {
        [[self.n1, self.n2], [self.m1, self.m2]]
    }

    /// `N = n2 - n1` when both atoms have the same size, `None` otherwise.
    pub fn equal_size(&self) -> Option<usize> {
        let size = self.n2 - self.n1;
        (self.m2 - self.m1 == size).then_some(size)
    }

    /// Sizes `(n2 - n1, m2 - m1)`.
    pub fn sizes(&self) -> (usize, usize) {
        (self.n2 - self.n1, self.m2 - self.m1)
    }

    /// Signed separation `m1 - n1`.
    pub fn separation(&self) -> i64 {
        self.m1 as i64 - self.n1 as i64
    }

    pub fn arrangement(&self) -> Arrangement {
        let (a, b) = if self.n1 < self.m1 {
            ((self.n1, self.n2), (self.m1, self.m2))
        } else {
            ((self.m1, self.m2), (self.n1, self.n2))
        };
        if b.0 > a.1 {
            Arrangement::Separate
        } else if b.1 < a.1 {
            Arrangement::Nested
        } else {
            Arrangement::Braided
        }
    }

    pub fn is_braided(&self) -> bool {
        self.arrangement() == Arrangement::Braided
    }

    /// Leftmost coupling site.
    pub fn first_site(&self) -> usize {
        self.n1.min(self.m1)
    }

    /// Rightmost coupling site.
    pub fn last_site(&self) -> usize {
        self.n2.max(self.m2)
    }

    /// Distance from the outermost coupling points to the nearer boundary.
    pub fn boundary_distance(&self) -> usize {
        self.first_site().min(self.n_sites - 1 - self.last_site())
    }
}

/// Smallest lattice on which light emitted from any coupling point cannot
/// reach a boundary and return before `t_max`: span + `4 xi t_max` + margin.
pub fn light_cone_sites(size_span: usize, xi: f64, t_max: f64) -> usize {
    let reach = (4.0 * xi * t_max.max(0.0)).ceil() as usize;
    size_span + reach + LIGHT_CONE_MARGIN
}

/// Non-fatal findings from [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Warning {
    /// The closed-form effective matrix assumes `omega_a == omega_c`.
    OffResonance { detuning: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::OffResonance { detuning } => write!(
                f,
                "atomic frequency detuned from band center by {detuning}; \
                 effective-matrix entries assume resonance"
            ),
        }
    }
}

/// A parameter set and geometry that passed [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    pub params: ModelParams,
    pub geometry: Geometry,
    pub warnings: Vec<Warning>,
}

/// Checks every invariant of `params` and `geometry`.
pub fn validate(params: &ModelParams, geometry: &Geometry) -> Result<Validated> {
    params.check()?;
    geometry.check()?;
    let mut warnings = Vec::new();
    let detuning = params.omega_a - params.omega_c;
    if detuning != 0.0 {
        warnings.push(Warning::OffResonance { detuning });
    }
    Ok(Validated { params: *params, geometry: *geometry, warnings })
}
