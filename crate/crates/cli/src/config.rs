use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use gabic::bic::BicCriteria;
use gabic::markov::DEFAULT_BIC_TOL;
use gabic::model::{light_cone_sites, validate, Warning};
use gabic::{Geometry, ModelParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Evolution time used to size the lattice when no time grid is given.
pub const DEFAULT_SIZING_TIME: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Markov,
    Lattice,
    #[default]
    Both,
}

impl Backend {
    pub fn markov(self) -> bool {
        matches!(self, Backend::Markov | Backend::Both)
    }

    pub fn lattice(self) -> bool {
        matches!(self, Backend::Lattice | Backend::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    #[default]
    Atom1,
    Atom2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    Rad,
    #[default]
    Pi,
}

/// Coupling sites, either as two equal atoms of `size` separated by `delta`
/// and centered, or as explicit `[n1, n2, m1, m2]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sites: Option<[usize; 4]>,
    /// Defaults to the light-cone rule for the longest requested time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_sites: Option<usize>,
}

/// `points` equally spaced phases from `start` to `end` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseGrid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
    #[serde(default)]
    pub unit: AngleUnit,
}

impl Default for PhaseGrid {
    fn default() -> Self {
        Self { start: 0.0, end: 4.0, points: 801, unit: AngleUnit::Pi }
    }
}

impl PhaseGrid {
    pub fn values(&self) -> Vec<f64> {
        let scale = match self.unit {
            AngleUnit::Rad => 1.0,
            AngleUnit::Pi => PI,
        };
        match self.points {
            0 => Vec::new(),
            1 => vec![self.start * scale],
            n => (0..n)
                .map(|k| scale * (self.start + (self.end - self.start) * k as f64 / (n - 1) as f64))
                .collect(),
        }
    }
}

/// `points` equally spaced times from 0 to `t_max` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_max: f64,
    pub points: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self { t_max: 500.0, points: 501 }
    }
}

impl TimeGrid {
    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.t_max],
            n => (0..n).map(|k| self.t_max * k as f64 / (n - 1) as f64).collect(),
        }
    }
}

fn default_bic_tol() -> f64 {
    DEFAULT_BIC_TOL
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub params: ModelParams,
    pub geometry: GeometrySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_grid: Option<PhaseGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_grid: Option<TimeGrid>,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub initial: InitialState,
    #[serde(default)]
    pub criteria: BicCriteria,
    #[serde(default = "default_bic_tol")]
    pub bic_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub phi: Option<f64>,
    pub tmax: Option<f64>,
    pub nc: Option<usize>,
}

/// A configuration whose geometry and parameters passed validation.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub params: ModelParams,
    pub geometry: Geometry,
    pub warnings: Vec<Warning>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        if let Some(out) = &o.out {
            self.output = Some(out.clone());
        }
        if o.format.is_some() {
            self.format = o.format;
        }
        if let Some(phi) = o.phi {
            self.params.phi = phi;
        }
        if let Some(t_max) = o.tmax {
            let points = self.time_grid.as_ref().map_or(t_max.ceil() as usize + 1, |g| g.points);
            self.time_grid = Some(TimeGrid { t_max, points });
        }
        if let Some(nc) = o.nc {
            self.geometry.n_sites = Some(nc);
        }
        self
    }

    fn sites(&self) -> Result<[usize; 4], CliError> {
        let g = &self.geometry;
        match (g.sites, g.size, g.delta) {
            (Some(s), None, None) => Ok(s),
            (None, Some(size), Some(delta)) => {
                // Placement on a lattice just large enough; re-centered below.
                let probe = Geometry::centered(size, delta, 2 * (size + delta) + 2).map_err(CliError::Core)?;
                let first = probe.first_site();
                Ok([probe.n1() - first, probe.n2() - first, probe.m1() - first, probe.m2() - first])
            }
            _ => Err(CliError::Config("geometry needs either `sites` or both `size` and `delta`".into())),
        }
    }

    /// Fills in every default, centers the atoms and validates the model.
    pub fn resolve(mut self) -> Result<Resolved, CliError> {
        let sites = self.sites()?;
        let span = sites.iter().max().unwrap() - sites.iter().min().unwrap();
        let t_sizing = self.time_grid.as_ref().map_or(DEFAULT_SIZING_TIME, |g| g.t_max);
        let n_sites = self.geometry.n_sites.unwrap_or_else(|| light_cone_sites(span, self.params.xi, t_sizing));
        let geometry = match (self.geometry.size, self.geometry.delta) {
            (Some(size), Some(delta)) => Geometry::centered(size, delta, n_sites),
            _ => Geometry::new(sites[0], sites[1], sites[2], sites[3], n_sites),
        }
        .map_err(CliError::Core)?;
        let checked = validate(&self.params, &geometry).map_err(CliError::Core)?;
        if !(self.bic_tol > 0.0) {
            return Err(CliError::Config(format!("bic_tol must be positive, got {}", self.bic_tol)));
        }
        self.geometry = GeometrySpec {
            size: None,
            delta: None,
            sites: Some([geometry.n1(), geometry.n2(), geometry.m1(), geometry.m2()]),
            n_sites: Some(n_sites),
        };
        Ok(Resolved { params: checked.params, geometry: checked.geometry, warnings: checked.warnings, config: self })
    }
}
