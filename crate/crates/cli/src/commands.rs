use gabic::bic::{bic_energy_check, eigenstate_localization, find_bics, BicProfile};
use gabic::lattice::{
    assemble_hamiltonian, check_light_cone, diagonalize, propagate, propagate_chebyshev, SingleExcitationState,
    Trajectory, DENSE_SITE_LIMIT,
};
use gabic::markov::{build_effective_matrix, evolve_markov, sweep_phase};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{Format, InitialState, Resolved};
use crate::error::CliError;
use crate::output::{emit, profile_path, round15, to_json, write_atomic, Csv, Field, ENERGY_UNITS};

fn format_or(run: &Resolved, default: Format) -> Format {
    run.config.format.unwrap_or(default)
}

#[derive(Serialize)]
struct SweepRow {
    phi: f64,
    re_e1: f64,
    im_e1: f64,
    re_e2: f64,
    im_e2: f64,
    n_bics: usize,
}

pub fn sweep(run: &Resolved) -> Result<(), CliError> {
    let grid = run.config.phase_grid.clone().unwrap_or_default().values();
    let records = sweep_phase(&run.params, &run.geometry, &grid, run.config.bic_tol)?;
    let rows: Vec<SweepRow> = records
        .iter()
        .map(|r| SweepRow {
            phi: r.phi,
            re_e1: r.eigen1.re,
            im_e1: r.eigen1.im,
            re_e2: r.eigen2.re,
            im_e2: r.eigen2.im,
            n_bics: r.n_bics,
        })
        .collect();
    let text = match format_or(run, Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(&["phi", "re_e1", "im_e1", "re_e2", "im_e2", "n_bics"]);
            for r in &rows {
                csv.row(&[r.phi.into(), r.re_e1.into(), r.im_e1.into(), r.re_e2.into(), r.im_e2.into(), Field::Int(r.n_bics)]);
            }
            csv.finish()
        }
        Format::Json => {
            let rows: Vec<SweepRow> = rows
                .into_iter()
                .map(|r| SweepRow {
                    phi: round15(r.phi),
                    re_e1: round15(r.re_e1),
                    im_e1: round15(r.im_e1),
                    re_e2: round15(r.re_e2),
                    im_e2: round15(r.im_e2),
                    n_bics: r.n_bics,
                })
                .collect();
            to_json(&serde_json::json!({ "units": ENERGY_UNITS, "records": rows }))
        }
    };
    emit(run.config.output.as_deref(), &text)
}

fn initial_amplitudes(initial: InitialState) -> [Complex64; 2] {
    let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    match initial {
        InitialState::Atom1 => [one, zero],
        InitialState::Atom2 => [zero, one],
    }
}

fn lattice_trajectory(run: &Resolved, times: &[f64], strict: bool) -> Result<Trajectory, CliError> {
    let t_max = times.last().copied().unwrap_or(0.0);
    if let Some(w) = check_light_cone(&run.params, &run.geometry, t_max) {
        if strict {
            return Err(CliError::LightCone(w.to_string()));
        }
        eprintln!("warning: {w}");
    }
    let h = assemble_hamiltonian(&run.params, &run.geometry)?;
    let [a1, a2] = initial_amplitudes(run.config.initial);
    let initial = SingleExcitationState::atomic(a1, a2, run.geometry.n_sites());
    if run.geometry.n_sites() <= DENSE_SITE_LIMIT {
        Ok(propagate(&diagonalize(&h)?, &initial, times)?)
    } else {
        Ok(propagate_chebyshev(&h, &initial, times)?)
    }
}

pub fn dynamics(run: &Resolved, strict: bool) -> Result<(), CliError> {
    let grid = run.config.time_grid.clone().unwrap_or_default();
    let times = grid.values();
    let backend = run.config.backend;
    let markov = if backend.markov() {
        Some(evolve_markov(&run.params, &run.geometry, initial_amplitudes(run.config.initial), &times)?)
    } else {
        None
    };
    let lattice = if backend.lattice() { Some(lattice_trajectory(run, &times, strict)?) } else { None };

    let column = |k: usize| {
        let (m1, m2) = markov.as_ref().map_or((None, None), |m| {
            let (p1, p2) = m[k].populations();
            (Some(p1), Some(p2))
        });
        let l = lattice.as_ref().map(|l| (l.pop1[k], l.pop2[k], l.photon_total[k]));
        [Some(times[k]), m1, m2, l.map(|x| x.0), l.map(|x| x.1), l.map(|x| x.2)]
    };
    let names = ["t", "pop1_markov", "pop2_markov", "pop1_lattice", "pop2_lattice", "photon_total"];
    let text = match format_or(run, Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(&names);
            for k in 0..times.len() {
                let [t, rest @ ..] = column(k);
                let mut row = vec![Field::Real(t.unwrap_or_default())];
                row.extend(rest.into_iter().map(Field::from));
                csv.row(&row);
            }
            csv.finish()
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            map.insert("units".into(), ENERGY_UNITS.into());
            for (c, name) in names.iter().enumerate() {
                let values: Vec<Option<f64>> = (0..times.len()).map(|k| column(k)[c].map(round15)).collect();
                if values.iter().any(Option::is_some) {
                    map.insert((*name).into(), serde_json::to_value(values).unwrap());
                }
            }
            to_json(&map)
        }
    };
    emit(run.config.output.as_deref(), &text)
}

#[derive(Serialize)]
struct RhoJson {
    re: [[f64; 4]; 4],
    im: [[f64; 4]; 4],
}

#[derive(Serialize)]
struct BicJson {
    index: usize,
    energy: f64,
    markov_energy: Option<f64>,
    alpha1: [f64; 2],
    alpha2: [f64; 2],
    atomic_weight: f64,
    ground_population: f64,
    concurrence: f64,
    localized_fraction: f64,
    rho: RhoJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<String>,
}

fn bic_json(run: &Resolved, index: usize, b: &BicProfile, profile: Option<String>) -> BicJson {
    let check = bic_energy_check(b, &build_effective_matrix(&run.params, &run.geometry));
    let (re, im) = b.rho_atoms.to_re_im();
    let r4 = |m: [[f64; 4]; 4]| m.map(|row| row.map(round15));
    BicJson {
        index,
        energy: round15(b.energy),
        markov_energy: check.markov_energy.map(round15),
        alpha1: [round15(b.alpha1.re), round15(b.alpha1.im)],
        alpha2: [round15(b.alpha2.re), round15(b.alpha2.im)],
        atomic_weight: round15(b.atomic_weight()),
        ground_population: round15(b.rho_atoms.ground_population()),
        concurrence: round15(b.concurrence),
        localized_fraction: round15(b.localized_fraction),
        rho: RhoJson { re: r4(re), im: r4(im) },
        profile,
    }
}

pub fn bic(run: &Resolved) -> Result<(), CliError> {
    let h = assemble_hamiltonian(&run.params, &run.geometry)?;
    let spectrum = diagonalize(&h)?;
    let found = find_bics(&spectrum, &run.config.criteria)?;
    let out = run.config.output.as_deref();

    let mut entries = Vec::new();
    for (k, b) in found.iter().enumerate() {
        let index = k + 1;
        let profile = match out {
            Some(report) => {
                let path = profile_path(report, index);
                let mut csv = Csv::new(&["site", "beta_abs2"]);
                for (site, w) in b.beta_abs2.iter().enumerate() {
                    csv.row(&[Field::Int(site), Field::Real(*w)]);
                }
                write_atomic(&path, &csv.finish())?;
                path.file_name().map(|n| n.to_string_lossy().into_owned())
            }
            None => None,
        };
        entries.push(bic_json(run, index, b, profile));
    }

    let text = match format_or(run, Format::Json) {
        Format::Json => to_json(&serde_json::json!({
            "units": ENERGY_UNITS,
            "params": run.params,
            "geometry": run.geometry,
            "criteria": run.config.criteria,
            "bics": entries,
        })),
        Format::Csv => {
            let mut csv = Csv::new(&[
                "index", "energy", "re_alpha1", "im_alpha1", "re_alpha2", "im_alpha2", "ground_population", "concurrence",
            ]);
            for e in &entries {
                csv.row(&[
                    Field::Int(e.index),
                    e.energy.into(),
                    e.alpha1[0].into(),
                    e.alpha1[1].into(),
                    e.alpha2[0].into(),
                    e.alpha2[1].into(),
                    e.ground_population.into(),
                    e.concurrence.into(),
                ]);
            }
            csv.finish()
        }
    };
    emit(out, &text)
}

pub fn spectrum(run: &Resolved) -> Result<(), CliError> {
    let h = assemble_hamiltonian(&run.params, &run.geometry)?;
    let spectrum = diagonalize(&h)?;
    let window = run.config.criteria.localization_window;
    let rows: Vec<(usize, f64, f64, f64)> = (0..spectrum.len())
        .map(|n| (n, spectrum.energies[n], spectrum.atomic_weight(n), eigenstate_localization(&spectrum, n, window)))
        .collect();
    let text = match format_or(run, Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(&["index", "energy", "atomic_weight", "localized_fraction"]);
            for &(n, e, w, l) in &rows {
                csv.row(&[Field::Int(n), e.into(), w.into(), l.into()]);
            }
            csv.finish()
        }
        Format::Json => {
            let records: Vec<_> = rows
                .iter()
                .map(|&(n, e, w, l)| {
                    serde_json::json!({
                        "index": n,
                        "energy": round15(e),
                        "atomic_weight": round15(w),
                        "localized_fraction": round15(l),
                    })
                })
                .collect();
            to_json(&serde_json::json!({ "units": ENERGY_UNITS, "records": records }))
        }
    };
    emit(run.config.output.as_deref(), &text)
}

/// Resolved configuration as pretty JSON on stdout.
pub fn print_config(run: &Resolved) -> Result<(), CliError> {
    emit(None, &to_json(&run.config))
}
