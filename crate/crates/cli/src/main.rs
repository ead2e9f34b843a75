//! `gabic`: phase sweeps, dynamics, BIC reports and spectra from a JSON
//! configuration file.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, Overrides, PhaseGrid, RunConfig, TimeGrid};
use error::CliError;

#[derive(Parser)]
#[command(name = "gabic", version, about = "Two giant atoms on a coupled-resonator waveguide")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of the effective matrix over a phase grid.
    Sweep(Common),
    /// Atomic populations in time, Markov and/or lattice.
    Dynamics(Common),
    /// Bound states in the continuum of the finite lattice.
    Bic(Common),
    /// Full lattice spectrum.
    Spectrum(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Exchange phase in radians.
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    /// Final time in units of 1/xi.
    #[arg(long)]
    tmax: Option<f64>,
    /// Number of lattice sites.
    #[arg(long)]
    nc: Option<usize>,
    /// Treat a light-cone warning as an error.
    #[arg(long)]
    strict: bool,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    print_config: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, kind) = match &cli.command {
        Command::Sweep(c) => (c, "sweep"),
        Command::Dynamics(c) => (c, "dynamics"),
        Command::Bic(c) => (c, "bic"),
        Command::Spectrum(c) => (c, "spectrum"),
    };
    let overrides = Overrides {
        out: common.out.clone(),
        format: common.format,
        phi: common.phi,
        tmax: common.tmax,
        nc: common.nc,
    };
    let mut config = RunConfig::load(&common.config)?.apply(&overrides);
    match kind {
        "sweep" if config.phase_grid.is_none() => config.phase_grid = Some(PhaseGrid::default()),
        "dynamics" if config.time_grid.is_none() => config.time_grid = Some(TimeGrid::default()),
        _ => {}
    }
    let resolved = config.resolve()?;
    for w in &resolved.warnings {
        eprintln!("warning: {w}");
    }
    if common.print_config {
        return commands::print_config(&resolved);
    }
    match kind {
        "sweep" => commands::sweep(&resolved),
        "dynamics" => commands::dynamics(&resolved, common.strict),
        "bic" => commands::bic(&resolved),
        _ => commands::spectrum(&resolved),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
