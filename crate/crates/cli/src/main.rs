//! `betaedge`: finite-N soft-edge densities, correction diagnostics, Monte
//! Carlo validation and reference tables as CSV or JSON.

mod commands;
mod config;
mod error;
mod output;

use clap::{Parser, Subcommand};

use config::{JobArgs, JobConfig, Needs};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "betaedge", version, about = "Soft-edge densities of even-beta Gaussian and Laguerre ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scaled (or raw) density for each N.
    Density(JobArgs),
    /// Successive differences over consecutive sizes; at beta = 2 also the
    /// deviation from the limit and the closed-form correction.
    Correction(JobArgs),
    /// Centring-shift diagnostic against minus the derivative.
    Derivcheck(JobArgs),
    /// Tridiagonal-model histogram against the exact density.
    ValidateMc(JobArgs),
    /// Airy functions, limiting density and the beta = 2 corrections.
    Reference(JobArgs),
}

fn run(cli: Cli) -> CliResult<()> {
    let (name, args, needs, job): (&str, JobArgs, Needs, fn(&JobConfig) -> CliResult<Vec<output::Table>>) =
        match cli.command {
            Command::Density(a) => ("density", a, Needs { sizes: 1, mc: false, ensemble: true }, commands::density),
            Command::Correction(a) => {
                ("correction", a, Needs { sizes: 2, mc: false, ensemble: true }, commands::correction)
            }
            Command::Derivcheck(a) => {
                ("derivcheck", a, Needs { sizes: 1, mc: false, ensemble: true }, commands::derivcheck)
            }
            Command::ValidateMc(a) => {
                ("validate-mc", a, Needs { sizes: 1, mc: true, ensemble: true }, commands::validate_mc)
            }
            Command::Reference(a) => ("reference", a, Needs { sizes: 0, mc: false, ensemble: false }, commands::reference),
        };
    let cfg = JobConfig::build(name, args, needs)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| CliError::Config(format!("cannot start {:?} workers: {e}", cfg.jobs)))?;
    let tables = pool.install(|| job(&cfg))?;
    for path in output::emit(&cfg, &tables)? {
        if !cfg.quiet {
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("betaedge: {e}");
        std::process::exit(e.exit_code());
    }
}
