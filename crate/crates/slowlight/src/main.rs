use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use slowlight::commands::{self, FOCK_TOLERANCE};
use slowlight::{validate, Scenario};

#[derive(Parser, Debug)]
#[command(name = "slowlight", version, about = "Slow-light deflection simulator")]
struct Cli {
    /// Scenario file (`key = value` lines with units); defaults apply otherwise.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding the scenario's `out`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed, overriding the scenario's `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transmission and deflection against two-photon detuning.
    Spectrum,
    /// Deflection against inverse group velocity, with moment extraction.
    VgSweep,
    /// Pulse delay through the cell and Gaussian fits of both traces.
    Pulse,
    /// Compare the Fock-space moment with the closed form.
    FockCheck {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        atoms: Vec<usize>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0.2,0.7853981633974483,1.2"
        )]
        theta: Vec<f64>,
    },
    /// Run the invariant suite.
    Validate,
}

enum Outcome {
    Ok,
    Failed,
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    let mut scenario = match &cli.config {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default(),
    };
    if let Some(out) = cli.out {
        scenario.out = out;
    }
    if let Some(seed) = cli.seed {
        scenario.seed = seed;
    }
    let out = scenario.out.clone();

    let outcome = match cli.command {
        Command::Spectrum => {
            let records = commands::spectrum(&scenario, &out)?;
            log::info!("{} spectrum points", records.len());
            Outcome::Ok
        }
        Command::VgSweep => {
            let (_, estimate) = commands::vg_sweep(&scenario, &out)?;
            println!(
                "mu = {:.4e} J/T, ratio = {:.4}",
                estimate.mu, estimate.ratio
            );
            Outcome::Ok
        }
        Command::Pulse => {
            let run = commands::pulse(&scenario, &out)?;
            println!("delay = {:.6e} s", run.delay());
            Outcome::Ok
        }
        Command::FockCheck { atoms, theta } => {
            let rows = commands::fock_check(&atoms, &theta, scenario.g_factor, &out)?;
            if rows.iter().all(|r| r.relative_error() <= FOCK_TOLERANCE) {
                Outcome::Ok
            } else {
                Outcome::Failed
            }
        }
        Command::Validate => {
            if validate::run_and_write(&scenario, &out)?.passed() {
                Outcome::Ok
            } else {
                Outcome::Failed
            }
        }
    };
    commands::save_scenario(&scenario, &out)?;
    Ok(outcome)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
