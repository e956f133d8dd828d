//! `photonic-ssp`: decide, simulate and analyse subset-sum instances on a
//! simulated waveguide junction network.
//!
//! Exit codes: 0 the target is reachable, 1 it is not, 2 the read-out is
//! indeterminate, 3 configuration or I/O error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use photonic_ssp::{Error, SspInstance};

use config::{resolve_instance, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "photonic-ssp",
    version,
    about = "Subset-sum deciding and analysis on a simulated waveguide network",
    disable_help_subcommand = true
)]
struct Cli {
    /// Run-config JSON file; flags override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Seed for budgeted read-out noise; recorded in output headers.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,

    /// Output directory (default: out).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Optical preset: lossless or paper-default.
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Instance JSON file: {"elements": [...], "target": int|null}.
    #[arg(long, value_name = "PATH")]
    instance: Option<PathBuf>,

    /// Inline elements, comma separated (e.g. --elements 3,7,11).
    #[arg(long, value_delimiter = ',', value_name = "INTS")]
    elements: Vec<i64>,

    /// Target sum; overrides the instance file's target.
    #[arg(long, value_name = "INT", allow_hyphen_values = true)]
    target: Option<i64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether any subset reaches the target, by light.
    Decide(InstanceArgs),
    /// Write the per-port intensity read-out as CSV.
    Simulate(InstanceArgs),
    /// Time photonic, molecular and electronic runners over successive primes.
    Race,
    /// Tabulate SNR, detection probability and estimator bounds per size.
    Analyze,
    /// Export the junction network as JSON.
    ExportNetwork(InstanceArgs),
    /// Print junction counts and network depth.
    Stats(InstanceArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = Some(seed);
    }
    if let Some(out) = cli.out {
        config.out_dir = out;
    }
    if let Some(preset) = cli.preset {
        config.preset = Some(preset);
    }
    config.validate()?;
    let hash = config.hash();
    commands::print_meta(&config, &hash);

    match &cli.command {
        Command::Decide(args) => {
            let inst = match instance_for(&config, args) {
                Ok(inst) => inst,
                // An impossible target is a negative answer, not a crash.
                Err(e) if is_target_out_of_range(&e) => {
                    println!("answer: no ({e:#})");
                    return Ok(1);
                }
                Err(e) => return Err(e),
            };
            commands::decide(&config, &inst)
        }
        Command::Simulate(args) => commands::simulate(&config, &hash, &instance_for(&config, args)?),
        Command::Race => commands::race(&config, &hash),
        Command::Analyze => commands::analyze(&config, &hash),
        Command::ExportNetwork(args) => commands::export_network(&config, &instance_for(&config, args)?),
        Command::Stats(args) => commands::stats(&config, &instance_for(&config, args)?),
    }
}

fn instance_for(config: &RunConfig, args: &InstanceArgs) -> anyhow::Result<SspInstance> {
    resolve_instance(config, &args.elements, args.target, args.instance.as_deref())
}

fn is_target_out_of_range(e: &anyhow::Error) -> bool {
    matches!(e.downcast_ref::<Error>(), Some(Error::TargetOutOfRange { .. }))
}
