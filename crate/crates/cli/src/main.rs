mod commands;
mod manifest;

use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::{analyze, baseline, classify, data, hull, mlp};
use manifest::{hash_all, write_manifest, RunManifest};

#[derive(Parser)]
#[command(
    name = "acthull",
    version,
    about = "Approximate convex hulls and activation-space geometry"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "ACTHULL_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planar toy dataset.
    GenToy(data::GenToyArgs),
    /// Convert between vector formats, or import IDX files.
    Convert(data::ConvertArgs),
    /// Build approximate hulls and benchmark the builders.
    #[command(subcommand)]
    Hull(hull::HullCommand),
    /// Train the network and extract layer activations.
    #[command(subcommand)]
    Mlp(mlp::MlpCommand),
    /// Geometry audits and distance statistics on activations.
    #[command(subcommand)]
    Analyze(analyze::AnalyzeCommand),
    /// Nearest-hull classification.
    #[command(subcommand)]
    Classify(classify::ClassifyCommand),
    /// Reference classifiers.
    #[command(subcommand)]
    Baseline(baseline::BaselineCommand),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        anyhow::ensure!(n >= 1, "--threads must be at least 1");
        pool = pool.num_threads(n);
    }
    pool.build_global().context("starting the worker pool")?;

    let start = Instant::now();
    let (name, config, run) = match &cli.command {
        Command::GenToy(a) => ("gen-toy", serde_json::to_value(a)?, data::gen_toy(a)?),
        Command::Convert(a) => ("convert", serde_json::to_value(a)?, data::convert(a)?),
        Command::Hull(c) => hull::run(c)?,
        Command::Mlp(c) => mlp::run(c)?,
        Command::Analyze(c) => analyze::run(c)?,
        Command::Classify(c) => classify::run(c)?,
        Command::Baseline(c) => baseline::run(c)?,
    };
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: name.to_string(),
        argv: std::env::args().collect(),
        config,
        seed: run.seed,
        threads: rayon::current_num_threads(),
        inputs: hash_all(&run.inputs)?,
        outputs: hash_all(&run.outputs)?,
        wall_time_secs: start.elapsed().as_secs_f64(),
    };
    let path = write_manifest(&manifest)?;
    eprintln!("manifest: {}", path.display());
    Ok(())
}
