use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use orbitint::cli::{self, ExperimentConfig, RunOptions, Subcommand};
use orbitint::ratmap::{MapSystem, RatMap};
use orbitint::Result;

/// Arithmetic dynamics experiments over Q.
#[derive(Parser, Debug)]
#[command(name = "orbitint", version)]
struct Args {
    /// orbit | canonical | system-height | gamma | census | ratios | bounds | verify
    #[arg(value_parser = |s: &str| s.parse::<Subcommand>().map_err(|e| e.to_string()))]
    subcommand: Subcommand,
    /// Experiment config (JSON); optional for `verify`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Cases per property suite for `verify`.
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long, default_value = "reports")]
    out: PathBuf,
}

fn run(args: &Args) -> Result<bool> {
    let config = match (&args.config, args.subcommand) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Subcommand::Verify) => ExperimentConfig::for_system(MapSystem::single(RatMap::power(2))?),
        (None, _) => return Err(orbitint::Error::Config("--config is required".into())),
    };
    let opts = RunOptions {
        depth: args.depth,
        seed: args.seed,
        workers: args.workers,
        cases: args.cases,
    };
    let report = cli::run(args.subcommand, &config, &opts)?;
    if let Some(table) = &report.table {
        print!("{table}");
    }
    for path in report.write(&args.out)? {
        println!("{}", path.display());
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", cli::diagnostic(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
