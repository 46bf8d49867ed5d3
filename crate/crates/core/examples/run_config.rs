//! Run any subcommand on a shipped config, as the command-line tool does.
//!
//! `cargo run --example run_config -- census examples/configs/census_inverse_square.json`

use std::path::PathBuf;

use orbitint::cli::{run, ExperimentConfig, RunOptions, Subcommand};

fn main() -> orbitint::Result<()> {
    let mut args = std::env::args().skip(1);
    let cmd: Subcommand = args.next().as_deref().unwrap_or("gamma").parse()?;
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/gamma_square.json")
    });
    let config = ExperimentConfig::load(&path)?;
    let report = run(cmd, &config, &RunOptions::default())?;
    for (name, body) in report.files() {
        println!("== {name}");
        print!("{body}");
    }
    Ok(())
}
