//! The full word tree of a point, enumerated in parallel with deterministic
//! output, and the orbit hypotheses checked on it.

use orbitint::orbits::{enumerate_tree, hypothesis_check, records_csv, TreeOptions, WorkLimits};
use orbitint::ratmap::MapSystem;

fn main() -> orbitint::Result<()> {
    let system: MapSystem = "z^2+1; z^3-z".parse()?;
    let p = "1/2".parse()?;
    let serial = enumerate_tree(&system, &p, 5, &TreeOptions::default())?;
    let parallel = enumerate_tree(&system, &p, 5, &TreeOptions { workers: 4, ..TreeOptions::default() })?;
    assert_eq!(records_csv(&serial), records_csv(&parallel));
    println!("{} nodes; first rows:", serial.len());
    for line in records_csv(&serial).lines().take(5) {
        println!("  {line}");
    }

    let report = hypothesis_check(&system, &p, 5, &WorkLimits::default())?;
    println!("{}", report.summary());

    // the node cap is checked before any work
    let tight = TreeOptions { limits: WorkLimits { max_nodes: 100, ..WorkLimits::default() }, ..TreeOptions::default() };
    if let Err(e) = enumerate_tree(&system, &p, 10, &tight) {
        println!("{e} (exit code {})", e.exit_code());
    }
    Ok(())
}
