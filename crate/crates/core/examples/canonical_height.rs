//! Canonical heights along words, with certified enclosures, and exact
//! preperiodicity detection.

use orbitint::heights::{c_bound, canonical_height_word, ConstantMode, HeightOptions};
use orbitint::orbits::preperiodicity_check;
use orbitint::proj1::ProjPoint;
use orbitint::ratmap::MapSystem;
use orbitint::words::Word;

fn main() -> orbitint::Result<()> {
    let system: MapSystem = "z^2-1; z^2+1".parse()?;
    for m in system.maps() {
        let b = c_bound(m, ConstantMode::Certified, 128);
        println!("c({m}) <= {:.6}", b.upper().to_f64());
    }
    let p: ProjPoint = "3".parse()?;
    for depth in [2, 4, 6, 8] {
        let opts = HeightOptions { depth, ..HeightOptions::default() };
        let est = canonical_height_word(&system, &Word::periodic(vec![1, 2])?, &p, &opts)?;
        println!("depth {depth}: ĥ(3) in [{:.9}, {:.9}]", est.value.lo_f64(), est.value.hi_f64());
    }

    let basin: MapSystem = "z^2-1".parse()?;
    let verdict = preperiodicity_check(&basin, &Word::constant(1), &"0".parse()?, 10, &HeightOptions::default())?;
    println!("0 under z^2-1: {}", serde_json::to_string(&verdict)?);
    Ok(())
}
