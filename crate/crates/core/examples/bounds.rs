//! Explicit constants: κ, the threshold m, the composition height bound and
//! the Γ-set count bound under a chosen parameter set.

use orbitint::bounds::{choose_m, kappa_constants, prop33_bound, theorem52_bound, BoundParameters, RamificationMode};
use orbitint::heights::{canonical_height_system, canonical_height_word, HeightOptions};
use orbitint::places::{parse_rational, PlaceSet};
use orbitint::ratmap::MapSystem;
use orbitint::words::Word;

fn main() -> orbitint::Result<()> {
    let system: MapSystem = "z^2; z^3".parse()?;
    let eps = parse_rational("1/2")?;
    let kappa = kappa_constants(&system, RamificationMode::NotTotallyRamified);
    let m = choose_m(&eps, &kappa, 128)?;
    println!("κ_2 = {}, m = {}, small-case bound {:.3}", orbitint::places::format_rational(&kappa.kappa2), m.m, m.small_case_bound);

    for n in 1..=4 {
        let b = prop33_bound(n, 3, &system.height())?;
        println!("h(Φ^{n}) <= {b} = {:.3}", b.to_f64());
    }

    let opts = HeightOptions::default();
    let w = Word::periodic(vec![1, 2])?;
    let hp = canonical_height_word(&system, &w, &"2".parse()?, &opts)?;
    let ha = canonical_height_system(&system, &orbitint::proj1::ProjPoint::infinity(), 6, &opts)?;
    let params = BoundParameters::default();
    for s in ["inf", "inf,p2", "inf,p2,p3"] {
        let s: PlaceSet = s.parse()?;
        let b = theorem52_bound(&system, &s, &eps, &ha.value, &system.height().to_interval(128), &hp.value, &params, 128)?;
        println!("#S = {}: #Γ <= {}", s.len(), b.total);
    }
    Ok(())
}
