use orbitint::heights::{canonical_height_system, hmin_estimate, HeightOptions};
use orbitint::ratmap::MapSystem;

fn main() -> orbitint::Result<()> {
    let system: MapSystem = "z^2; z^3".parse()?;
    let opts = HeightOptions::default();
    for p in ["2", "1", "0", "3/2"] {
        let est = canonical_height_system(&system, &p.parse()?, 8, &opts)?;
        println!("ĥ_F({p}) in [{:.9}, {:.9}]", est.value.lo_f64(), est.value.hi_f64());
    }
    let mixed: MapSystem = "z^2-1; z^2+1".parse()?;
    let h = hmin_estimate(&mixed, &"2".parse()?, 3, &opts)?;
    println!(
        "ĥ^min(2) over {} periodic words: [{:.6}, {:.6}] at {}",
        h.words_checked,
        h.value.value.lo_f64(),
        h.value.value.hi_f64(),
        h.witness
    );
    Ok(())
}
