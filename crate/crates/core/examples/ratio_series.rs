use orbitint::integrality::{averaged_ratio, ratio_csv, ratio_series};
use orbitint::orbits::WorkLimits;
use orbitint::ratmap::MapSystem;
use orbitint::words::Word;

fn main() -> orbitint::Result<()> {
    let system: MapSystem = "(z^2-1)/(z^2+1)".parse()?;
    let terms = ratio_series(&system, &Word::constant(1), &"2".parse()?, 8, 128, &WorkLimits::default())?;
    print!("{}", ratio_csv(&terms));
    for t in &terms {
        if let Some(d) = t.distance_from_one() {
            println!("n = {}: |ratio - 1| <= {:.4}", t.n, d.hi_f64());
        }
    }

    let pair: MapSystem = "(z^2-1)/(z^2+1); (z^3-2)/(z^3+2)".parse()?;
    let avg = averaged_ratio(&pair, &"2".parse()?, 4, 128, &WorkLimits::default())?;
    println!("mean over {} words of length 4: {:.6}", avg.defined, avg.mean.map_or(f64::NAN, |m| m.mid_f64()));
    Ok(())
}
