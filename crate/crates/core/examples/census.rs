//! S-integral points in a semigroup orbit, next to the count bound.

use orbitint::bounds::{corollary_bounds, BoundParameters};
use orbitint::heights::{hmin_estimate, HeightOptions};
use orbitint::integrality::s_integral_census;
use orbitint::orbits::TreeOptions;
use orbitint::places::PlaceSet;
use orbitint::ratmap::MapSystem;

fn main() -> orbitint::Result<()> {
    let s = PlaceSet::infinite_only();
    let single: MapSystem = "1/z^2".parse()?;
    let c = s_integral_census(&single, &"2".parse()?, &s, 4, &TreeOptions::default())?;
    let hits: Vec<String> = c.hits.iter().map(|r| r.point.to_string()).collect();
    println!("1/z^2 from 2: S-integral points {hits:?}");

    let pair: MapSystem = "z^2; z^3".parse()?;
    let p = "2".parse()?;
    let c = s_integral_census(&pair, &p, &s, 6, &TreeOptions { workers: 4, ..TreeOptions::default() })?;
    let hmin = hmin_estimate(&pair, &p, 2, &HeightOptions::default())?;
    let b = corollary_bounds(&pair, &s, &pair.height().to_interval(128), &hmin.value.value, &BoundParameters::default(), 128)?;
    println!("z^2, z^3 from 2: {} S-integral points to depth 6, bound {}", c.count, b.cor55_count);
    Ok(())
}
