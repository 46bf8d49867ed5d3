use orbitint::heights::HeightOptions;
use orbitint::integrality::gamma_set;
use orbitint::places::{parse_rational, PlaceSet};
use orbitint::proj1::ProjPoint;
use orbitint::ratmap::MapSystem;
use orbitint::words::Word;

fn main() -> orbitint::Result<()> {
    let eps = parse_rational("1/2")?;
    let opts = HeightOptions::default();
    let cases = [("z^2", "2", "inf", "inf"), ("z^2-2", "1/3", "0", "inf,p3"), ("z^2-1", "0", "1", "inf")];
    for (f, p, a, s) in cases {
        let system: MapSystem = f.parse()?;
        let s: PlaceSet = s.parse()?;
        let (p, a): (ProjPoint, ProjPoint) = (p.parse()?, a.parse()?);
        let g = gamma_set(&system, &Word::constant(1), &s, &a, &p, &eps, 5, &opts)?;
        let verdicts: Vec<String> = g.members.iter().map(|e| format!("{}:{:?}", e.n, e.verdict)).collect();
        println!("F = {{{f}}}, P = {p}, A = {a}: {}", verdicts.join(" "));
    }
    Ok(())
}
