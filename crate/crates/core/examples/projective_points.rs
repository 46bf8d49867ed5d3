use orbitint::places::Place;
use orbitint::proj1::{log_chordal, ProjPoint};

fn main() -> orbitint::Result<()> {
    let p = ProjPoint::new(-4, -6)?;
    println!("[-4 : -6] normalizes to {p}, height {} = {:.6}", p.height(), p.height().to_f64());

    let pairs = [("0", "inf"), ("1", "3"), ("1", "0"), ("5/4", "5/4")];
    let places = [Place::Infinite, Place::finite(2u32)?, Place::finite(3u32)?];
    for (a, b) in pairs {
        let (a, b): (ProjPoint, ProjPoint) = (a.parse()?, b.parse()?);
        for v in &places {
            match log_chordal(&a, &b, v).value() {
                Some(l) => println!("λ_{v}({a}, {b}) = {l}"),
                None => println!("λ_{v}({a}, {b}) = +inf"),
            }
        }
    }
    Ok(())
}
