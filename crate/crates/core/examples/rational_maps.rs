//! Normal forms, composition, resultants and ramification of rational maps.

use orbitint::proj1::ProjPoint;
use orbitint::ratmap::RatMap;

fn main() -> orbitint::Result<()> {
    let phi: RatMap = "(z^2-1)/(z^2+1)".parse()?;
    let psi: RatMap = "z^3-3z".parse()?;
    println!("φ = {phi}, resultant {}, height {}", phi.resultant(), phi.height());
    let comp = psi.compose(&phi);
    println!("ψ∘φ = {comp} (degree {})", comp.degree());

    for p in ["0", "inf", "1"] {
        let p: ProjPoint = p.parse()?;
        let e = comp.ramification_index(&p);
        let split = phi.ramification_index(&p) * psi.ramification_index(&phi.eval(&p));
        println!("e_{p}(ψ∘φ) = {e} = e_{p}(φ) e_{}(ψ) = {split}", phi.eval(&p));
    }
    println!("rational critical points of ψ: {:?}", psi.rational_critical_points()?);

    // a shared factor is rejected with the factor as witness
    if let Err(e) = "(z^2-1)/(z-1)".parse::<RatMap>() {
        println!("rejected: {e}");
    }
    Ok(())
}
