//! Absolute values at every place of Q, the product formula, S-integers and
//! quasi-integrality.

use orbitint::numeric::LogSum;
use orbitint::places::{abs_log, is_s_integer, parse_rational, support, PlaceSet, DEFAULT_TRIAL_BOUND};
use orbitint::integrality::quasi_integral_test;

fn main() -> orbitint::Result<()> {
    let x = parse_rational("-360/7")?;
    let mut total = LogSum::zero();
    for v in support(&x, DEFAULT_TRIAL_BOUND)? {
        let l = abs_log(&x, &v);
        let l = l.finite().expect("x is nonzero");
        println!("log |x|_{v:<4} = {l}");
        total = total.add(l);
    }
    println!("sum over places = {:?} (exactly zero)", total.exact_sign());

    let s: PlaceSet = "inf,p3".parse()?;
    for q in ["8/3", "8/9", "5/2"] {
        let q = parse_rational(q)?;
        println!(
            "{q}: S-integer {}, quasi-(S, 1)-integral {}",
            is_s_integer(&q, &s),
            quasi_integral_test(&q, &s, &parse_rational("1")?, 128)?
        );
    }
    Ok(())
}
