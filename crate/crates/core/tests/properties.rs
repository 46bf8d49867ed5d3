use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use orbitint::numeric::{Interval, LogSum};
use orbitint::places::{abs_log, padic_valuation, AbsLog, Place, Rational};
use orbitint::proj1::{log_chordal, ProjPoint};
use orbitint::ratmap::{MapSystem, RatMap};
use orbitint::words::Word;
use proptest::prelude::*;

const PREC: u32 = 128;

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..=10_000, 1i64..=10_000).prop_map(|(a, b)| Rational::new(a.into(), b.into()))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |q| !q.is_zero())
}

fn point() -> impl Strategy<Value = ProjPoint> {
    prop_oneof![
        1 => Just(ProjPoint::infinity()),
        9 => rational().prop_map(|q| ProjPoint::from_rational(&q)),
    ]
}

fn place() -> impl Strategy<Value = Place> {
    prop_oneof![
        Just(Place::Infinite),
        Just(Place::finite(2u32).unwrap()),
        Just(Place::finite(3u32).unwrap()),
        Just(Place::finite(5u32).unwrap()),
    ]
}

fn map() -> impl Strategy<Value = RatMap> {
    (2usize..=3, prop::collection::vec(-4i64..=4, 4), prop::collection::vec(-4i64..=4, 4)).prop_filter_map(
        "valid map",
        |(d, f, g)| {
            let mut f = f[..=d].to_vec();
            if f[d] == 0 {
                f[d] = 1;
            }
            let g = if g.iter().all(|c| *c == 0) { vec![1] } else { g[..d].to_vec() };
            RatMap::from_i64(&f, &g).ok()
        },
    )
}

fn sign(l: &LogSum) -> Ordering {
    l.sign(PREC).or_else(|| l.exact_sign()).expect("sign decided")
}

proptest! {
    #[test]
    fn points_are_normalized(a in -1000i64..1000, b in -1000i64..1000, k in 1i64..50) {
        prop_assume!(a != 0 || b != 0);
        let p = ProjPoint::new(a, b).unwrap();
        let q = ProjPoint::new(a * k, b * k).unwrap();
        prop_assert_eq!(&p, &q);
        prop_assert!(num_integer::Integer::gcd(p.x(), p.y()) == BigInt::from(1));
        prop_assert!(!p.y().is_negative());
    }

    #[test]
    fn point_display_round_trips(p in point()) {
        let back: ProjPoint = p.to_string().parse().unwrap();
        prop_assert_eq!(&back, &p);
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<ProjPoint>(&json).unwrap(), p);
    }

    #[test]
    fn chordal_is_symmetric_and_nonnegative(p in point(), q in point(), v in place()) {
        let a = log_chordal(&p, &q, &v);
        let b = log_chordal(&q, &p, &v);
        prop_assert_eq!(&a, &b);
        match a.value() {
            Some(l) => {
                prop_assert!(p != q);
                prop_assert_ne!(sign(&l), Ordering::Less);
            }
            None => prop_assert_eq!(&p, &q),
        }
    }

    #[test]
    fn padic_chordal_is_ultrametric(p in point(), q in point(), r in point(), prime in prop::sample::select(vec![2u32, 3, 5])) {
        prop_assume!(p != q && q != r && p != r);
        let v = Place::finite(prime).unwrap();
        let d = |x: &ProjPoint, y: &ProjPoint| log_chordal(x, y, &v).value().unwrap();
        // λ = -log δ, so δ(p,r) <= max(δ(p,q), δ(q,r)) reads λ(p,r) >= min(...)
        let (pq, qr, pr) = (d(&p, &q), d(&q, &r), d(&p, &r));
        let min = if sign(&pq.sub(&qr)) == Ordering::Less { pq } else { qr };
        prop_assert_ne!(sign(&pr.sub(&min)), Ordering::Less);
    }

    #[test]
    fn valuation_is_additive(x in nonzero_rational(), y in nonzero_rational(), prime in prop::sample::select(vec![2u32, 3, 7])) {
        let p = prime.into();
        let vx = padic_valuation(&x, &p).unwrap();
        let vy = padic_valuation(&y, &p).unwrap();
        prop_assert_eq!(padic_valuation(&(&x * &y), &p).unwrap(), vx + vy);
    }

    #[test]
    fn abs_log_of_product_is_sum(x in nonzero_rational(), y in nonzero_rational(), v in place()) {
        let l = |q: &Rational| match abs_log(q, &v) {
            AbsLog::Finite(s) => s,
            AbsLog::NegInfinity => unreachable!("nonzero"),
        };
        let diff = l(&(&x * &y)).sub(&l(&x).add(&l(&y)));
        prop_assert_eq!(diff.exact_sign(), Some(Ordering::Equal));
    }

    #[test]
    fn compose_multiplies_degrees_and_agrees_with_eval(f in map(), g in map(), p in point()) {
        let h = f.compose(&g);
        prop_assert_eq!(h.degree(), f.degree() * g.degree());
        prop_assert_eq!(h.eval(&p), f.eval(&g.eval(&p)));
    }

    #[test]
    fn map_text_round_trips(f in map()) {
        let back: RatMap = f.to_string().parse().unwrap();
        prop_assert_eq!(&back, &f);
        let system = MapSystem::single(f).unwrap();
        let json = serde_json::to_string(&system).unwrap();
        prop_assert_eq!(serde_json::from_str::<MapSystem>(&json).unwrap(), system);
    }

    #[test]
    fn periodic_word_shift_by_period_is_identity(letters in prop::collection::vec(1usize..=3, 1..5), i in 0usize..20) {
        let w = Word::periodic(letters.clone()).unwrap();
        prop_assert_eq!(w.shift_by(letters.len()).unwrap(), w.clone());
        let shifted = w.shift_by(i).unwrap();
        for j in 0..10 {
            prop_assert_eq!(shifted.letter(j), w.letter(i + j));
        }
    }

    #[test]
    fn word_serde_round_trips(letters in prop::collection::vec(1usize..=3, 1..6), periodic in any::<bool>()) {
        let w = if periodic { Word::periodic(letters).unwrap() } else { Word::finite(letters) };
        let json = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(serde_json::from_str::<Word>(&json).unwrap(), w);
    }

    #[test]
    fn interval_ops_contain_exact_results(a in rational(), b in rational()) {
        let (ia, ib) = (Interval::from_rational(&a, 64), Interval::from_rational(&b, 64));
        let contains = |iv: &Interval, q: &Rational| {
            let p = Interval::from_rational(q, 256);
            iv.lo() <= p.lo() && iv.hi() >= p.hi()
        };
        prop_assert!(contains(&ia.add(&ib), &(&a + &b)));
        prop_assert!(contains(&ia.sub(&ib), &(&a - &b)));
        prop_assert!(contains(&ia.mul(&ib), &(&a * &b)));
        if !b.is_zero() {
            prop_assert!(contains(&ia.div(&ib), &(&a / &b)));
        }
    }

    #[test]
    fn logsum_interval_encloses_float(n in 2u64..1_000_000, m in 2u64..1_000_000, c in -5i64..=5) {
        let s = LogSum::ln(&n.into()).add(&LogSum::ln(&m.into()).scale_int(c));
        let iv = s.to_interval(PREC);
        let x = (n as f64).ln() + c as f64 * (m as f64).ln();
        prop_assert!(iv.lo_f64() <= x + 1e-9 && iv.hi_f64() >= x - 1e-9);
        prop_assert!(iv.width().to_f64() < 1e-30);
    }
}
