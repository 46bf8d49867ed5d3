//! Seeded property suites run by `orbitint verify`. Every suite is a pure
//! function of `(seed, cases, precision)`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{lemma44_holds, prop33_bound};
use crate::error::Error;
use crate::heights::{canonical_height_system, canonical_height_word, system_constant, system_operator_iterate, system_tail_bound, ConstantMode, HeightOptions};
use crate::integrality::{gamma_set, Verdict};
use crate::numeric::{Certainty, Interval, LogSum};
use crate::orbits::{enumerate_tree, records_csv, TreeOptions, WorkLimits};
use crate::places::{abs_log, factor, is_probable_prime, padic_valuation, support, Place, PlaceSet, Rational, DEFAULT_TRIAL_BOUND};
use crate::proj1::{log_chordal, ProjPoint};
use crate::ratmap::{MapSystem, RatMap};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    /// Cases that met the premise and were checked.
    pub cases: usize,
    pub failures: usize,
    /// Cases skipped: premise false, undecided comparison or work limit.
    pub skipped: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> SuiteResult {
        SuiteResult {
            name,
            cases: 0,
            failures: 0,
            skipped: 0,
            first_failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Cases per suite.
    pub cases: usize,
    pub prec: u32,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            seed: 1,
            cases: 100,
            prec: crate::numeric::DEFAULT_PRECISION,
        }
    }
}

type SuiteFn = fn(u64, usize, u32) -> SuiteResult;

const SUITES: &[SuiteFn] = &[
    product_formula,
    abs_log_multiplicativity,
    height_identity,
    height_defect,
    chordal_lemma,
    ramification_multiplicativity,
    ramification_conjugation,
    canonical_shift,
    system_eigen,
    system_tail,
    composition_height,
    ramification_decay,
    gamma_precision,
    tree_determinism,
];

pub fn run_all(opts: &VerifyOptions) -> Vec<SuiteResult> {
    SUITES
        .iter()
        .enumerate()
        .map(|(i, f)| f(opts.seed.wrapping_add(i as u64), opts.cases, opts.prec))
        .collect()
}

pub fn format_table(results: &[SuiteResult]) -> String {
    let mut out = format!("{:<32}{:>7}{:>7}{:>7}  result\n", "suite", "cases", "fail", "skip");
    for r in results {
        let verdict = if r.passed() { "pass" } else { "FAIL" };
        let _ = writeln!(out, "{:<32}{:>7}{:>7}{:>7}  {verdict}", r.name, r.cases, r.failures, r.skipped);
        if let Some(f) = &r.first_failure {
            let _ = writeln!(out, "    first failure: {f}");
        }
    }
    out
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const SMALL_PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn smooth(r: &mut ChaCha8Rng) -> BigUint {
    let mut n = BigUint::one();
    for p in SMALL_PRIMES {
        if r.gen_bool(0.5) {
            n *= BigUint::from(p).pow(r.gen_range(1..5));
        }
    }
    n
}

fn random_prime(r: &mut ChaCha8Rng, lo: u64, hi: u64) -> BigUint {
    let mut n = BigUint::from(r.gen_range(lo..hi) | 1);
    while !is_probable_prime(&n) {
        n += 2u32;
    }
    n
}

/// Nonzero rational with up to about 30 decimal digits above and below,
/// factorable by trial division plus one primality test per side.
fn big_rational(r: &mut ChaCha8Rng) -> Rational {
    let side = |r: &mut ChaCha8Rng| {
        let mut n = smooth(r);
        if r.gen_bool(0.5) {
            n *= random_prime(r, 1_000_000_000_000, 1_000_000_000_000_000);
        }
        BigInt::from(n)
    };
    let num = side(r);
    let den = side(r);
    let q = Rational::new(num, den);
    if r.gen_bool(0.5) {
        -q
    } else {
        q
    }
}

fn small_rational(r: &mut ChaCha8Rng, bound: i64) -> Rational {
    Rational::new(r.gen_range(-bound..=bound).into(), r.gen_range(1..=bound).into())
}

fn small_point(r: &mut ChaCha8Rng, bound: i64) -> ProjPoint {
    if r.gen_ratio(1, 10) {
        ProjPoint::infinity()
    } else {
        ProjPoint::from_rational(&small_rational(r, bound))
    }
}

fn random_map(r: &mut ChaCha8Rng, degrees: std::ops::RangeInclusive<usize>, coeff: i64) -> RatMap {
    loop {
        let d = r.gen_range(degrees.clone());
        let mut f: Vec<i64> = (0..=d).map(|_| r.gen_range(-coeff..=coeff)).collect();
        let dg = if r.gen_ratio(1, 4) { 0 } else { r.gen_range(0..=d) };
        let mut g: Vec<i64> = (0..=dg).map(|_| r.gen_range(-coeff..=coeff)).collect();
        if dg < d || r.gen_bool(0.5) {
            while f[d] == 0 {
                f[d] = r.gen_range(-coeff..=coeff);
            }
        } else {
            while g[d] == 0 {
                g[d] = r.gen_range(-coeff..=coeff);
            }
        }
        if g.iter().all(Zero::is_zero) {
            g[0] = 1;
        }
        if let Ok(m) = RatMap::from_i64(&f, &g) {
            return m;
        }
    }
}

fn random_system(r: &mut ChaCha8Rng, k: std::ops::RangeInclusive<usize>, degrees: std::ops::RangeInclusive<usize>, coeff: i64) -> MapSystem {
    let k = r.gen_range(k);
    let maps = (0..k).map(|_| random_map(r, degrees.clone(), coeff)).collect();
    MapSystem::new(maps).expect("degrees at least 2")
}

fn is_zero_exactly(s: &LogSum) -> Option<bool> {
    s.exact_sign().map(|o| o == Ordering::Equal)
}

/// Product formula: `sum_v log |x|_v = 0` exactly.
pub fn product_formula(seed: u64, cases: usize, _prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("product_formula");
    let mut r = rng(seed);
    for _ in 0..cases {
        let x = big_rational(&mut r);
        let places = support(&x, DEFAULT_TRIAL_BOUND).expect("factorable by construction");
        let total = places.iter().fold(LogSum::zero(), |acc, v| {
            acc.add(abs_log(&x, v).finite().expect("nonzero"))
        });
        match is_zero_exactly(&total) {
            Some(ok) => out.check(ok, || format!("x = {x}: sum = {total}")),
            None => out.skipped += 1,
        }
    }
    out
}

/// `log |xy|_v = log |x|_v + log |y|_v` at `∞` and at every prime of `x` or `y`.
pub fn abs_log_multiplicativity(seed: u64, cases: usize, _prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("abs_log_multiplicativity");
    let mut r = rng(seed);
    for _ in 0..cases {
        let x = big_rational(&mut r);
        let y = big_rational(&mut r);
        let xy = &x * &y;
        let mut places = support(&x, DEFAULT_TRIAL_BOUND).expect("factorable");
        places.extend(support(&y, DEFAULT_TRIAL_BOUND).expect("factorable"));
        places.sort();
        places.dedup();
        let ok = places.iter().all(|v| {
            let lhs = abs_log(&xy, v).finite().expect("nonzero").clone();
            let rhs = abs_log(&x, v).finite().expect("nonzero").add(abs_log(&y, v).finite().expect("nonzero"));
            is_zero_exactly(&lhs.sub(&rhs)) == Some(true)
        });
        out.check(ok, || format!("x = {x}, y = {y}"));
    }
    out
}

fn primes_of(n: &BigInt) -> Vec<BigUint> {
    if n.is_zero() {
        return Vec::new();
    }
    factor(n.magnitude(), DEFAULT_TRIAL_BOUND)
        .expect("below the trial bound squared")
        .into_iter()
        .map(|(p, _)| p)
        .collect()
}

/// `h([a : b])` from unnormalized coordinates as `sum_v log max(|a|_v, |b|_v)`
/// equals the height of the normalized point.
pub fn height_identity(seed: u64, cases: usize, _prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("height_identity");
    let mut r = rng(seed);
    for _ in 0..cases {
        let g = BigInt::from(r.gen_range(1..=1_000i64));
        let a = &g * BigInt::from(r.gen_range(-1_000_000..=1_000_000i64));
        let b = &g * BigInt::from(r.gen_range(-1_000_000..=1_000_000i64));
        if a.is_zero() && b.is_zero() {
            out.skipped += 1;
            continue;
        }
        let mut oracle = LogSum::ln(&a.magnitude().max(b.magnitude()).clone());
        let mut primes = primes_of(&a);
        primes.extend(primes_of(&b));
        primes.sort();
        primes.dedup();
        for p in &primes {
            let v = |n: &BigInt| (!n.is_zero()).then(|| padic_valuation(&Rational::from_integer(n.clone()), p).expect("nonzero"));
            let m = match (v(&a), v(&b)) {
                (Some(x), Some(y)) => x.min(y),
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => unreachable!(),
            };
            oracle = oracle.sub(&LogSum::term(Rational::from_integer(m.into()), p));
        }
        let h = ProjPoint::new(a.clone(), b.clone()).expect("nonzero").height();
        out.check(is_zero_exactly(&h.sub(&oracle)) == Some(true), || {
            format!("[{a} : {b}]: h = {h}, oracle = {oracle}")
        });
    }
    out
}

/// `sum_v λ_v(P, ∞) - h(P) = ½ log(1 + min²/max²) ∈ [0, ½ log 2]` exactly.
pub fn height_defect(seed: u64, cases: usize, prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("height_defect");
    let mut r = rng(seed);
    let half = Rational::new(1.into(), 2.into());
    let half_ln2 = LogSum::ln(&BigUint::from(2u32)).scale(&half);
    let inf = ProjPoint::infinity();
    for _ in 0..cases {
        let a = BigInt::from(r.gen_range(-1_000_000_000..=1_000_000_000i64));
        let b = BigInt::from(r.gen_range(1..=1_000_000_000i64));
        let p = ProjPoint::new(a, b).expect("affine");
        let mut places = vec![Place::Infinite];
        places.extend(primes_of(p.y()).into_iter().map(Place::Finite));
        let lambda = places.iter().fold(LogSum::zero(), |acc, v| {
            acc.add(&log_chordal(&p, &inf, v).value().expect("affine point is not ∞"))
        });
        let defect = lambda.sub(&p.height());
        let (x, y) = (p.x().magnitude().clone(), p.y().magnitude().clone());
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let closed = LogSum::ln_rational(&Rational::new(BigInt::from(&hi * &hi + &lo * &lo), BigInt::from(&hi * &hi))).scale(&half);
        let exact = is_zero_exactly(&defect.sub(&closed));
        let nonneg = defect.sign(prec).map(|o| o != Ordering::Less);
        let capped = half_ln2.sub(&defect).sign(prec).map(|o| o != Ordering::Less);
        match (exact, nonneg, capped) {
            (Some(e), Some(n), Some(c)) => out.check(e && n && c, || format!("{p}: defect {defect}")),
            _ => out.skipped += 1,
        }
    }
    out
}

fn lemma_delta(r: &mut ChaCha8Rng, v: &Place) -> Rational {
    let sign = if r.gen_bool(0.5) { 1 } else { -1 };
    match v {
        Place::Infinite => Rational::new(
            (sign * r.gen_range(1..=10i64)).into(),
            r.gen_range(1..=1_000_000_000i64).into(),
        ),
        Place::Finite(p) => {
            let k = r.gen_range(1..=30u32);
            let unit = Rational::new((sign * r.gen_range(1..=1000i64)).into(), r.gen_range(1..=1000i64).into());
            unit * Rational::from_integer(BigInt::from(p.pow(k)))
        }
    }
}

/// If `λ_v(x, y) > λ_v(y, ∞) + log l_v` then
/// `λ_v(y, ∞) <= λ_v(x, y) + log |x - y|_v <= 2 λ_v(x, y) + log l_v`,
/// at `∞`, 2 and 3; `cases` premises per place.
pub fn chordal_lemma(seed: u64, cases: usize, prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("chordal_lemma");
    let mut r = rng(seed);
    let places = [Place::Infinite, Place::finite(2u32).unwrap(), Place::finite(3u32).unwrap()];
    let inf = ProjPoint::infinity();
    for v in &places {
        let log_l = if v.lv() == 2 { LogSum::ln(&BigUint::from(2u32)) } else { LogSum::zero() };
        let mut premises = 0;
        let mut attempts = 0;
        while premises < cases && attempts < 50 * cases {
            attempts += 1;
            let y = small_rational(&mut r, 1000);
            let delta = lemma_delta(&mut r, v);
            let x = &y + &delta;
            let (px, py) = (ProjPoint::from_rational(&x), ProjPoint::from_rational(&y));
            let lxy = log_chordal(&px, &py, v).value().expect("distinct");
            let ly = log_chordal(&py, &inf, v).value().expect("affine");
            let log_diff = match v {
                Place::Infinite => LogSum::ln_rational(&delta.abs()),
                Place::Finite(p) => {
                    let val = padic_valuation(&delta, p).expect("nonzero");
                    LogSum::term(Rational::from_integer((-val).into()), p)
                }
            };
            match lxy.sub(&ly).sub(&log_l).sign(prec) {
                Some(Ordering::Greater) => {}
                Some(_) => continue,
                None => {
                    out.skipped += 1;
                    continue;
                }
            }
            premises += 1;
            let first = lxy.add(&log_diff).sub(&ly).sign(prec);
            let second = lxy.add(&log_l).sub(&log_diff).sign(prec);
            match (first, second) {
                (Some(a), Some(b)) => out.check(a != Ordering::Less && b != Ordering::Less, || {
                    format!("v = {v}, x = {x}, y = {y}")
                }),
                _ => out.skipped += 1,
            }
        }
        if premises < cases {
            out.failures += 1;
            out.first_failure.get_or_insert_with(|| format!("only {premises} premises met at {v}"));
        }
    }
    out
}

/// A point where the map is likely to ramify, or a plain random point.
fn interesting_point(r: &mut ChaCha8Rng, phi: &RatMap) -> ProjPoint {
    if r.gen_bool(0.5) {
        if let Ok(crit) = phi.rational_critical_points() {
            if !crit.is_empty() {
                return crit[r.gen_range(0..crit.len())].clone();
            }
        }
    }
    small_point(r, 6)
}

/// `z^d + c`.
fn shifted_power(r: &mut ChaCha8Rng, d: usize) -> RatMap {
    let mut f = vec![0i64; d + 1];
    f[0] = r.gen_range(-2..=2);
    f[d] = 1;
    RatMap::from_i64(&f, &[1]).expect("polynomial")
}

/// `e_P(ψ ∘ φ) = e_P(φ) e_{φ(P)}(ψ)`.
pub fn ramification_multiplicativity(seed: u64, cases: usize, _prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("ramification_multiplicativity");
    let mut r = rng(seed);
    for _ in 0..cases {
        let (phi, psi) = if r.gen_ratio(1, 3) {
            let (d, e) = (r.gen_range(2..=4), r.gen_range(2..=4));
            (shifted_power(&mut r, d), shifted_power(&mut r, e))
        } else {
            (random_map(&mut r, 2..=4, 4), random_map(&mut r, 2..=4, 4))
        };
        let p = if r.gen_ratio(1, 4) { ProjPoint::from_int(0) } else { interesting_point(&mut r, &phi) };
        let lhs = psi.compose(&phi).ramification_index(&p);
        let rhs = phi.ramification_index(&p) * psi.ramification_index(&phi.eval(&p));
        out.check(lhs == rhs, || format!("φ = {phi}, ψ = {psi}, P = {p}: {lhs} vs {rhs}"));
    }
    out
}

/// `e_∞(φ)` agrees through `L = 1/z` at 0 and `L = (2z + 1)/(z - 3)` at 3.
pub fn ramification_conjugation(seed: u64, cases: usize, _prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("ramification_conjugation");
    let mut r = rng(seed);
    let l2 = RatMap::from_i64(&[1, 2], &[-3, 1]).expect("degree one");
    let three = Rational::from_integer(3.into());
    let inf = ProjPoint::infinity();
    for _ in 0..cases {
        let phi = if r.gen_bool(0.5) {
            let d = r.gen_range(2..=4);
            let f: Vec<i64> = (0..=d).map(|i| if i == d { 1 } else { r.gen_range(-3..=3) }).collect();
            RatMap::from_i64(&f, &[r.gen_range(1..=3)]).expect("polynomial")
        } else {
            random_map(&mut r, 2..=4, 4)
        };
        let a = phi.ramification_index(&inf);
        let b = phi.ramification_index_with(&inf, &l2, &three).expect("L(3) = ∞");
        out.check(a == b, || format!("φ = {phi}: {a} vs {b}"));
    }
    out
}

fn height_opts(depth: usize, prec: u32) -> HeightOptions {
    HeightOptions {
        depth,
        prec,
        ..HeightOptions::default()
    }
}

/// `ĥ_{S(Φ)}(φ_{w_1}(P)) = d_{w_1} ĥ_Φ(P)`: the two enclosures overlap.
pub fn canonical_shift(seed: u64, cases: usize, prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("canonical_shift");
    let mut r = rng(seed);
    for _ in 0..cases {
        let system = random_system(&mut r, 1..=2, 2..=3, 3);
        let len = r.gen_range(1..=3);
        let w = Word::periodic((0..len).map(|_| r.gen_range(1..=system.k())).collect()).expect("nonempty");
        let p = small_point(&mut r, 10);
        let opts = height_opts(r.gen_range(1..=5), prec);
        let first = system.map(w.letters()[0]).expect("valid letter");
        let lhs = canonical_height_word(&system, &w.shift().expect("nonempty"), &first.eval(&p), &opts);
        let rhs = canonical_height_word(&system, &w, &p, &opts);
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => {
                let scaled = b.value.scale_int(&BigInt::from(first.degree()));
                out.check(a.value.overlaps(&scaled), || format!("F = {system}, w = {w}, P = {p}"));
            }
            (Err(Error::WorkLimit(_)), _) | (_, Err(Error::WorkLimit(_))) => out.skipped += 1,
            (Err(e), _) | (_, Err(e)) => out.check(false, || e.to_string()),
        }
    }
    out
}

/// `sum_j ĥ_F(φ_j(P)) = (d_1 + ... + d_k) ĥ_F(P)`: the enclosures overlap.
pub fn system_eigen(seed: u64, cases: usize, prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("system_eigen");
    let mut r = rng(seed);
    for _ in 0..cases {
        let system = random_system(&mut r, 2..=3, 2..=3, 3);
        let p = small_point(&mut r, 10);
        let n = r.gen_range(2..=4);
        let opts = height_opts(n, prec);
        let run = || -> crate::Result<bool> {
            let mut lhs = Interval::zero(prec);
            for m in system.maps() {
                lhs = lhs.add(&canonical_height_system(&system, &m.eval(&p), n, &opts)?.value);
            }
            let big_d: usize = system.degrees().iter().sum();
            let rhs = canonical_height_system(&system, &p, n, &opts)?.value.scale_int(&BigInt::from(big_d));
            Ok(lhs.overlaps(&rhs))
        };
        match run() {
            Ok(ok) => out.check(ok, || format!("F = {system}, P = {p}, n = {n}")),
            Err(_) => out.skipped += 1,
        }
    }
    out
}

/// `|T^(n+1) h - T^n h| <= 2 c (k/D)^n / (1 - k/D)`.
pub fn system_tail(seed: u64, cases: usize, prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("system_tail");
    let mut r = rng(seed);
    let limits = WorkLimits::default();
    for _ in 0..cases {
        let system = random_system(&mut r, 1..=3, 2..=3, 3);
        let p = small_point(&mut r, 10);
        let c = system_constant(&system, ConstantMode::Certified, prec);
        let iterates: crate::Result<Vec<Interval>> = (0..=4).map(|n| system_operator_iterate(&system, &p, n, prec, &limits)).collect();
        let Ok(iterates) = iterates else {
            out.skipped += 1;
            continue;
        };
        let ok = iterates.windows(2).enumerate().all(|(n, pair)| {
            let diff = pair[1].sub(&pair[0]).abs();
            diff.compare(&system_tail_bound(&system, &c, n, prec)) != Certainty::Greater
        });
        out.check(ok, || format!("F = {system}, P = {p}"));
    }
    out
}

/// `h(Φ^n) <= ((d^n - 1)/(d - 1)) h(F) + d^2 ((d^(n-1) - 1)/(d - 1)) log 8`
/// with `d = max d_i`, for composed words of length `n <= 4`.
pub fn composition_height(seed: u64, cases: usize, prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("composition_height");
    let mut r = rng(seed);
    for _ in 0..cases {
        let system = random_system(&mut r, 1..=3, 2..=3, 5);
        let hf = system.height();
        for n in 1..=4u32 {
            let letters: Vec<usize> = (0..n).map(|_| r.gen_range(1..=system.k())).collect();
            let phi = system.compose_word(&letters).expect("valid").expect("nonempty");
            let bound = prop33_bound(n, system.d_max() as u64, &hf).expect("n, d in range");
            match bound.sub(&phi.height()).sign(prec) {
                Some(o) => out.check(o != Ordering::Less, || format!("F = {system}, word {letters:?}")),
                None => out.skipped += 1,
            }
        }
    }
    out
}

/// Along orbits with no totally ramified step, `prod e_i <= (1 - 1/max d)^m deg Φ^m`,
/// and `prod e_i = e_P(Φ^m)` for the composed map when `m <= 3`.
pub fn ramification_decay(seed: u64, cases: usize, _prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("ramification_decay");
    let mut r = rng(seed);
    let mut tested = 0;
    let mut attempts = 0;
    while tested < cases && attempts < 20 * cases {
        attempts += 1;
        let system = random_system(&mut r, 1..=2, 2..=3, 4);
        let p = interesting_point(&mut r, system.map(1).expect("letter 1"));
        let letters: Vec<usize> = (0..6).map(|_| r.gen_range(1..=system.k())).collect();
        let mut x = p.clone();
        let mut indices = Vec::new();
        let mut degrees = Vec::new();
        for &l in &letters {
            let m = system.map(l).expect("valid");
            indices.push(m.ramification_index(&x));
            degrees.push(m.degree());
            x = m.eval(&x);
        }
        if indices.iter().zip(&degrees).any(|(e, d)| e == d) {
            out.skipped += 1;
            continue;
        }
        tested += 1;
        let decays = (1..=6).all(|m| lemma44_holds(&indices[..m], &degrees[..m], system.d_max()));
        let composed = (1..=3).all(|m| {
            let phi = system.compose_word(&letters[..m]).expect("valid").expect("nonempty");
            phi.ramification_index(&p) == indices[..m].iter().product::<usize>()
        });
        out.check(decays && composed, || format!("F = {system}, P = {p}, word {letters:?}"));
    }
    if tested < cases {
        out.failures += 1;
        out.first_failure.get_or_insert_with(|| format!("only {tested} orbits met the hypothesis"));
    }
    out
}

/// Lowering the precision to 16 bits may turn verdicts `ambiguous`, never
/// into the opposite verdict.
pub fn gamma_precision(seed: u64, cases: usize, prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("gamma_precision");
    let mut r = rng(seed);
    let half = Rational::new(1.into(), 2.into());
    let sets: [PlaceSet; 3] = [
        PlaceSet::infinite_only(),
        PlaceSet::with_primes(&[2]).expect("prime"),
        PlaceSet::with_primes(&[3]).expect("prime"),
    ];
    for _ in 0..cases {
        let system = random_system(&mut r, 1..=1, 2..=3, 3);
        let p = small_point(&mut r, 10);
        let a = small_point(&mut r, 4);
        let s = &sets[r.gen_range(0..3)];
        let w = Word::constant(1);
        let high = gamma_set(&system, &w, s, &a, &p, &half, 4, &height_opts(4, prec));
        let low = gamma_set(&system, &w, s, &a, &p, &half, 4, &height_opts(4, 16));
        let (Ok(high), Ok(low)) = (high, low) else {
            out.skipped += 1;
            continue;
        };
        let ok = high.members.iter().zip(&low.members).all(|(h, l)| {
            l.verdict == Verdict::Ambiguous || h.verdict == Verdict::Ambiguous || l.verdict == h.verdict
        });
        out.check(ok, || format!("F = {system}, P = {p}, A = {a}, S = {s:?}"));
    }
    out
}

/// Tree dumps are byte-identical on 1, 2 and 8 workers.
pub fn tree_determinism(seed: u64, cases: usize, _prec: u32) -> SuiteResult {
    let mut out = SuiteResult::new("tree_determinism");
    let mut r = rng(seed);
    for _ in 0..cases.div_ceil(10) {
        let system = random_system(&mut r, 2..=3, 2..=2, 2);
        let p = small_point(&mut r, 5);
        let depth = if system.k() == 2 { 6 } else { 4 };
        let dedupe = r.gen_bool(0.5);
        let dump = |workers| {
            let opts = TreeOptions {
                dedupe,
                workers,
                limits: WorkLimits::default(),
            };
            enumerate_tree(&system, &p, depth, &opts).map(|recs| records_csv(&recs))
        };
        match (dump(1), dump(2), dump(8)) {
            (Ok(a), Ok(b), Ok(c)) => out.check(a == b && b == c, || format!("F = {system}, P = {p}")),
            _ => out.skipped += 1,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_on_a_small_run() {
        let results = run_all(&VerifyOptions {
            seed: 7,
            cases: 12,
            prec: 128,
        });
        let table = format_table(&results);
        assert!(results.iter().all(SuiteResult::passed), "{table}");
    }

    #[test]
    fn suites_are_deterministic_per_seed() {
        assert_eq!(height_defect(3, 20, 128), height_defect(3, 20, 128));
        assert_eq!(chordal_lemma(3, 10, 128), chordal_lemma(3, 10, 128));
    }
}
