//! Explicit constants and count bounds: ramification constants, the threshold
//! `m`, the composition height bound and the Γ-set and census bounds.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{Dyadic, Interval, LogSum};
use crate::places::{format_rational, parse_rational, PlaceSet, Rational};
use crate::ratmap::MapSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RamificationMode {
    /// Orbit free of repeated points: a bound constant in `m`.
    DistinctOrbit,
    /// No orbit point totally ramified: a bound decaying like `κ_2^m`.
    NotTotallyRamified,
}

/// `e_P(Φ^m) <= κ_1 κ_2^m deg Φ^m`, with `κ_1 = exp(ln_kappa1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationConstants {
    #[serde(serialize_with = "ser_rational")]
    pub ln_kappa1: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub kappa2: Rational,
    pub mode: RamificationMode,
}

impl RamificationConstants {
    pub fn kappa1(&self, prec: u32) -> Interval {
        exp_int(&self.ln_kappa1, prec)
    }
}

/// `e^q` for an integer `q`, enclosed by `2.718281828459045 < e < 2.718281828459046`.
fn exp_int(q: &Rational, prec: u32) -> Interval {
    let k = q.to_integer().to_i32().expect("small exponent");
    assert!(q.is_integer(), "integral exponent");
    let lo = Interval::from_rational(&BigRational::new(2_718_281_828_459_045u64.into(), 10u64.pow(15).into()), prec);
    let hi = Interval::from_rational(&BigRational::new(2_718_281_828_459_046u64.into(), 10u64.pow(15).into()), prec);
    let e = Interval::new(lo.lo().clone(), hi.hi().clone(), prec);
    let mut acc = Interval::from_int(1, prec);
    for _ in 0..k.unsigned_abs() {
        acc = acc.mul(&e);
    }
    if k < 0 {
        Interval::from_int(1, prec).div(&acc)
    } else {
        acc
    }
}

pub fn kappa_constants(system: &MapSystem, mode: RamificationMode) -> RamificationConstants {
    match mode {
        RamificationMode::NotTotallyRamified => RamificationConstants {
            ln_kappa1: Rational::zero(),
            kappa2: Rational::one() - Rational::new(BigInt::one(), system.d_max().into()),
            mode,
        },
        RamificationMode::DistinctOrbit => {
            let s: usize = system.degrees().iter().map(|d| 2 * d - 2).sum();
            RamificationConstants {
                ln_kappa1: Rational::from_integer(s.into()),
                kappa2: Rational::new(BigInt::one(), system.d_min().into()),
                mode,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MChoice {
    /// Least `m >= 1` with `κ_1 κ_2^m <= ε / 5`.
    pub m: u32,
    /// `(log(5 κ_1) + log(1/ε)) / log(1/κ_2) + 1`, upper end.
    pub small_case_bound: f64,
}

pub fn choose_m(eps: &Rational, kappa: &RamificationConstants, prec: u32) -> Result<MChoice> {
    crate::integrality::check_epsilon(eps)?;
    let k2 = &kappa.kappa2;
    if !k2.is_positive() || k2 >= &Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "κ_2 = {} must lie in (0, 1)",
            format_rational(k2)
        )));
    }
    let target = eps / Rational::from_integer(5.into());
    let mut m = 1u32;
    loop {
        let fits = if kappa.ln_kappa1.is_zero() {
            Pow::pow(k2, m) <= target
        } else {
            // ln κ_1 + m ln κ_2 - ln(ε/5) <= 0
            let lhs = Interval::from_rational(&kappa.ln_kappa1, prec)
                .add(&Interval::ln_rational(k2, prec).scale_int(&BigInt::from(m)))
                .sub(&Interval::ln_rational(&target, prec));
            lhs.hi().signum() <= 0
        };
        if fits {
            break;
        }
        m += 1;
    }
    let num = Interval::from_rational(&kappa.ln_kappa1, prec)
        .add(&Interval::ln_rational(&Rational::from_integer(5.into()), prec))
        .add(&Interval::ln_rational(&eps.recip(), prec));
    let den = Interval::ln_rational(&k2.recip(), prec);
    let small = num.div(&den).add(&Interval::from_int(1, prec));
    Ok(MChoice {
        m,
        small_case_bound: small.hi_f64(),
    })
}

/// `((d^n - 1)/(d - 1)) h(F) + d^2 ((d^(n-1) - 1)/(d - 1)) log 8`, exactly.
pub fn prop33_bound(n: u32, d: u64, h_f: &LogSum) -> Result<LogSum> {
    if n == 0 || d < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 1 and d >= 2, got n = {n}, d = {d}")));
    }
    let d = BigInt::from(d);
    let geo = |k: u32| Rational::new(Pow::pow(&d, k) - 1, &d - 1);
    let first = h_f.scale(&geo(n));
    let second = LogSum::term(geo(n - 1) * Rational::from_integer(&d * &d), &BigUint::from(8u32));
    Ok(first.add(&second))
}

pub(crate) fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

/// A positive rational from a JSON number or string such as `"5/2"`.
pub(crate) fn de_rational<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Float(f64),
        Text(String),
    }
    let q = match Repr::deserialize(d)? {
        Repr::Int(i) => Rational::from_integer(i.into()),
        Repr::Float(f) => Rational::from_float(f).ok_or_else(|| serde::de::Error::custom("non-finite number"))?,
        Repr::Text(s) => parse_rational(&s).map_err(serde::de::Error::custom)?,
    };
    Ok(q)
}

fn de_rational_vec<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
    #[derive(Deserialize)]
    struct W(#[serde(deserialize_with = "de_rational")] Rational);
    Ok(Vec::<W>::deserialize(d)?.into_iter().map(|w| w.0).collect())
}

fn ser_rational_vec<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<String> = v.iter().map(format_rational).collect();
    strs.serialize(s)
}

/// Constants the bounds depend on but which are only known to exist: the
/// Roth-type counts `r_1, r_2`, the exponent `μ`, `c_1 ... c_11` and `γ`.
/// The defaults are one valid instantiation for experiments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundParameters {
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub r1: Rational,
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub r2: Rational,
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub mu: Rational,
    /// `c_1 ... c_11`.
    #[serde(serialize_with = "ser_rational_vec", deserialize_with = "de_rational_vec")]
    pub c: Vec<Rational>,
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub gamma: Rational,
}

impl Default for BoundParameters {
    fn default() -> BoundParameters {
        BoundParameters {
            r1: Rational::one(),
            r2: Rational::one(),
            mu: Rational::new(5.into(), 2.into()),
            c: vec![Rational::one(); 11],
            gamma: Rational::from_integer(4.into()),
        }
    }
}

impl BoundParameters {
    pub fn validate(&self) -> Result<()> {
        let two = Rational::from_integer(2.into());
        let five = Rational::from_integer(5.into());
        if self.mu <= two || self.mu >= five {
            return Err(Error::InvalidParameter(format!(
                "μ = {} must lie in (2, 5)",
                format_rational(&self.mu)
            )));
        }
        if self.c.len() != 11 {
            return Err(Error::InvalidParameter(format!("expected 11 constants c_i, got {}", self.c.len())));
        }
        let all = [&self.r1, &self.r2, &self.gamma].into_iter().chain(self.c.iter());
        if let Some(bad) = all.into_iter().find(|q| !q.is_positive()) {
            return Err(Error::InvalidParameter(format!(
                "bound parameters must be positive, got {}",
                format_rational(bad)
            )));
        }
        Ok(())
    }

    /// `c_i`, 1-based.
    pub fn ci(&self, i: usize) -> &Rational {
        &self.c[i - 1]
    }
}

fn dyadic_to_rational(x: &Dyadic) -> Rational {
    let e = x.exponent();
    let m = x.mantissa().clone();
    if e >= 0 {
        Rational::from_integer(m << e as usize)
    } else {
        Rational::new(m, BigInt::one() << (-e) as usize)
    }
}

/// `log⁺_b(t) = max(0, log t / log b)`.
#[derive(Clone, Debug, PartialEq)]
pub enum LogPlus {
    /// `t <= 1`: exactly zero.
    Zero,
    Positive(Interval),
}

impl LogPlus {
    /// Upper end as a float (0 when exactly zero).
    pub fn upper_f64(&self) -> f64 {
        match self {
            LogPlus::Zero => 0.0,
            LogPlus::Positive(iv) => iv.hi_f64(),
        }
    }

    pub fn interval(&self, prec: u32) -> Interval {
        match self {
            LogPlus::Zero => Interval::zero(prec),
            LogPlus::Positive(iv) => iv.clone(),
        }
    }
}

/// `log⁺_base(t)` at the exact rational `t`.
pub fn log_plus(t: &Rational, base: u64, prec: u32) -> LogPlus {
    if t <= &Rational::one() {
        return LogPlus::Zero;
    }
    let num = Interval::ln_rational(t, prec);
    let den = Interval::ln_int(&BigUint::from(base), prec);
    LogPlus::Positive(num.div(&den).max(&Interval::zero(prec)))
}

/// Conservative `log⁺_base(num / den)`: upper end of `num`, lower end of `den`.
fn log_plus_ratio(num: &Interval, den: &Interval, base: u64, prec: u32) -> Result<LogPlus> {
    if den.lo().signum() <= 0 {
        return Err(Error::NotWandering(format!("[{}, {}]", den.lo_f64(), den.hi_f64())));
    }
    let t = dyadic_to_rational(num.hi()) / dyadic_to_rational(den.lo());
    Ok(log_plus(&t, base, prec))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem52Bound {
    /// `4^{#S} γ`: members beyond `max_n`.
    pub tail_count: f64,
    /// Largest `n` that can lie in Γ outside the tail.
    pub max_n: f64,
    /// `log⁺_{d_1}((ĥ_F(A) + h(F)) / ĥ_Φ(P))`.
    pub log_term: f64,
    /// `n` threshold from the Roth step.
    pub t2: f64,
    /// `n` threshold from the height comparison after `m` steps.
    pub t3: f64,
    pub m: u32,
    /// `tail_count + floor(max_n) + 1`.
    pub total: f64,
    pub params: BoundParameters,
}

/// Bound on `#Γ_{Φ,S}(A, P, ε)` from heights and the parameter set.
///
/// `max_n = max(γ + L, T_2, T_3)` where `L = log⁺_{d_1}((ĥ_F(A) + h(F)) / ĥ_Φ(P))`,
/// `T_2 = log⁺_{d_1}(c_10 (ĥ_F(A) + h(F) + 1) / (ε (1 - μ/5) ĥ_Φ(P)))` and
/// `T_3 = m + log⁺_{d_1}((r_2 max(c_5 ĥ_F(A) + c_3 h(F) + c_4, 1) + c_3 h(F) + c_4) / ĥ_Φ(P))`.
#[allow(clippy::too_many_arguments)]
pub fn theorem52_bound(
    system: &MapSystem,
    s: &PlaceSet,
    eps: &Rational,
    hhat_a: &Interval,
    h_f: &Interval,
    hhat_p: &Interval,
    params: &BoundParameters,
    prec: u32,
) -> Result<Theorem52Bound> {
    params.validate()?;
    crate::integrality::check_epsilon(eps)?;
    if hhat_p.lo().signum() <= 0 {
        return Err(Error::NotWandering(format!("[{}, {}]", hhat_p.lo_f64(), hhat_p.hi_f64())));
    }
    let d1 = system.d_min() as u64;
    let r = |q: &Rational| Interval::from_rational(q, prec);
    let hi = |iv: &Interval| Interval::point(iv.hi().clone(), prec);
    let (a, f) = (hi(hhat_a), hi(h_f));
    let one = Interval::from_int(1, prec);

    let log_term = log_plus_ratio(&a.add(&f), hhat_p, d1, prec)?;

    let mu_factor = Rational::one() - &params.mu / Rational::from_integer(5.into());
    let t2_num = r(params.ci(10)).mul(&a.add(&f).add(&one));
    let t2_den = hhat_p.scale_rational(&(eps * &mu_factor));
    let t2 = log_plus_ratio(&t2_num, &t2_den, d1, prec)?;

    let kappa = kappa_constants(system, RamificationMode::NotTotallyRamified);
    let m = choose_m(eps, &kappa, prec)?.m;
    let c3f_c4 = r(params.ci(3)).mul(&f).add(&r(params.ci(4)));
    let inner = r(params.ci(5)).mul(&a).add(&c3f_c4).max(&one);
    let t3_num = r(&params.r2).mul(&inner).add(&c3f_c4);
    let t3 = log_plus_ratio(&t3_num, hhat_p, d1, prec)?;

    let gamma = params.gamma.to_f64().unwrap_or(f64::MAX);
    let four_s = 4f64.powi(s.len() as i32);
    let tail_count = four_s * gamma;
    let t3_value = m as f64 + t3.upper_f64();
    let max_n = (gamma + log_term.upper_f64()).max(t2.upper_f64()).max(t3_value);
    Ok(Theorem52Bound {
        tail_count,
        max_n,
        log_term: log_term.upper_f64(),
        t2: t2.upper_f64(),
        t3: t3_value,
        m,
        total: tail_count + max_n.floor() + 1.0,
        params: params.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorollaryBounds {
    /// `4^{#S} γ + log⁺_{d_1}(h(F) / ĥ^min)`.
    pub cor54: f64,
    /// `M = ⌈γ + log⁺_{d_1}(h(F) / ĥ^min)⌉ + 1`.
    pub cor55_m: u64,
    /// `(k^M - 1) / (k - 1)`, or `M` when `k = 1`.
    #[serde(serialize_with = "ser_biguint")]
    pub cor55_count: BigUint,
    pub log_term: f64,
    pub params: BoundParameters,
}

fn ser_biguint<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

/// Count bounds for S-integral orbit points; `ĥ^min` enters through its lower end.
pub fn corollary_bounds(system: &MapSystem, s: &PlaceSet, h_f: &Interval, hhat_min: &Interval, params: &BoundParameters, prec: u32) -> Result<CorollaryBounds> {
    params.validate()?;
    let d1 = system.d_min() as u64;
    let lp = log_plus_ratio(&Interval::point(h_f.hi().clone(), prec), hhat_min, d1, prec)?;
    let four_s = 4f64.powi(s.len() as i32);
    let gamma_f = params.gamma.to_f64().unwrap_or(f64::MAX);
    let cor54 = four_s * gamma_f + lp.upper_f64();
    let ceil = match &lp {
        LogPlus::Zero => params.gamma.ceil().to_integer(),
        LogPlus::Positive(iv) => {
            let upper = Interval::from_rational(&params.gamma, prec).add(iv);
            dyadic_to_rational(upper.hi()).ceil().to_integer()
        }
    };
    let m = ceil.to_u64().ok_or_else(|| Error::InvalidParameter("M overflows".into()))? + 1;
    let k = BigUint::from(system.k());
    let count = if k.is_one() {
        BigUint::from(m)
    } else {
        (Pow::pow(&k, m) - 1u32).div_floor(&(&k - 1u32))
    };
    Ok(CorollaryBounds {
        cor54,
        cor55_m: m,
        cor55_count: count,
        log_term: lp.upper_f64(),
        params: params.clone(),
    })
}

/// `Π e_i <= κ_1 κ_2^m deg Φ^m` for the given ramification indices and degrees.
pub fn lemma44_holds(indices: &[usize], degrees: &[usize], d_max: usize) -> bool {
    let m = indices.len() as u32;
    let e: BigUint = indices.iter().map(|&e| BigUint::from(e)).product();
    let deg: BigUint = degrees.iter().map(|&d| BigUint::from(d)).product();
    // e <= ((d_max - 1)/d_max)^m deg  <=>  e d_max^m <= (d_max - 1)^m deg
    let lhs = e * Pow::pow(BigUint::from(d_max), m);
    let rhs = Pow::pow(BigUint::from(d_max - 1), m) * deg;
    lhs.cmp(&rhs) != Ordering::Greater
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(s: &str) -> MapSystem {
        s.parse().unwrap()
    }

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn kappa_examples() {
        let k = kappa_constants(&sys("z^2; z^3"), RamificationMode::NotTotallyRamified);
        assert_eq!(k.ln_kappa1, Rational::zero());
        assert_eq!(k.kappa2, q("2/3"));
        let k = kappa_constants(&sys("z^2; z^2+1"), RamificationMode::NotTotallyRamified);
        assert_eq!(k.kappa2, q("1/2"));
        let k = kappa_constants(&sys("z^2; z^3"), RamificationMode::DistinctOrbit);
        assert_eq!(k.ln_kappa1, q("6"));
        assert!(k.kappa1(64).contains(&Dyadic::from_f64(403.428_793_492_735_1)));
    }

    fn nr(k2: &str) -> RamificationConstants {
        RamificationConstants {
            ln_kappa1: Rational::zero(),
            kappa2: q(k2),
            mode: RamificationMode::NotTotallyRamified,
        }
    }

    #[test]
    fn choose_m_examples() {
        assert_eq!(choose_m(&q("1/2"), &nr("1/2"), 64).unwrap().m, 4);
        assert_eq!(choose_m(&q("1"), &nr("1/2"), 64).unwrap().m, 3);
        assert_eq!(choose_m(&q("1"), &nr("9/10"), 64).unwrap().m, 16);
        assert_eq!(choose_m(&q("1/2"), &nr("2/3"), 64).unwrap().m, 6);
        assert!(choose_m(&q("1/2"), &nr("1"), 64).is_err());
        // the small-case bound is at least m - 1 by construction
        let c = choose_m(&q("1/2"), &nr("1/2"), 64).unwrap();
        assert!(c.small_case_bound >= 4.0);
    }

    #[test]
    fn prop33_examples() {
        let h = LogSum::ln(&BigUint::from(5u32));
        assert_eq!(prop33_bound(1, 2, &h).unwrap(), h);
        let ln8 = LogSum::ln(&BigUint::from(8u32));
        assert_eq!(prop33_bound(2, 2, &h).unwrap(), h.scale_int(3).add(&ln8.scale_int(4)));
        assert_eq!(prop33_bound(3, 2, &h).unwrap(), h.scale_int(7).add(&ln8.scale_int(12)));
    }

    fn pt(x: f64) -> Interval {
        Interval::from_f64(x, 128)
    }

    #[test]
    fn theorem52_structure() {
        let f = sys("z^2; z^3");
        let p = BoundParameters::default();
        let one = PlaceSet::infinite_only();
        let two: PlaceSet = "inf,p2".parse().unwrap();
        let b1 = theorem52_bound(&f, &one, &q("1/2"), &pt(0.0), &pt(0.0), &pt(2.0), &p, 128).unwrap();
        assert_eq!(b1.log_term, 0.0);
        assert_eq!(b1.tail_count, 16.0);
        let b2 = theorem52_bound(&f, &two, &q("1/2"), &pt(0.0), &pt(0.0), &pt(2.0), &p, 128).unwrap();
        assert_eq!(b2.tail_count, 4.0 * b1.tail_count);
        assert!(theorem52_bound(&f, &one, &q("1/2"), &pt(0.0), &pt(0.0), &pt(0.0), &p, 128).is_err());
        let bad = BoundParameters {
            mu: q("5"),
            ..BoundParameters::default()
        };
        assert!(theorem52_bound(&f, &one, &q("1/2"), &pt(0.0), &pt(0.0), &pt(1.0), &bad, 128).is_err());
    }

    #[test]
    fn corollary_examples() {
        let p = BoundParameters::default();
        let s = PlaceSet::infinite_only();
        let c = corollary_bounds(&sys("z^2; z^3"), &s, &Interval::zero(128), &pt(0.5), &p, 128).unwrap();
        assert_eq!(c.cor55_m, 5);
        assert_eq!(c.cor55_count, BigUint::from(31u32));
        assert_eq!(c.cor54, 16.0);
        let c = corollary_bounds(&sys("z^2"), &s, &Interval::zero(128), &pt(0.5), &p, 128).unwrap();
        assert_eq!(c.cor55_count, BigUint::from(c.cor55_m));
        assert!(corollary_bounds(&sys("z^2"), &s, &Interval::zero(128), &Interval::zero(128), &p, 128).is_err());
    }

    #[test]
    fn parameters_round_trip() {
        let p = BoundParameters::default();
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains(r#""mu":"5/2""#));
        let back: BoundParameters = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        let partial: BoundParameters = serde_json::from_str(r#"{"gamma": 2.5, "r1": 3}"#).unwrap();
        assert_eq!(partial.gamma, q("5/2"));
        assert_eq!(partial.r1, q("3"));
        assert_eq!(partial.mu, q("5/2"));
    }

    #[test]
    fn lemma44_check() {
        // z^2 at a non-critical point: e = 1 each step
        assert!(lemma44_holds(&[1, 1, 1], &[2, 2, 2], 2));
        // totally ramified every step violates the decay
        assert!(!lemma44_holds(&[2, 2], &[2, 2], 2));
    }
}
