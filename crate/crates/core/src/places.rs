//! Places of Q, their absolute values, and S-integrality.
//!
//! Finite-place quantities stay exact as `(valuation, prime)` pairs inside a
//! [`LogSum`]; nothing is rounded until a report asks for a float.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::LogSum;

pub type Rational = BigRational;

/// Default trial-division bound used by [`factor`].
pub const DEFAULT_TRIAL_BOUND: u64 = 100_000;

/// Parse `"a/b"` or `"a"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let q = match t.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| Error::parse("rational", s))?;
            let b: BigInt = b.trim().parse().map_err(|_| Error::parse("rational", s))?;
            if b.is_zero() {
                return Err(Error::parse("rational", s));
            }
            BigRational::new(a, b)
        }
        None => BigRational::from_integer(t.parse().map_err(|_| Error::parse("rational", s))?),
    };
    Ok(q)
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A place of Q: the archimedean place or a p-adic place.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinite,
    Finite(BigUint),
}

impl Place {
    /// A p-adic place; `p` must be prime.
    pub fn finite<T: Into<BigUint>>(p: T) -> Result<Place> {
        let p = p.into();
        if !is_probable_prime(&p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Place::Finite(p))
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Infinite)
    }

    /// `[Q_v : Q_p] / [Q : Q] = 1` for every place of Q.
    pub fn local_degree(&self) -> u32 {
        1
    }

    /// `l_v = 2` at the archimedean place, 1 otherwise.
    pub fn lv(&self) -> u32 {
        if self.is_archimedean() {
            2
        } else {
            1
        }
    }

    pub fn prime(&self) -> Option<&BigUint> {
        match self {
            Place::Infinite => None,
            Place::Finite(p) => Some(p),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => write!(f, "inf"),
            Place::Finite(p) => write!(f, "p{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        let t = s.trim();
        if t == "inf" {
            return Ok(Place::Infinite);
        }
        let p: BigUint = t
            .strip_prefix('p')
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| Error::parse("place", s))?;
        Place::finite(p)
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Place, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite set of places, serialized as a JSON array such as `["inf", "p2"]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlaceSet {
    places: BTreeSet<Place>,
}

impl PlaceSet {
    pub fn new<I: IntoIterator<Item = Place>>(places: I) -> PlaceSet {
        PlaceSet {
            places: places.into_iter().collect(),
        }
    }

    /// `{inf}`
    pub fn infinite_only() -> PlaceSet {
        PlaceSet::new([Place::Infinite])
    }

    /// `{inf} ∪ {p : p in primes}`
    pub fn with_primes(primes: &[u64]) -> Result<PlaceSet> {
        let mut s = PlaceSet::infinite_only();
        for &p in primes {
            s.places.insert(Place::finite(p)?);
        }
        Ok(s)
    }

    pub fn contains(&self, v: &Place) -> bool {
        self.places.contains(v)
    }

    pub fn contains_infinite(&self) -> bool {
        self.contains(&Place::Infinite)
    }

    pub fn insert(&mut self, v: Place) {
        self.places.insert(v);
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Place> {
        self.places.iter()
    }

    pub fn finite_primes(&self) -> impl Iterator<Item = &BigUint> {
        self.places.iter().filter_map(Place::prime)
    }
}

impl FromStr for PlaceSet {
    type Err = Error;

    /// Accepts a JSON array (`["inf","p3"]`) or a comma-separated list.
    fn from_str(s: &str) -> Result<PlaceSet> {
        let t = s.trim();
        if t.starts_with('[') {
            return serde_json::from_str(t).map_err(|_| Error::parse("place set", s));
        }
        t.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Place>>>()
            .map(PlaceSet::new)
    }
}

/// `log |x|_v`, or minus infinity at `x = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbsLog {
    NegInfinity,
    Finite(LogSum),
}

impl AbsLog {
    pub fn finite(&self) -> Option<&LogSum> {
        match self {
            AbsLog::NegInfinity => None,
            AbsLog::Finite(s) => Some(s),
        }
    }
}

/// Multiplicity of `p` in `n` (`n > 0`).
pub fn valuation_of_uint(n: &BigUint, p: &BigUint) -> u64 {
    debug_assert!(!n.is_zero());
    if p == &BigUint::from(2u32) {
        return n.trailing_zeros().unwrap_or(0);
    }
    let mut count = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return count;
        }
        m = q;
        count += 1;
    }
}

/// `v_p(x) = v_p(numerator) - v_p(denominator)`.
pub fn padic_valuation(x: &Rational, p: &BigUint) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let num = valuation_of_uint(x.numer().magnitude(), p) as i64;
    let den = valuation_of_uint(x.denom().magnitude(), p) as i64;
    Ok(num - den)
}

/// `log |x|_v` exactly: `ln |x|` at infinity, `-v_p(x) ln p` at `p`.
pub fn abs_log(x: &Rational, v: &Place) -> AbsLog {
    if x.is_zero() {
        return AbsLog::NegInfinity;
    }
    match v {
        Place::Infinite => AbsLog::Finite(LogSum::ln_rational(&x.abs())),
        Place::Finite(p) => {
            let val = padic_valuation(x, p).expect("nonzero");
            AbsLog::Finite(LogSum::term(BigRational::from_integer((-val).into()), p))
        }
    }
}

/// True iff every prime dividing the denominator of `x` lies in `S`.
///
/// No factorization is needed: the S-primes are stripped from the denominator
/// and the remainder must be 1.
pub fn is_s_integer(x: &Rational, s: &PlaceSet) -> bool {
    let mut den = x.denom().magnitude().clone();
    for p in s.finite_primes() {
        if den.is_one() {
            break;
        }
        while (&den % p).is_zero() {
            den /= p;
        }
    }
    den.is_one()
}

const MR_BASES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Miller–Rabin with the first 20 prime bases. Deterministic for
/// `n < 3.3 * 10^24`; a strong probable-prime test above that.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigUint::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> (s as usize);
    'witness: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division up to `trial_bound`, with the
/// remaining cofactor accepted only if it passes [`is_probable_prime`].
pub fn factor(n: &BigUint, trial_bound: u64) -> Result<Vec<(BigUint, u32)>> {
    assert!(!n.is_zero(), "factor of zero");
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut m = n.clone();
    let mut d = 2u64;
    while d <= trial_bound && !m.is_one() {
        if let Some(small) = m.to_u128() {
            // native arithmetic once the cofactor fits
            let (rest, next) = trial_divide_u128(small, d, trial_bound, &mut out);
            m = BigUint::from(rest);
            d = next;
            break;
        }
        if (&m % d).is_zero() {
            let mut e = 0u32;
            while (&m % d).is_zero() {
                m /= d;
                e += 1;
            }
            out.push((BigUint::from(d), e));
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    if !m.is_one() {
        let covered = m
            .to_u128()
            .is_some_and(|v| v < (d as u128) * (d as u128));
        if covered || is_probable_prime(&m) {
            out.push((m, 1));
        } else {
            return Err(Error::Unfactored {
                value: n.clone(),
                cofactor: m,
                bound: trial_bound,
            });
        }
    }
    Ok(out)
}

/// Trial division of `m` by `d, d + 2, ...` up to `bound` or `sqrt(m)`;
/// returns the cofactor and the first untried divisor.
fn trial_divide_u128(mut m: u128, mut d: u64, bound: u64, out: &mut Vec<(BigUint, u32)>) -> (u128, u64) {
    while d <= bound && m > 1 {
        let dd = d as u128;
        if dd * dd > m {
            break;
        }
        if m % dd == 0 {
            let mut e = 0u32;
            while m % dd == 0 {
                m /= dd;
                e += 1;
            }
            out.push((BigUint::from(d), e));
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    (m, d)
}

/// Every place at which `x` is not a unit, plus the infinite place.
pub fn support(x: &Rational, trial_bound: u64) -> Result<Vec<Place>> {
    let mut places = vec![Place::Infinite];
    let mut primes = BTreeSet::new();
    for n in [x.numer().magnitude(), x.denom().magnitude()] {
        if n.is_zero() {
            continue;
        }
        for (p, _) in factor(n, trial_bound)? {
            primes.insert(p);
        }
    }
    places.extend(primes.into_iter().map(Place::Finite));
    Ok(places)
}
