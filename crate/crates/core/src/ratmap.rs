//! Rational self-maps of P^1 over Q and finite systems of them.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::LogSum;
use crate::places::{factor, parse_rational, Rational, DEFAULT_TRIAL_BOUND};
use crate::poly::{parse_poly, resultant_forms, split_fraction, Poly};
use crate::proj1::ProjPoint;

/// `φ(z) = f(z) / g(z)` in normal form: `f`, `g` coprime, coefficients jointly
/// primitive, leading coefficient of `g` positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMap {
    f: Poly,
    g: Poly,
    d: usize,
}

impl RatMap {
    /// Build and normalize `f / g` from rational coefficients in ascending order.
    pub fn new(f: &[Rational], g: &[Rational]) -> Result<RatMap> {
        let lcm = f
            .iter()
            .chain(g)
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scale = BigRational::from_integer(lcm);
        let clear = |v: &[Rational]| -> Poly {
            Poly::new(v.iter().map(|c| (c * &scale).to_integer()).collect())
        };
        RatMap::from_polys(clear(f), clear(g))
    }

    pub fn from_i64(f: &[i64], g: &[i64]) -> Result<RatMap> {
        RatMap::from_polys(Poly::from_i64(f), Poly::from_i64(g))
    }

    /// Normalize an integer pair, checking coprimality through the resultant.
    pub fn from_polys(f: Poly, g: Poly) -> Result<RatMap> {
        if g.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let d = f.degree().unwrap_or(0).max(g.degree().unwrap_or(0));
        if d == 0 {
            return Err(Error::ConstantMap);
        }
        if resultant_forms(&f, &g, d).is_zero() {
            let w = if f.is_zero() { g.primitive() } else { f.gcd(&g) };
            return Err(Error::CommonFactor {
                factor: w.to_string(),
            });
        }
        Ok(RatMap::normalize_unchecked(f, g))
    }

    /// Strip content and fix the sign; the pair must already be coprime.
    fn normalize_unchecked(f: Poly, g: Poly) -> RatMap {
        let mut c = f.content().gcd(&g.content());
        if g.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        let f = f.div_exact_scalar(&c);
        let g = g.div_exact_scalar(&c);
        let d = f.degree().unwrap_or(0).max(g.degree().unwrap_or(0));
        RatMap { f, g, d }
    }

    /// `z^d`.
    pub fn power(d: usize) -> RatMap {
        RatMap {
            f: Poly::monomial(d),
            g: Poly::one(),
            d,
        }
    }

    /// `z + a`.
    pub fn translation(a: &Rational) -> RatMap {
        RatMap::new(&[a.clone(), Rational::one()], &[Rational::one()]).expect("degree one")
    }

    /// `1 / z`.
    pub fn inversion() -> RatMap {
        RatMap::from_i64(&[1], &[0, 1]).expect("degree one")
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `[F(x, y) : G(x, y)]` with the degree-`d` homogenizations.
    pub fn eval(&self, p: &ProjPoint) -> ProjPoint {
        let x = self.f.eval_homogeneous(self.d, p.x(), p.y());
        let y = self.g.eval_homogeneous(self.d, p.x(), p.y());
        ProjPoint::normalized(x, y)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RatMap) -> RatMap {
        let fi = inner.f.clone();
        let gi = inner.g.clone();
        let gpow: Vec<Poly> = (0..=self.d)
            .scan(Poly::one(), |acc, _| {
                let cur = acc.clone();
                *acc = acc.mul(&gi);
                Some(cur)
            })
            .collect();
        let mut num = Poly::zero();
        let mut den = Poly::zero();
        let mut fpow = Poly::one();
        for i in 0..=self.d {
            let mono = fpow.mul(&gpow[self.d - i]);
            num = num.add(&mono.scale(&self.f.coeff(i)));
            den = den.add(&mono.scale(&self.g.coeff(i)));
            fpow = fpow.mul(&fi);
        }
        let out = RatMap::normalize_unchecked(num, den);
        debug_assert_eq!(out.d, self.d * inner.d);
        out
    }

    /// Largest absolute value of any coefficient.
    pub fn max_coeff(&self) -> BigUint {
        self.f
            .coeffs()
            .iter()
            .chain(self.g.coeffs())
            .map(|c| c.magnitude().clone())
            .max()
            .unwrap_or_default()
    }

    /// `h(φ) = ln max |coefficient|`.
    pub fn height(&self) -> LogSum {
        LogSum::ln(&self.max_coeff())
    }

    /// Homogeneous resultant of the normalized pair.
    pub fn resultant(&self) -> BigInt {
        resultant_forms(&self.f, &self.g, self.d)
    }

    /// `W = f' g - f g'`.
    pub fn wronskian(&self) -> Poly {
        self.f
            .derivative()
            .mul(&self.g)
            .sub(&self.f.mul(&self.g.derivative()))
    }

    /// `e_P(φ)`: the local degree of `φ` at `P`, computed as the order at 0 of
    /// `M ∘ φ ∘ L` where `L(0) = P` and `M(φ(P)) = 0`.
    pub fn ramification_index(&self, p: &ProjPoint) -> usize {
        let l = match p.affine() {
            Some(a) => RatMap::translation(&a),
            None => RatMap::inversion(),
        };
        self.ramification_index_with(p, &l, &Rational::zero())
            .expect("L(0) = P by construction")
    }

    /// `e_P(φ)` computed through a caller-chosen degree-one `L` with
    /// `L(beta) = P`.
    pub fn ramification_index_with(&self, p: &ProjPoint, l: &RatMap, beta: &Rational) -> Result<usize> {
        if l.degree() != 1 {
            return Err(Error::InvalidParameter("conjugating map must have degree 1".into()));
        }
        if &l.eval(&ProjPoint::from_rational(beta)) != p {
            return Err(Error::InvalidParameter(format!("L({beta}) is not {p}")));
        }
        let q = self.eval(p);
        let m = match q.affine() {
            Some(b) => RatMap::translation(&-b),
            None => RatMap::inversion(),
        };
        let psi = m.compose(&self.compose(l));
        let e = psi.f.root_multiplicity(beta);
        debug_assert!(e >= 1 && e <= self.d);
        Ok(e)
    }

    pub fn is_totally_ramified(&self, p: &ProjPoint) -> bool {
        self.ramification_index(p) == self.d
    }

    /// Rational critical points: rational roots of the Wronskian, plus `∞`
    /// when `e_∞ > 1`.
    pub fn rational_critical_points(&self) -> Result<Vec<ProjPoint>> {
        let mut out: Vec<ProjPoint> = rational_roots(&self.wronskian())?
            .iter()
            .map(ProjPoint::from_rational)
            .collect();
        if self.ramification_index(&ProjPoint::infinity()) > 1 {
            out.push(ProjPoint::infinity());
        }
        Ok(out)
    }
}

/// Distinct rational roots of an integer polynomial by the rational root test.
pub fn rational_roots(p: &Poly) -> Result<Vec<Rational>> {
    if p.is_zero() {
        return Err(Error::InvalidParameter("zero polynomial has every root".into()));
    }
    let z = p.order_at_zero().unwrap();
    let mut out = Vec::new();
    if z > 0 {
        out.push(Rational::zero());
    }
    let q = Poly::new(p.coeffs()[z..].to_vec());
    if q.degree() == Some(0) {
        return Ok(out);
    }
    let nums = divisors(q.coeffs()[0].magnitude())?;
    let dens = divisors(q.leading().unwrap().magnitude())?;
    let mut cands = std::collections::BTreeSet::new();
    for a in &nums {
        for b in &dens {
            for s in [1i32, -1] {
                cands.insert(BigRational::new(BigInt::from(s) * BigInt::from(a.clone()), BigInt::from(b.clone())));
            }
        }
    }
    for c in cands {
        if q.eval_rational(&c).is_zero() {
            out.push(c);
        }
    }
    Ok(out)
}

fn divisors(n: &BigUint) -> Result<Vec<BigUint>> {
    let mut out = vec![BigUint::one()];
    for (p, e) in factor(n, DEFAULT_TRIAL_BOUND)? {
        let base = out.clone();
        let mut pk = BigUint::one();
        for _ in 0..e {
            pk *= &p;
            out.extend(base.iter().map(|d| d * &pk));
        }
    }
    Ok(out)
}

fn term_count(p: &Poly) -> usize {
    p.coeffs().iter().filter(|c| !c.is_zero()).count()
}

impl fmt::Display for RatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            if term_count(p) > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.g.is_one() {
            write!(f, "{}", self.f)
        } else {
            write!(f, "{}/{}", wrap(&self.f), wrap(&self.g))
        }
    }
}

impl fmt::Debug for RatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMap({self})")
    }
}

impl FromStr for RatMap {
    type Err = Error;

    /// Parses display strings such as `"(z^2+1)/z"` or `"z^2-1/2"`.
    fn from_str(s: &str) -> Result<RatMap> {
        let (fs, gs) = match split_fraction(s) {
            // a bare rational coefficient like "z^2-1/2" has no top-level
            // parentheses around the numerator; treat it as a polynomial
            Some((a, b)) if a.starts_with('(') || b.contains('z') => (a, b),
            _ => (s.to_string(), "1".to_string()),
        };
        RatMap::new(&parse_poly(&fs)?, &parse_poly(&gs)?)
    }
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    f: Vec<String>,
    g: Vec<String>,
}

impl Serialize for RatMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs = |p: &Poly| p.coeffs().iter().map(ToString::to_string).collect();
        MapRepr {
            f: strs(&self.f),
            g: strs(&self.g),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMap {
    /// Accepts `{"f": [...], "g": [...]}` or a display string.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<RatMap, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Coeffs(MapRepr),
        }
        let parse_all = |v: &[String]| -> Result<Vec<Rational>> {
            v.iter().map(|c| parse_rational(c)).collect()
        };
        let m = match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse(),
            Repr::Coeffs(r) => parse_all(&r.f).and_then(|f| RatMap::new(&f, &parse_all(&r.g)?)),
        };
        m.map_err(serde::de::Error::custom)
    }
}

/// `F = {φ_1, ..., φ_k}` sorted by degree ascending (stable), every degree `>= 2`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "Vec<RatMap>")]
pub struct MapSystem {
    maps: Vec<RatMap>,
}

/// A JSON array of maps, or one string such as `"z^2; z^3"`.
#[derive(Deserialize)]
#[serde(untagged)]
enum SystemRepr {
    Text(String),
    Maps(Vec<RatMap>),
}

impl TryFrom<SystemRepr> for MapSystem {
    type Error = Error;

    fn try_from(r: SystemRepr) -> Result<MapSystem> {
        match r {
            SystemRepr::Text(s) => s.parse(),
            SystemRepr::Maps(maps) => MapSystem::new(maps),
        }
    }
}

impl TryFrom<Vec<RatMap>> for MapSystem {
    type Error = Error;

    fn try_from(maps: Vec<RatMap>) -> Result<MapSystem> {
        MapSystem::new(maps)
    }
}

impl From<MapSystem> for Vec<RatMap> {
    fn from(s: MapSystem) -> Vec<RatMap> {
        s.maps
    }
}

impl MapSystem {
    pub fn new(mut maps: Vec<RatMap>) -> Result<MapSystem> {
        if maps.is_empty() {
            return Err(Error::EmptySystem);
        }
        if let Some(m) = maps.iter().find(|m| m.degree() < 2) {
            return Err(Error::DegreeTooSmall(m.degree()));
        }
        maps.sort_by_key(RatMap::degree);
        Ok(MapSystem { maps })
    }

    pub fn single(map: RatMap) -> Result<MapSystem> {
        MapSystem::new(vec![map])
    }

    pub fn k(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[RatMap] {
        &self.maps
    }

    /// The map for a 1-based letter.
    pub fn map(&self, letter: usize) -> Result<&RatMap> {
        letter
            .checked_sub(1)
            .and_then(|i| self.maps.get(i))
            .ok_or(Error::BadLetter {
                letter,
                k: self.k(),
            })
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.maps.iter().map(RatMap::degree).collect()
    }

    pub fn d_min(&self) -> usize {
        self.maps[0].degree()
    }

    pub fn d_max(&self) -> usize {
        self.maps[self.k() - 1].degree()
    }

    /// `h(F) = max_i h(φ_i)`.
    pub fn height(&self) -> LogSum {
        let m = self.maps.iter().map(RatMap::max_coeff).max().unwrap();
        LogSum::ln(&m)
    }

    /// `Φ = φ_{w_n} ∘ ... ∘ φ_{w_1}` for the letters `w_1 ... w_n`.
    pub fn compose_word(&self, letters: &[usize]) -> Result<Option<RatMap>> {
        let mut acc: Option<RatMap> = None;
        for &l in letters {
            let m = self.map(l)?;
            acc = Some(match acc {
                None => m.clone(),
                Some(inner) => m.compose(&inner),
            });
        }
        Ok(acc)
    }

    /// `Φ(P)` evaluated pointwise along the letters.
    pub fn eval_word(&self, letters: &[usize], p: &ProjPoint) -> Result<ProjPoint> {
        let mut x = p.clone();
        for &l in letters {
            x = self.map(l)?.eval(&x);
        }
        Ok(x)
    }
}

impl FromStr for MapSystem {
    type Err = Error;

    /// A JSON array of maps or a `;`-separated list of display strings.
    fn from_str(s: &str) -> Result<MapSystem> {
        if s.trim_start().starts_with('[') {
            return Ok(serde_json::from_str(s)?);
        }
        MapSystem::new(s.split(';').map(str::parse).collect::<Result<_>>()?)
    }
}

impl fmt::Display for MapSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.maps.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Normal-form map from rational coefficient lists; alias used by configs.
pub fn make_map(f: &[Rational], g: &[Rational]) -> Result<RatMap> {
    RatMap::new(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> RatMap {
        s.parse().unwrap()
    }

    fn pt(s: &str) -> ProjPoint {
        s.parse().unwrap()
    }

    #[test]
    fn make_map_examples() {
        let sq = RatMap::from_i64(&[0, 0, 1], &[1]).unwrap();
        assert_eq!(sq.degree(), 2);
        assert_eq!(sq, m("z^2"));
        assert_eq!(RatMap::from_i64(&[2, 2], &[2]).unwrap(), m("z+1"));
        match RatMap::from_i64(&[-1, 0, 1], &[-1, 1]) {
            Err(Error::CommonFactor { factor }) => assert_eq!(factor, "z-1"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(RatMap::from_i64(&[1], &[]), Err(Error::ZeroDenominator)));
        assert!(matches!(RatMap::from_i64(&[3], &[5]), Err(Error::ConstantMap)));
        // sign canonicalization on g
        let neg = RatMap::from_i64(&[1], &[0, -2]).unwrap();
        assert_eq!(neg.g().coeffs(), &[BigInt::zero(), BigInt::from(2)]);
        assert_eq!(neg.f().coeffs(), &[BigInt::from(-1)]);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(m("z^2").eval(&pt("2")), pt("4"));
        assert_eq!(m("1/z").eval(&pt("0")), ProjPoint::infinity());
        assert_eq!(m("(z^2+1)/z").eval(&ProjPoint::infinity()), ProjPoint::infinity());
        assert_eq!(m("(z^2-1)/(z^2+1)").eval(&pt("2")), pt("3/5"));
    }

    #[test]
    fn compose_examples() {
        assert_eq!(m("z^2").compose(&m("z^3")), m("z^6"));
        assert_eq!(m("1/z").compose(&m("1/z")), m("z"));
        assert_eq!(m("z^2+1").compose(&m("z+1")), m("z^2+2z+2"));
    }

    #[test]
    fn height_examples() {
        assert!(m("z^2").height().is_trivially_zero());
        let h = m("(3z^2+1)/(z-5)");
        assert_eq!(h.height(), LogSum::ln(&BigUint::from(5u32)));
        let sys = MapSystem::new(vec![m("z^2"), h]).unwrap();
        assert_eq!(sys.height(), LogSum::ln(&BigUint::from(5u32)));
    }

    #[test]
    fn ramification_examples() {
        assert_eq!(m("z^2").ramification_index(&pt("0")), 2);
        assert_eq!(m("z^2").ramification_index(&pt("1")), 1);
        assert_eq!(m("z^2+3").ramification_index(&ProjPoint::infinity()), 2);
        assert!(m("z^2").is_totally_ramified(&pt("0")));
        assert!(!m("z^2").is_totally_ramified(&pt("1")));
        assert!(!m("(z^2+1)/z").is_totally_ramified(&ProjPoint::infinity()));
        assert_eq!(m("1/z^2").ramification_index(&pt("0")), 2);
        assert_eq!(m("(z^3+1)/(z^2-2z+1)").ramification_index(&pt("1")), 2);
    }

    #[test]
    fn ramification_independent_of_conjugation() {
        // L(z) = 1/(z-1) sends 1 to ∞ and 2 to 1
        let l = m("1/(z-1)");
        let phi = m("(z^2+3)/(2z-1)");
        let inf = ProjPoint::infinity();
        let one = Rational::one();
        assert_eq!(
            phi.ramification_index_with(&inf, &l, &one).unwrap(),
            phi.ramification_index(&inf)
        );
        let cube = m("z^3");
        let two = Rational::from_integer(2.into());
        assert_eq!(cube.ramification_index_with(&pt("1"), &l, &two).unwrap(), 1);
        assert_eq!(cube.ramification_index_with(&inf, &l, &one).unwrap(), 3);
        assert!(cube.ramification_index_with(&pt("0"), &l, &one).is_err());
    }

    #[test]
    fn critical_points_of_power_map() {
        let cps = m("z^3").rational_critical_points().unwrap();
        assert_eq!(cps, vec![pt("0"), ProjPoint::infinity()]);
        let total: usize = cps.iter().map(|p| m("z^3").ramification_index(p) - 1).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn display_and_json() {
        assert_eq!(m("(z^2+1)/z").to_string(), "(z^2+1)/z");
        assert_eq!(m("1/z^2").to_string(), "1/z^2");
        assert_eq!(m("(2z^2-1)/2").to_string(), "(2z^2-1)/2");
        assert_eq!(m("z^2-1/2"), m("(2z^2-1)/2"));
        let json = serde_json::to_string(&m("(z^2+1)/z")).unwrap();
        assert_eq!(json, r#"{"f":["1","0","1"],"g":["0","1"]}"#);
        let back: RatMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m("(z^2+1)/z"));
        let sys: MapSystem = serde_json::from_str(r#"["z^3", {"f":["0","0","1"],"g":["1"]}]"#).unwrap();
        assert_eq!(sys.degrees(), vec![2, 3]);
        assert!(serde_json::from_str::<MapSystem>(r#"["z+1"]"#).is_err());
    }

    #[test]
    fn system_letters() {
        let sys: MapSystem = "z^3; z^2".parse().unwrap();
        assert_eq!(sys.map(1).unwrap(), &m("z^2"));
        assert!(matches!(sys.map(3), Err(Error::BadLetter { letter: 3, k: 2 })));
        let phi = sys.compose_word(&[1, 2]).unwrap().unwrap();
        assert_eq!(phi, m("z^6"));
        assert_eq!(sys.eval_word(&[2, 1], &pt("2")).unwrap(), pt("64"));
    }
}
