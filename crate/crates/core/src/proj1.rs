//! Points of P^1(Q), the naive height, and the chordal metric at each place.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{Interval, LogSum};
use crate::places::{format_rational, parse_rational, valuation_of_uint, Place, Rational};

/// A point `[x : y]` of P^1(Q) in normal form: `gcd(x, y) = 1` and either
/// `y > 0` or the point is `[1 : 0]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    x: BigInt,
    y: BigInt,
}

impl ProjPoint {
    pub fn new<X: Into<BigInt>, Y: Into<BigInt>>(x: X, y: Y) -> Result<ProjPoint> {
        let (x, y) = (x.into(), y.into());
        if x.is_zero() && y.is_zero() {
            return Err(Error::ZeroPoint);
        }
        Ok(ProjPoint::normalized(x, y))
    }

    /// Normalize a nonzero pair; callers guarantee `(x, y) != (0, 0)`.
    pub(crate) fn normalized(x: BigInt, y: BigInt) -> ProjPoint {
        debug_assert!(!(x.is_zero() && y.is_zero()));
        if y.is_zero() {
            return ProjPoint::infinity();
        }
        let g = x.gcd(&y);
        let (mut x, mut y) = (x / &g, y / &g);
        if y.is_negative() {
            x = -x;
            y = -y;
        }
        ProjPoint { x, y }
    }

    pub fn infinity() -> ProjPoint {
        ProjPoint {
            x: BigInt::one(),
            y: BigInt::zero(),
        }
    }

    pub fn from_rational(q: &Rational) -> ProjPoint {
        ProjPoint {
            x: q.numer().clone(),
            y: q.denom().clone(),
        }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> ProjPoint {
        ProjPoint {
            x: n.into(),
            y: BigInt::one(),
        }
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    /// The affine coordinate `z(P) = x / y`, or `None` at infinity.
    pub fn affine(&self) -> Option<Rational> {
        if self.is_infinity() {
            None
        } else {
            Some(BigRational::new_raw(self.x.clone(), self.y.clone()))
        }
    }

    /// `max(|x|, |y|)` of the normalized coordinates.
    pub fn max_coord(&self) -> BigUint {
        self.x.magnitude().max(self.y.magnitude()).clone()
    }

    /// Bit length of the larger coordinate.
    pub fn bits(&self) -> u64 {
        self.max_coord().bits()
    }

    /// Naive height `h(P) = ln max(|x|, |y|)`; finite places contribute 0
    /// for coprime coordinates.
    pub fn height(&self) -> LogSum {
        LogSum::ln(&self.max_coord())
    }

    pub fn height_interval(&self, prec: u32) -> Interval {
        Interval::ln_int(&self.max_coord(), prec)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else if self.y.is_one() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{}/{}", self.x, self.y)
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.x, self.y)
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    /// Accepts `"a/b"`, `"a"`, `"inf"` or `"[a:b]"`.
    fn from_str(s: &str) -> Result<ProjPoint> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(ProjPoint::infinity());
        }
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let (a, b) = inner.split_once(':').ok_or_else(|| Error::parse("point", s))?;
            let a: BigInt = a.trim().parse().map_err(|_| Error::parse("point", s))?;
            let b: BigInt = b.trim().parse().map_err(|_| Error::parse("point", s))?;
            return ProjPoint::new(a, b);
        }
        Ok(ProjPoint::from_rational(&parse_rational(t)?))
    }
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    x: String,
    y: String,
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointRepr {
            x: self.x.to_string(),
            y: self.y.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    /// Accepts `{"x": "...", "y": "..."}` or any string form.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<ProjPoint, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Coords(PointRepr),
        }
        let p = match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse(),
            Repr::Coords(c) => {
                let x: BigInt = c.x.parse().map_err(serde::de::Error::custom)?;
                let y: BigInt = c.y.parse().map_err(serde::de::Error::custom)?;
                ProjPoint::new(x, y)
            }
        };
        p.map_err(serde::de::Error::custom)
    }
}

/// `λ_v(P, Q) = -log ρ_v(P, Q)` kept in exact form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalDistance {
    /// `P = Q`: the distance is zero and `λ_v = +∞`.
    Infinite { place: Place },
    /// Archimedean: `ρ_∞^2` as an exact rational in `(0, 1]`.
    Archimedean { rho_sq: Rational },
    /// p-adic: `λ_p = valuation * ln p`, `valuation >= 0`.
    NonArchimedean { prime: BigUint, valuation: u64 },
}

impl LocalDistance {
    pub fn place(&self) -> Place {
        match self {
            LocalDistance::Infinite { place } => place.clone(),
            LocalDistance::Archimedean { .. } => Place::Infinite,
            LocalDistance::NonArchimedean { prime, .. } => Place::Finite(prime.clone()),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LocalDistance::Infinite { .. })
    }

    /// The exact value of `λ_v`, or `None` for `+∞`.
    pub fn value(&self) -> Option<LogSum> {
        match self {
            LocalDistance::Infinite { .. } => None,
            LocalDistance::Archimedean { rho_sq } => {
                let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
                Some(LogSum::ln_rational(rho_sq).scale(&half))
            }
            LocalDistance::NonArchimedean { prime, valuation } => Some(LogSum::term(
                BigRational::from_integer(BigInt::from(*valuation)),
                prime,
            )),
        }
    }
}

/// Logarithmic chordal distance between two points at the place `v`.
pub fn log_chordal(p: &ProjPoint, q: &ProjPoint, v: &Place) -> LocalDistance {
    let det = &p.x * &q.y - &q.x * &p.y;
    if det.is_zero() {
        return LocalDistance::Infinite { place: v.clone() };
    }
    match v {
        Place::Infinite => {
            let num = &det * &det;
            let den = (&p.x * &p.x + &p.y * &p.y) * (&q.x * &q.x + &q.y * &q.y);
            LocalDistance::Archimedean {
                rho_sq: BigRational::new(num, den),
            }
        }
        // normalized coordinates are p-adically primitive, so both max terms are 1
        Place::Finite(prime) => LocalDistance::NonArchimedean {
            prime: prime.clone(),
            valuation: valuation_of_uint(det.magnitude(), prime),
        },
    }
}

pub fn format_point_affine(p: &ProjPoint) -> String {
    match p.affine() {
        Some(q) => format_rational(&q),
        None => "inf".to_string(),
    }
}
