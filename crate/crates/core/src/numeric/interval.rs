use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::dyadic::{Dyadic, Round};
use super::ln;

/// Default working precision in significant bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// A closed interval `[lo, hi]` with dyadic endpoints and outward rounding.
///
/// Every operation returns an enclosure of the exact result. The precision
/// of a result is the larger of the operand precisions.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

/// Outcome of comparing two enclosures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certainty {
    Less,
    Greater,
    Overlap,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi, prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Interval {
        Interval {
            lo: x.round(prec, Round::Down),
            hi: x.round(prec, Round::Up),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Interval {
        Interval::point(Dyadic::zero(), prec)
    }

    pub fn from_int<T: Into<BigInt>>(n: T, prec: u32) -> Interval {
        Interval::point(Dyadic::from_int(n), prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Interval {
        Interval::point(Dyadic::from_f64(x), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Interval {
        let num = Dyadic::from_int(q.numer().clone());
        let den = Dyadic::from_int(q.denom().clone());
        Interval {
            lo: Dyadic::div(&num, &den, prec, Round::Down),
            hi: Dyadic::div(&num, &den, prec, Round::Up),
            prec,
        }
    }

    /// Enclosure of `ln n` for a positive integer.
    pub fn ln_int(n: &BigUint, prec: u32) -> Interval {
        let (lo, hi) = ln::ln_biguint(n, prec);
        Interval { lo, hi, prec }
    }

    /// Enclosure of `ln q` for a positive rational.
    pub fn ln_rational(q: &BigRational, prec: u32) -> Interval {
        assert!(q.is_positive(), "logarithm of a non-positive rational");
        let num = q.numer().magnitude();
        let den = q.denom().magnitude();
        Interval::ln_int(num, prec).sub(&Interval::ln_int(den, prec))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn lo_f64(&self) -> f64 {
        // to_f64 truncates toward zero on the mantissa; step outward for reporting
        let v = self.lo.to_f64();
        if Dyadic::from_f64(v) > self.lo {
            v.next_down()
        } else {
            v
        }
    }

    pub fn hi_f64(&self) -> f64 {
        let v = self.hi.to_f64();
        if Dyadic::from_f64(v) < self.hi {
            v.next_up()
        } else {
            v
        }
    }

    pub fn mid_f64(&self) -> f64 {
        let m = Dyadic::add(&self.lo, &self.hi, self.prec + 2, Round::Down).mul_pow2(-1);
        m.to_f64()
    }

    pub fn width(&self) -> Dyadic {
        Dyadic::sub(&self.hi, &self.lo, self.prec, Round::Up)
    }

    /// Half the width, rounded up.
    pub fn radius(&self) -> Dyadic {
        self.width().mul_pow2(-1)
    }

    pub fn with_precision(&self, prec: u32) -> Interval {
        Interval {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = Dyadic::max(&self.lo, &other.lo);
        let hi = Dyadic::min(&self.hi, &other.hi);
        if lo <= hi {
            Some(Interval {
                lo,
                hi,
                prec: self.prec.max(other.prec),
            })
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: Dyadic::min(&self.lo, &other.lo),
            hi: Dyadic::max(&self.hi, &other.hi),
            prec: self.prec.max(other.prec),
        }
    }

    /// Compare `self` against `other`: `Greater` only when every point of
    /// `self` is at least every point of `other` (touching endpoints count as
    /// greater-or-equal), `Less` when strictly below.
    pub fn compare(&self, other: &Interval) -> Certainty {
        if self.lo >= other.hi {
            Certainty::Greater
        } else if self.hi < other.lo {
            Certainty::Less
        } else {
            Certainty::Overlap
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let p = self.prec.max(other.prec);
        Interval {
            lo: Dyadic::add(&self.lo, &other.lo, p, Round::Down),
            hi: Dyadic::add(&self.hi, &other.hi, p, Round::Up),
            prec: p,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let p = self.prec.max(other.prec);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| Dyadic::mul(a, b, p, Round::Down))
            .min()
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| Dyadic::mul(a, b, p, Round::Up))
            .max()
            .unwrap();
        Interval { lo, hi, prec: p }
    }

    /// Division by an interval that excludes zero.
    pub fn div(&self, other: &Interval) -> Interval {
        assert!(
            !other.contains_zero(),
            "interval division by an enclosure of zero"
        );
        let p = self.prec.max(other.prec);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| Dyadic::div(a, b, p, Round::Down))
            .min()
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| Dyadic::div(a, b, p, Round::Up))
            .max()
            .unwrap();
        Interval { lo, hi, prec: p }
    }

    pub fn scale_int(&self, k: &BigInt) -> Interval {
        self.mul(&Interval::from_int(k.clone(), self.prec))
    }

    pub fn div_int(&self, k: &BigInt) -> Interval {
        self.div(&Interval::from_int(k.clone(), self.prec))
    }

    pub fn scale_rational(&self, q: &BigRational) -> Interval {
        if q.denom().is_one() {
            return self.scale_int(q.numer());
        }
        self.scale_int(q.numer()).div_int(q.denom())
    }

    /// Widen symmetrically by a nonnegative amount.
    pub fn widen(&self, r: &Dyadic) -> Interval {
        assert!(r.signum() >= 0, "negative widening radius");
        Interval {
            lo: Dyadic::sub(&self.lo, r, self.prec, Round::Down),
            hi: Dyadic::add(&self.hi, r, self.prec, Round::Up),
            prec: self.prec,
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: Dyadic::max(&self.lo, &other.lo),
            hi: Dyadic::max(&self.hi, &other.hi),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval {
            lo: Dyadic::min(&self.lo, &other.lo),
            hi: Dyadic::min(&self.hi, &other.hi),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            Interval {
                lo: Dyadic::zero(),
                hi: Dyadic::max(&self.lo.abs(), &self.hi),
                prec: self.prec,
            }
        }
    }
}

impl Zero for Interval {
    fn zero() -> Self {
        Interval::zero(DEFAULT_PRECISION)
    }

    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl std::ops::Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::add(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_enclosure() {
        let q = BigRational::new(1.into(), 3.into());
        let i = Interval::from_rational(&q, 64);
        let three = Interval::from_int(3, 64);
        assert!(i.mul(&three).contains(&Dyadic::from_int(1)));
        assert!(i.width() > Dyadic::zero());
    }

    #[test]
    fn mul_mixed_signs() {
        let a = Interval::new(Dyadic::from_int(-2), Dyadic::from_int(3), 64);
        let b = Interval::new(Dyadic::from_int(-5), Dyadic::from_int(1), 64);
        let c = a.mul(&b);
        assert_eq!(c.lo(), &Dyadic::from_int(-15));
        assert_eq!(c.hi(), &Dyadic::from_int(10));
    }

    #[test]
    fn compare_reports_overlap() {
        let a = Interval::new(Dyadic::from_int(0), Dyadic::from_int(2), 64);
        let b = Interval::new(Dyadic::from_int(1), Dyadic::from_int(3), 64);
        assert_eq!(a.compare(&b), Certainty::Overlap);
        let c = Interval::from_int(2, 64);
        assert_eq!(c.compare(&a), Certainty::Greater);
        assert_eq!(a.compare(&Interval::from_int(5, 64)), Certainty::Less);
    }
}
