use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::Interval;

/// Largest product size (in bits) the exact sign test will build.
pub const EXACT_SIGN_BIT_CAP: u64 = 1 << 26;

/// An exact real of the form `sum_i c_i * ln(n_i)` with rational `c_i` and
/// integers `n_i >= 2`.
///
/// Heights, local distances and their linear combinations all live here, so
/// comparisons can be settled exactly by clearing denominators and comparing
/// integer power products.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct LogSum {
    terms: BTreeMap<BigUint, BigRational>,
}

impl fmt::Debug for LogSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LogSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (n, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "ln {n}")?;
            } else {
                write!(f, "{mag}*ln {n}")?;
            }
        }
        Ok(())
    }
}

impl LogSum {
    pub fn zero() -> LogSum {
        LogSum::default()
    }

    /// `ln n` for a positive integer.
    pub fn ln(n: &BigUint) -> LogSum {
        assert!(!n.is_zero(), "ln of zero");
        let mut s = LogSum::zero();
        s.push(n.clone(), BigRational::one());
        s
    }

    /// `ln |n|` for a nonzero integer.
    pub fn ln_abs(n: &BigInt) -> LogSum {
        LogSum::ln(n.magnitude())
    }

    /// `ln q` for a positive rational.
    pub fn ln_rational(q: &BigRational) -> LogSum {
        assert!(q.is_positive(), "ln of a non-positive rational");
        let mut s = LogSum::ln(q.numer().magnitude());
        s.push(q.denom().magnitude().clone(), -BigRational::one());
        s
    }

    /// `c * ln n`.
    pub fn term(c: BigRational, n: &BigUint) -> LogSum {
        let mut s = LogSum::zero();
        s.push(n.clone(), c);
        s
    }

    fn push(&mut self, n: BigUint, c: BigRational) {
        if n.is_one() || c.is_zero() {
            return;
        }
        match self.terms.entry(n) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.terms.iter()
    }

    /// Structurally zero. `ln 4 - 2 ln 2` is not structurally zero; use
    /// [`LogSum::sign`] for numeric tests.
    pub fn is_trivially_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LogSum) -> LogSum {
        let mut out = self.clone();
        for (n, c) in &other.terms {
            out.push(n.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LogSum) -> LogSum {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LogSum {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, k: &BigRational) -> LogSum {
        if k.is_zero() {
            return LogSum::zero();
        }
        LogSum {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.clone(), c * k))
                .collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> LogSum {
        self.scale(&BigRational::from_integer(k.into()))
    }

    pub fn to_interval(&self, prec: u32) -> Interval {
        let mut acc = Interval::zero(prec);
        for (n, c) in &self.terms {
            acc = acc.add(&Interval::ln_int(n, prec).scale_rational(c));
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.to_interval(64).mid_f64()
    }

    /// Exact sign by comparing `prod n^e` over positive and negative integer
    /// exponents after clearing coefficient denominators. `None` when the
    /// products would exceed [`EXACT_SIGN_BIT_CAP`] bits.
    pub fn exact_sign(&self) -> Option<Ordering> {
        if self.terms.is_empty() {
            return Some(Ordering::Equal);
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut budget = 0u64;
        let mut exps = Vec::with_capacity(self.terms.len());
        for (n, c) in &self.terms {
            let e = (c * BigRational::from_integer(lcm.clone())).to_integer();
            let e_abs = e.magnitude().to_u64()?;
            budget = budget.checked_add(e_abs.checked_mul(n.bits())?)?;
            exps.push((n, e));
        }
        if budget > EXACT_SIGN_BIT_CAP {
            return None;
        }
        let mut pos = BigUint::one();
        let mut neg = BigUint::one();
        for (n, e) in exps {
            let k = e.magnitude().to_u64().unwrap() as usize;
            let p = num_traits::pow(n.clone(), k);
            if e.is_positive() {
                pos *= p;
            } else {
                neg *= p;
            }
        }
        Some(pos.cmp(&neg))
    }

    /// Sign of the value: interval evaluation first, exact fallback on
    /// overlap. `None` only if both are inconclusive.
    pub fn sign(&self, prec: u32) -> Option<Ordering> {
        if self.terms.is_empty() {
            return Some(Ordering::Equal);
        }
        let iv = self.to_interval(prec);
        if iv.lo().signum() > 0 {
            return Some(Ordering::Greater);
        }
        if iv.hi().signum() < 0 {
            return Some(Ordering::Less);
        }
        self.exact_sign()
    }

    /// Compare two exact values.
    pub fn compare(&self, other: &LogSum, prec: u32) -> Option<Ordering> {
        self.sub(other).sign(prec)
    }
}
