use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Rounding direction for a single endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// A binary floating value `mant * 2^exp` with an arbitrary-size mantissa.
///
/// Values are kept canonical: the mantissa is odd, or the value is zero with
/// `exp == 0`. Structural equality is therefore numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{} (~{:e})", self.mant, self.exp, self.to_f64())
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        let mut d = Dyadic { mant, exp };
        d.canonicalize();
        d
    }

    pub fn zero() -> Dyadic {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Dyadic {
        Dyadic::new(n.into(), 0)
    }

    /// Exact conversion; panics on NaN or infinity.
    pub fn from_f64(x: f64) -> Dyadic {
        assert!(x.is_finite(), "non-finite f64 has no dyadic value");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Dyadic::new(BigInt::from(m) * sign, e)
    }

    fn canonicalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz as usize;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Position of the most significant bit (`floor(log2 |x|)`), `None` for zero.
    pub fn top(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64 - 1)
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -self.mant.clone(),
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = (bits - prec as u64) as usize;
        let m = shift_round(&self.mant, shift, dir);
        Dyadic::new(m, self.exp + shift as i64)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 64 {
            let shift = (bits - 64) as usize;
            (&self.mant >> shift, self.exp + shift as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(f64::NAN);
        if e > 2000 {
            return mf.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        // split the scaling so intermediate powers stay finite
        let half = e / 2;
        mf * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    fn add_exact(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let e = a.exp.min(b.exp);
        let ma = &a.mant << ((a.exp - e) as usize);
        let mb = &b.mant << ((b.exp - e) as usize);
        Dyadic::new(ma + mb, e)
    }

    /// `a + b` rounded to `prec` bits in direction `dir`.
    ///
    /// When one operand sits far below the rounding position of the other it is
    /// replaced by a same-signed stand-in that keeps the result on the correct
    /// side, so no huge alignment shift is ever materialized.
    pub fn add(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        let (ta, tb) = match (a.top(), b.top()) {
            (None, _) => return b.round(prec, dir),
            (_, None) => return a.round(prec, dir),
            (Some(ta), Some(tb)) => (ta, tb),
        };
        let (big, small, tbig, tsmall) = if ta >= tb { (a, b, ta, tb) } else { (b, a, tb, ta) };
        let floor_pos = tbig - prec as i64 - 3;
        let low_big = big.exp;
        if tsmall < floor_pos.min(low_big) - 1 {
            let pos = floor_pos.min(low_big) - 1;
            let sticky = match (small.signum() > 0, dir) {
                (true, Round::Down) | (false, Round::Up) => Dyadic::zero(),
                (true, Round::Up) => Dyadic::new(BigInt::from(1), pos),
                (false, Round::Down) => Dyadic::new(BigInt::from(-1), pos),
            };
            return Dyadic::add_exact(big, &sticky).round(prec, dir);
        }
        Dyadic::add_exact(a, b).round(prec, dir)
    }

    pub fn sub(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        Dyadic::add(a, &b.neg(), prec, dir)
    }

    pub fn mul(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        Dyadic::new(&a.mant * &b.mant, a.exp + b.exp).round(prec, dir)
    }

    /// `a / b` rounded to `prec` bits; `b` must be nonzero.
    pub fn div(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Dyadic::zero();
        }
        let shift = prec as i64 + b.mant.bits() as i64 - a.mant.bits() as i64 + 2;
        let shift = shift.max(0) as usize;
        let num = &a.mant << shift;
        let q = div_round(&num, &b.mant, dir);
        Dyadic::new(q, a.exp - b.exp - shift as i64).round(prec, dir)
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn max(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

/// `m / 2^shift` rounded toward the requested side.
pub(crate) fn shift_round(m: &BigInt, shift: usize, dir: Round) -> BigInt {
    match dir {
        // BigInt's right shift floors
        Round::Down => m >> shift,
        Round::Up => -((-m) >> shift),
    }
}

pub(crate) fn div_round(a: &BigInt, b: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => a.div_floor(b),
        Round::Up => a.div_ceil(b),
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ta, tb) = (self.top().unwrap(), other.top().unwrap());
        if ta != tb {
            let mag = ta.cmp(&tb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        // equal top bits keep the alignment shift bounded by the mantissa sizes
        let e = self.exp.min(other.exp);
        let ma = &self.mant << ((self.exp - e) as usize);
        let mb = &other.mant << ((other.exp - e) as usize);
        ma.cmp(&mb)
    }
}
