//! Certified natural logarithms of big integers.
//!
//! `ln t = 2 atanh((t-1)/(t+1))` evaluated in fixed point with an explicit
//! error budget; the integer is first reduced to `t * 2^e` with
//! `t in (2/3, 4/3]`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::dyadic::{Dyadic, Round};

const GUARD_BITS: u32 = 40;

/// Lower and upper fixed-point bounds (scale `2^w`) of `ln(1 + ...)` given
/// `s = p/q` with `|s| <= 1/3`.
fn atanh2_fixed(p: &BigInt, q: &BigInt, w: u32) -> (BigInt, BigInt) {
    if p.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    // |s|^(2K+1) <= 2^-w  with a small safety margin on the float estimate
    let s_abs = {
        let pb = p.magnitude().bits() as i64;
        let qb = q.magnitude().bits() as i64;
        // log2 |s| <= pb - qb + 1, so this is an upper bound on |s|
        2f64.powi((pb - qb + 1).clamp(-1000, 0) as i32).min(1.0 / 3.0)
    };
    let per_term = -s_abs.log2() * 0.99;
    let k_terms = ((w as f64 / per_term - 1.0) / 2.0).ceil().max(0.0) as u64 + 2;

    let scale = BigInt::one() << (w as usize);
    let p2 = p * p;
    let q2 = q * q;
    let mut x = (p * &scale).div_floor(q);
    let mut sum = BigInt::zero();
    for k in 0..k_terms {
        sum += x.div_floor(&BigInt::from(2 * k + 1));
        x = (&x * &p2).div_floor(&q2);
    }
    // per-term error <= k + 2 ulps, tail <= 2 ulps
    let err = BigInt::from(k_terms * (k_terms + 3) / 2 + 2);
    let lo = (&sum - &err) << 1usize;
    let hi = (&sum + &err) << 1usize;
    (lo, hi)
}

fn ln2_fixed(w: u32) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&w) {
        return v.clone();
    }
    let v = atanh2_fixed(&BigInt::one(), &BigInt::from(3), w);
    cache.lock().unwrap().insert(w, v.clone());
    v
}

/// Returns `(lo, hi)` with `lo <= ln n <= hi`, both rounded to `prec` bits.
pub fn ln_biguint(n: &BigUint, prec: u32) -> (Dyadic, Dyadic) {
    assert!(!n.is_zero(), "logarithm of zero");
    if n.is_one() {
        return (Dyadic::zero(), Dyadic::zero());
    }
    let w = prec + GUARD_BITS + (64 - (n.bits().leading_zeros())).min(64);
    let mut e = n.bits() as i64 - 1;
    // t = n / 2^e in [1, 2); halve when t > 4/3
    let two_e = BigUint::one() << (e as usize);
    if n * 3u32 > two_e * 4u32 {
        e += 1;
    }
    let n = BigInt::from(n.clone());
    let shift = w as i64 - e;
    let (t_lo, t_hi) = if shift >= 0 {
        let t = &n << (shift as usize);
        (t.clone(), t)
    } else {
        let s = (-shift) as usize;
        let t = &n >> s;
        let exact = (&t << s) == n;
        let hi = if exact { t.clone() } else { &t + 1 };
        (t, hi)
    };
    let scale = BigInt::one() << (w as usize);
    let (lt_lo, _) = atanh2_fixed(&(&t_lo - &scale), &(&t_lo + &scale), w);
    let (_, lt_hi) = atanh2_fixed(&(&t_hi - &scale), &(&t_hi + &scale), w);
    let (l2_lo, l2_hi) = ln2_fixed(w);
    let e_big = BigInt::from(e);
    let (lo_fixed, hi_fixed) = if e >= 0 {
        (lt_lo + &e_big * l2_lo, lt_hi + &e_big * l2_hi)
    } else {
        (lt_lo + &e_big * l2_hi, lt_hi + &e_big * l2_lo)
    };
    debug_assert!(lo_fixed <= hi_fixed);
    let lo = Dyadic::new(lo_fixed, -(w as i64)).round(prec, Round::Down);
    let hi = Dyadic::new(hi_fixed, -(w as i64)).round(prec, Round::Up);
    // ln n > 0 for n >= 2
    let lo = if lo.signum() < 0 { Dyadic::zero() } else { lo };
    (lo, hi)
}
