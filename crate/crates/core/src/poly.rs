//! Dense integer polynomials in one variable, coefficients in ascending order.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::places::parse_rational;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Poly {
        Poly::new(vec![c])
    }

    /// `z`
    pub fn monomial(deg: usize) -> Poly {
        let mut c = vec![BigInt::zero(); deg + 1];
        c[deg] = BigInt::one();
        Poly { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `z^i`, zero past the end.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Number of trailing zero coefficients: the order of vanishing at 0.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn div_exact_scalar(&self, k: &BigInt) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c / k).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `sum a_i x^i y^(d-i)`: the degree-`d` homogenization evaluated at `(x, y)`.
    pub fn eval_homogeneous(&self, d: usize, x: &BigInt, y: &BigInt) -> BigInt {
        debug_assert!(self.degree().is_none_or(|k| k <= d));
        // Horner: acc = acc * x + a_i * y^(d-i), walking i downward
        let mut acc = BigInt::zero();
        let mut ypow = BigInt::one();
        let mut ypows = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            ypows.push(ypow.clone());
            ypow *= y;
        }
        for i in (0..=d).rev() {
            acc *= x;
            let c = self.coeff(i);
            if !c.is_zero() {
                acc += c * &ypows[d - i];
            }
        }
        acc
    }

    pub fn eval_rational(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Multiplicity of the rational root `t` (0 if not a root).
    pub fn root_multiplicity(&self, t: &BigRational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        // divide repeatedly by the primitive linear factor (b z - a)
        let lin = Poly::new(vec![-t.numer().clone(), t.denom().clone()]);
        let mut cur = self.clone();
        let mut m = 0;
        while let Some(q) = cur.div_exact(&lin) {
            cur = q;
            m += 1;
        }
        m
    }

    /// Exact division in Z[z], `None` when the divisor does not divide.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let dd = divisor.degree()?;
        let Some(nd) = self.degree() else {
            return Some(Poly::zero());
        };
        if nd < dd {
            return None;
        }
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd];
            if c.is_zero() {
                continue;
            }
            let (q, r) = c.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * dc;
            }
            quot[k] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Poly::new(quot))
        } else {
            None
        }
    }

    /// Primitive gcd over Q, normalized with positive leading coefficient.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let to_q = |p: &Poly| -> Vec<BigRational> {
            p.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        };
        let mut a = to_q(self);
        let mut b = to_q(other);
        while !b.is_empty() {
            let r = rat_rem(&a, &b);
            a = b;
            b = r;
        }
        primitive_from_rationals(&a)
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        self.div_exact_scalar(&c)
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

fn trim_q(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = trim_q(a.to_vec());
    let b = trim_q(b.to_vec());
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let q = r.last().unwrap() / &lb;
        for (j, bc) in b.iter().enumerate() {
            r[k + j] -= &q * bc;
        }
        r.pop();
        r = trim_q(r);
    }
    r
}

/// Clear denominators and remove content; positive leading coefficient.
pub fn primitive_from_rationals(v: &[BigRational]) -> Poly {
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    Poly::new(ints).primitive()
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sylvester matrix of two binary forms of formal degree `d`
/// (`F = sum f_i X^i Y^(d-i)`, likewise `G`).
pub fn sylvester_forms(f: &Poly, g: &Poly, d: usize) -> Vec<Vec<BigInt>> {
    let n = 2 * d;
    let mut rows = Vec::with_capacity(n);
    // coefficient vectors from the top degree down
    let fc: Vec<BigInt> = (0..=d).rev().map(|i| f.coeff(i)).collect();
    let gc: Vec<BigInt> = (0..=d).rev().map(|i| g.coeff(i)).collect();
    for (src, count) in [(&fc, d), (&gc, d)] {
        for shift in 0..count {
            let mut row = vec![BigInt::zero(); n];
            for (j, c) in src.iter().enumerate() {
                row[shift + j] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Homogeneous resultant `Res(F, G)` of the degree-`d` homogenizations.
pub fn resultant_forms(f: &Poly, g: &Poly, d: usize) -> BigInt {
    determinant(sylvester_forms(f, g, d))
}

/// Parse a polynomial in `z` such as `"3z^2 - z + 1/2"`.
///
/// Returns rational coefficients in ascending order.
pub fn parse_poly(s: &str) -> Result<Vec<BigRational>> {
    let err = || Error::parse("polynomial", s);
    let mut t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    while t.starts_with('(') && t.ends_with(')') && balanced(&t[1..t.len() - 1]) {
        t = t[1..t.len() - 1].to_string();
    }
    if t.is_empty() {
        return Err(err());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = t.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'*' {
            terms.push(&t[start..i]);
            start = i;
        }
    }
    terms.push(&t[start..]);
    let mut coeffs: Vec<BigRational> = Vec::new();
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1, &term[1..]),
            Some(b'+') => (1, &term[1..]),
            _ => (1, term),
        };
        if body.is_empty() {
            return Err(err());
        }
        let (coef_str, deg) = match body.find('z') {
            None => (body, 0usize),
            Some(pos) => {
                let rest = &body[pos + 1..];
                let deg = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|e| e.parse().ok())
                        .ok_or_else(err)?
                };
                (body[..pos].trim_end_matches('*'), deg)
            }
        };
        let c = if coef_str.is_empty() {
            BigRational::one()
        } else {
            parse_rational(coef_str).map_err(|_| err())?
        };
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, BigRational::zero());
        }
        coeffs[deg] += c * BigRational::from_integer(sign.into());
    }
    Ok(coeffs)
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

/// Split `"(f)/(g)"` at its top-level slash, if any.
pub(crate) fn split_fraction(s: &str) -> Option<(String, String)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut depth = 0i32;
    let mut split = None;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                split = Some(i);
                break;
            }
            _ => {}
        }
    }
    split.map(|i| (t[..i].to_string(), t[i + 1..].to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]); // z + 1
        assert_eq!(a.pow(2), p(&[1, 2, 1]));
        assert_eq!(a.mul(&p(&[-1, 1])), p(&[-1, 0, 1]));
        assert_eq!(p(&[-1, 0, 1]).div_exact(&a), Some(p(&[-1, 1])));
        assert_eq!(p(&[1, 0, 1]).div_exact(&a), None);
        assert_eq!(p(&[3, 0, 5]).derivative(), p(&[0, 10]));
    }

    #[test]
    fn homogeneous_evaluation() {
        // z^2 + 3 at [x:y] = [2:5] -> 4 + 3*25
        let f = p(&[3, 0, 1]);
        assert_eq!(
            f.eval_homogeneous(2, &BigInt::from(2), &BigInt::from(5)),
            BigInt::from(79)
        );
        // as a degree-3 form: x^2 y + 3 y^3
        assert_eq!(
            f.eval_homogeneous(3, &BigInt::from(2), &BigInt::from(5)),
            BigInt::from(4 * 5 + 3 * 125)
        );
        assert_eq!(
            f.eval_homogeneous(2, &BigInt::from(1), &BigInt::from(0)),
            BigInt::from(1)
        );
    }

    #[test]
    fn resultant_detects_common_roots() {
        // z^2 - 1 and z - 1 as degree-2 forms share the root 1
        assert!(resultant_forms(&p(&[-1, 0, 1]), &p(&[-1, 1]), 2).is_zero());
        // z^2 and 1: Res(X^2, Y^2) = 1
        assert_eq!(resultant_forms(&p(&[0, 0, 1]), &p(&[1]), 2).abs(), BigInt::one());
        // 1 and 1 as degree-1 forms: both vanish at infinity
        assert!(resultant_forms(&p(&[1]), &p(&[1]), 1).is_zero());
    }

    #[test]
    fn gcd_and_multiplicity() {
        let f = p(&[-1, 0, 1]);
        let g = p(&[-1, 1]);
        assert_eq!(f.gcd(&g), g);
        let cube = p(&[-1, 1]).pow(3).mul(&p(&[2, 3]));
        assert_eq!(cube.root_multiplicity(&BigRational::one()), 3);
        let t = BigRational::new((-2).into(), 3.into());
        assert_eq!(cube.root_multiplicity(&t), 1);
        assert_eq!(p(&[0, 0, 0, 5]).order_at_zero(), Some(3));
    }

    #[test]
    fn parse_and_display() {
        let c = parse_poly("3z^2 - z + 1/2").unwrap();
        assert_eq!(
            c,
            vec![
                BigRational::new(1.into(), 2.into()),
                BigRational::from_integer((-1).into()),
                BigRational::from_integer(3.into())
            ]
        );
        let q = parse_poly("(z^2+1)").unwrap();
        assert_eq!(primitive_from_rationals(&q).to_string(), "z^2+1");
        assert_eq!(p(&[2, -1, 0, -3]).to_string(), "-3z^3-z+2");
        assert!(parse_poly("z^").is_err());
        assert_eq!(
            split_fraction("(z^2+1)/z"),
            Some(("(z^2+1)".to_string(), "z".to_string()))
        );
    }
}
