//! Certified canonical heights: along a word, for a whole system, and the
//! periodic-word estimate of their infimum.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{Dyadic, Interval, DEFAULT_PRECISION};
use crate::orbits::{find_cycle, for_each_node, WorkLimits};
use crate::poly::Poly;
use crate::proj1::ProjPoint;
use crate::ratmap::{MapSystem, RatMap};
use crate::words::{enumerate_words, Word};

/// Points drawn for an empirical constant, and the factor applied to the
/// observed maximum.
pub const EMPIRICAL_SAMPLES: usize = 2_000;
pub const EMPIRICAL_SAFETY: f64 = 1.5;
pub const EMPIRICAL_SEED: u64 = 0x5eed;
const EMPIRICAL_COORD_BOUND: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantMode {
    /// Valid for every point of P^1(Q).
    Certified,
    /// Observed maximum over a fixed seeded sample times [`EMPIRICAL_SAFETY`].
    Empirical,
}

/// `c` with `|h(φ(x)) - d h(x)| <= d c`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightDifferenceBound {
    pub map: RatMap,
    /// Enclosure of the constant; downstream consumers use its upper end.
    pub c: Interval,
    pub mode: ConstantMode,
}

impl HeightDifferenceBound {
    pub fn upper(&self) -> &Dyadic {
        self.c.hi()
    }
}

/// Height-difference constant of a single map.
///
/// Certified mode: `h(φ(x)) - d h(x) <= ln max(|F|_1, |G|_1)` by the triangle
/// inequality, and `d h(x) - h(φ(x)) <= ln C` where `C` bounds the l1 norms of
/// integer cofactors `U F + V G = q X^(2d-1)`, `U' F + V' G = q Y^(2d-1)`.
pub fn c_bound(map: &RatMap, mode: ConstantMode, prec: u32) -> HeightDifferenceBound {
    let d = map.degree();
    let c = match mode {
        ConstantMode::Certified => {
            let l1 = |p: &Poly| -> BigUint { p.coeffs().iter().map(|c| c.magnitude().clone()).sum() };
            let upper = l1(map.f()).max(l1(map.g()));
            let lower = cofactor_norm(map);
            let m = upper.max(lower);
            Interval::ln_int(&m, prec).div_int(&BigInt::from(d))
        }
        ConstantMode::Empirical => {
            let mut rng = ChaCha8Rng::seed_from_u64(EMPIRICAL_SEED);
            let mut worst = Interval::zero(prec);
            for _ in 0..EMPIRICAL_SAMPLES {
                let a = rng.gen_range(-EMPIRICAL_COORD_BOUND..=EMPIRICAL_COORD_BOUND);
                let b = rng.gen_range(1..=EMPIRICAL_COORD_BOUND);
                let x = ProjPoint::new(a, b).expect("b > 0");
                let diff = map
                    .eval(&x)
                    .height()
                    .sub(&x.height().scale_int(d as i64))
                    .to_interval(prec)
                    .abs();
                worst = worst.max(&diff);
            }
            worst
                .scale_rational(&BigRational::new(3.into(), 2.into()))
                .div_int(&BigInt::from(d))
        }
    };
    let c = c.max(&Interval::zero(prec));
    HeightDifferenceBound {
        map: map.clone(),
        c,
        mode,
    }
}

/// `max_i |q (u_i, v_i)|_1` over the two cofactor identities.
fn cofactor_norm(map: &RatMap) -> BigUint {
    let d = map.degree();
    let n = 2 * d;
    // column i < d is u_i (coefficient of X^i Y^(d-1-i)), column d + i is v_i;
    // row j is the coefficient of X^j Y^(2d-1-j)
    let mut a: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for i in 0..d {
        for t in 0..=d {
            a[i + t][i] = BigRational::from_integer(map.f().coeff(t));
            a[i + t][d + i] = BigRational::from_integer(map.g().coeff(t));
        }
    }
    let solve = |target: usize| -> Vec<BigRational> {
        let mut rhs = vec![BigRational::zero(); n];
        rhs[target] = BigRational::one();
        solve_linear(a.clone(), rhs).expect("nonzero resultant makes the system regular")
    };
    let sols = [solve(n - 1), solve(0)];
    let q = sols
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let qr = BigRational::from_integer(q);
    sols.iter()
        .map(|s| {
            s.iter()
                .map(|c| (c * &qr).to_integer().magnitude().clone())
                .sum::<BigUint>()
        })
        .max()
        .unwrap()
}

fn solve_linear(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// `c(F) = max_j c(φ_j)` as a certified upper end.
pub fn system_constant(system: &MapSystem, mode: ConstantMode, prec: u32) -> Dyadic {
    system
        .maps()
        .iter()
        .map(|m| c_bound(m, mode, prec).upper().clone())
        .max()
        .expect("nonempty system")
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeightOptions {
    pub depth: usize,
    /// Stop early once the enclosure is at most this wide.
    pub target_width: Option<f64>,
    pub prec: u32,
    pub constants: ConstantMode,
    pub limits: WorkLimits,
}

impl Default for HeightOptions {
    fn default() -> HeightOptions {
        HeightOptions {
            depth: 6,
            target_width: None,
            prec: DEFAULT_PRECISION,
            constants: ConstantMode::Certified,
            limits: WorkLimits::default(),
        }
    }
}

/// An enclosure of a canonical height.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightEstimate {
    pub value: Interval,
    /// Deepest level that contributed.
    pub depth: usize,
    pub degree_product: BigUint,
    /// The constant behind the enclosure holds for all points.
    pub certified: bool,
    /// False when the requested width was not reached.
    pub target_met: bool,
}

impl Serialize for HeightEstimate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            lo: f64,
            hi: f64,
            depth: usize,
            certified: bool,
        }
        Repr {
            lo: self.value.lo_f64(),
            hi: self.value.hi_f64(),
            depth: self.depth,
            certified: self.certified,
        }
        .serialize(s)
    }
}

fn clamp_nonnegative(iv: Interval) -> Interval {
    let zero = Interval::zero(iv.precision());
    match iv.intersect(&Interval::new(Dyadic::zero(), Dyadic::max(iv.hi(), &Dyadic::zero()), iv.precision())) {
        Some(v) => v,
        None => zero,
    }
}

/// `ĥ_Φ(P)` along `word` as the intersection over `n` of
/// `h(Φ^n(P)) / D_n ± c d_1 / ((d_1 - 1) D_n)`.
///
/// Orbit points are evaluated one step at a time; maps are never composed.
/// A finite word is used as a prefix: the unknown tail is covered by the
/// system-wide constant and least degree.
pub fn canonical_height_word(system: &MapSystem, word: &Word, p: &ProjPoint, opts: &HeightOptions) -> Result<HeightEstimate> {
    word.validate(system.k())?;
    let prec = opts.prec;
    let c = system_constant(system, opts.constants, prec);
    let d1 = system.d_min() as i64;
    let tail = Interval::point(c, prec).scale_rational(&BigRational::new(d1.into(), (d1 - 1).into()));
    let mut x = p.clone();
    let mut dn = BigUint::one();
    let mut best: Option<Interval> = None;
    let mut used = 0;
    let mut degree_product = dn.clone();
    let mut target_met = opts.target_width.is_none();
    for n in 0..=opts.depth {
        if n > 0 {
            let Some(letter) = word.letter(n - 1) else {
                break;
            };
            let m = system.map(letter)?;
            if x.bits().saturating_mul(m.degree() as u64) > opts.limits.max_bits {
                break;
            }
            x = m.eval(&x);
            dn *= BigUint::from(m.degree());
        }
        let dn_int = BigInt::from(dn.clone());
        let radius = tail.div_int(&dn_int).hi().clone();
        let est = x.height_interval(prec).div_int(&dn_int).widen(&radius);
        best = Some(match best {
            None => est,
            Some(b) => b.intersect(&est).unwrap_or(est),
        });
        used = n;
        degree_product = dn.clone();
        if let Some(t) = opts.target_width {
            if best.as_ref().unwrap().width().to_f64() <= t {
                target_met = true;
                break;
            }
        }
    }
    Ok(HeightEstimate {
        value: clamp_nonnegative(best.expect("n = 0 always runs")),
        depth: used,
        degree_product,
        certified: opts.constants == ConstantMode::Certified,
        target_met,
    })
}

/// `(T^n h)(x) = D^(-n) sum_{|u| = n} h(u(x))` with `D = d_1 + ... + d_k`,
/// without the tail term.
pub fn system_operator_iterate(system: &MapSystem, x: &ProjPoint, n: usize, prec: u32, limits: &WorkLimits) -> Result<Interval> {
    let mut acc = Interval::zero(prec);
    for_each_node(system, x, n, limits, |w, q| {
        if w.len() == n {
            acc = acc.add(&q.height_interval(prec));
        }
        Ok(())
    })?;
    let big_d: usize = system.degrees().iter().sum();
    Ok(acc.div_int(&BigInt::from(big_d).pow(n as u32)))
}

/// `2 c (k/D)^n / (1 - k/D)`: distance from `T^n h` to the system height.
pub fn system_tail_bound(system: &MapSystem, c: &Dyadic, n: usize, prec: u32) -> Interval {
    let k = BigInt::from(system.k());
    let big_d = BigInt::from(system.degrees().iter().sum::<usize>());
    let ratio = BigRational::new(k.pow(n as u32) * &big_d, big_d.pow(n as u32) * (&big_d - &k));
    Interval::point(c.clone(), prec)
        .scale_int(&BigInt::from(2))
        .scale_rational(&ratio)
}

/// The system height `ĥ_F(x)` at depth `n`.
pub fn canonical_height_system(system: &MapSystem, x: &ProjPoint, n: usize, opts: &HeightOptions) -> Result<HeightEstimate> {
    let prec = opts.prec;
    let iterate = system_operator_iterate(system, x, n, prec, &opts.limits)?;
    let c = system_constant(system, opts.constants, prec);
    let tail = system_tail_bound(system, &c, n, prec);
    let big_d: usize = system.degrees().iter().sum();
    Ok(HeightEstimate {
        value: clamp_nonnegative(iterate.widen(tail.hi())),
        depth: n,
        degree_product: BigUint::from(big_d).pow(n as u32),
        certified: opts.constants == ConstantMode::Certified,
        target_met: true,
    })
}

/// Minimum of canonical heights over periodic words of bounded period.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HminEstimate {
    /// `[min lo, min hi]` over the family.
    pub value: HeightEstimate,
    /// The word attaining `min hi`, or the word along which `P` is preperiodic.
    pub witness: Word,
    pub preperiodic: bool,
    pub words_checked: usize,
    pub period_bound: usize,
}

/// Estimate `inf_Φ ĥ_Φ(P)` by the primitive periodic words of period at most
/// `period_bound`. An upper estimate of the true infimum; the lower end is
/// certified for the family only.
pub fn hmin_estimate(system: &MapSystem, p: &ProjPoint, period_bound: usize, opts: &HeightOptions) -> Result<HminEstimate> {
    if period_bound == 0 {
        return Err(Error::InvalidParameter("period bound must be at least 1".into()));
    }
    let mut best: Option<(Interval, Dyadic, Word, HeightEstimate)> = None;
    let mut checked = 0;
    for len in 1..=period_bound {
        for seed in enumerate_words(system.k(), len) {
            if !is_primitive(seed.letters()) {
                continue;
            }
            let w = Word::periodic(seed.letters().to_vec())?;
            checked += 1;
            if find_cycle(system, &w, p, opts.depth.max(2 * len), &opts.limits)?.is_some() {
                return Ok(HminEstimate {
                    value: HeightEstimate {
                        value: Interval::zero(opts.prec),
                        depth: 0,
                        degree_product: BigUint::one(),
                        certified: true,
                        target_met: true,
                    },
                    witness: w,
                    preperiodic: true,
                    words_checked: checked,
                    period_bound,
                });
            }
            let est = canonical_height_word(system, &w, p, opts)?;
            best = Some(match best {
                None => (est.value.clone(), est.value.lo().clone(), w, est),
                Some((iv, lo, bw, be)) => {
                    let lo = Dyadic::min(&lo, est.value.lo());
                    if est.value.hi() < iv.hi() {
                        (est.value.clone(), lo, w, est)
                    } else {
                        (iv, lo, bw, be)
                    }
                }
            });
        }
    }
    let (iv, lo, witness, est) = best.expect("period 1 words exist");
    Ok(HminEstimate {
        value: HeightEstimate {
            value: Interval::new(lo, iv.hi().clone(), opts.prec),
            ..est
        },
        witness,
        preperiodic: false,
        words_checked: checked,
        period_bound,
    })
}

fn is_primitive(seed: &[usize]) -> bool {
    let n = seed.len();
    !(1..n).any(|q| n % q == 0 && (0..n).all(|i| seed[i] == seed[i % q]))
}
