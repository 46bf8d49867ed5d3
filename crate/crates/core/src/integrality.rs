//! Quasi-integrality, Γ-sets, S-integral censuses and the ratio series
//! `log|a_n| / log|b_n|`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::heights::{canonical_height_word, HeightEstimate, HeightOptions};
use crate::numeric::{Interval, LogSum};
use crate::orbits::{enumerate_tree, find_cycle, for_each_node, OrbitRecord, TreeOptions, WorkLimits};
use crate::places::{format_rational, is_s_integer, padic_valuation, Place, PlaceSet, Rational};
use crate::proj1::{log_chordal, LocalDistance, ProjPoint};
use crate::ratmap::MapSystem;
use crate::words::Word;

/// `ε` must lie in `(0, 1]`.
pub fn check_epsilon(eps: &Rational) -> Result<()> {
    if eps.is_positive() && eps <= &Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(format_rational(eps)))
    }
}

/// `sum_{v in S} d_v log max(|x|_v, 1)` in exact form.
pub fn s_part_of_height(x: &Rational, s: &PlaceSet) -> LogSum {
    if x.is_zero() {
        return LogSum::zero();
    }
    let mut acc = LogSum::zero();
    for v in s.iter() {
        match v {
            Place::Infinite => {
                let (a, b) = (x.numer().magnitude(), x.denom().magnitude());
                if a > b {
                    acc = acc.add(&LogSum::ln(a)).sub(&LogSum::ln(b));
                }
            }
            Place::Finite(p) => {
                let val = padic_valuation(x, p).expect("nonzero");
                if val < 0 {
                    acc = acc.add(&LogSum::term(BigRational::from_integer((-val).into()), p));
                }
            }
        }
    }
    acc
}

/// `x` is quasi-(S, ε)-integral: `sum_{v in S} log max(|x|_v, 1) >= ε h([x : 1])`,
/// decided exactly.
pub fn quasi_integral_test(x: &Rational, s: &PlaceSet, eps: &Rational, prec: u32) -> Result<bool> {
    check_epsilon(eps)?;
    let h = ProjPoint::from_rational(x).height();
    let gap = s_part_of_height(x, s).sub(&h.scale(eps));
    match gap.sign(prec) {
        Some(o) => Ok(o != Ordering::Less),
        None => Err(Error::WorkLimit(format!(
            "exact comparison of {gap} exceeds the integer size cap"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    In,
    Out,
    Ambiguous,
}

/// One `n` of a Γ-set computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaEntry {
    pub n: usize,
    pub verdict: Verdict,
    pub point: ProjPoint,
    /// `sum_{v in S} λ_v(Φ^n(P), A)`; `None` when `Φ^n(P) = A`.
    #[serde(serialize_with = "ser_opt_interval")]
    pub lhs: Option<Interval>,
    /// `ε D_n ĥ_Φ(P)`.
    #[serde(serialize_with = "ser_interval")]
    pub rhs: Interval,
}

fn ser_interval<S: Serializer>(iv: &Interval, s: S) -> std::result::Result<S::Ok, S::Error> {
    [iv.lo_f64(), iv.hi_f64()].serialize(s)
}

fn ser_opt_interval<S: Serializer>(iv: &Option<Interval>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match iv {
        Some(iv) => ser_interval(iv, s),
        None => s.serialize_str("inf"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaRecord {
    pub word: Word,
    pub a: ProjPoint,
    pub p: ProjPoint,
    pub s: PlaceSet,
    pub epsilon: String,
    pub depth: usize,
    pub hhat: HeightEstimate,
    /// `P` is preperiodic along the word, so `ĥ = 0` and Γ is degenerate.
    pub preperiodic: bool,
    pub members: Vec<GammaEntry>,
}

impl GammaRecord {
    pub fn count(&self, v: Verdict) -> usize {
        self.members.iter().filter(|e| e.verdict == v).count()
    }

    /// The `n` with verdict `In`.
    pub fn in_set(&self) -> Vec<usize> {
        self.members
            .iter()
            .filter(|e| e.verdict == Verdict::In)
            .map(|e| e.n)
            .collect()
    }
}

/// `sum_{v in S} d_v λ_v(x, a)`; `None` if some term is infinite.
pub fn proximity(x: &ProjPoint, a: &ProjPoint, s: &PlaceSet) -> Option<LogSum> {
    let mut acc = LogSum::zero();
    for v in s.iter() {
        match log_chordal(x, a, v) {
            LocalDistance::Infinite { .. } => return None,
            d => acc = acc.add(&d.value().expect("finite")),
        }
    }
    Some(acc)
}

/// `Γ_{Φ,S}(A, P, ε)` up to `depth`: `n` is in when
/// `sum_{v in S} λ_v(Φ^n(P), A) >= ε D_n ĥ_Φ(P)`.
#[allow(clippy::too_many_arguments)]
pub fn gamma_set(
    system: &MapSystem,
    word: &Word,
    s: &PlaceSet,
    a: &ProjPoint,
    p: &ProjPoint,
    eps: &Rational,
    depth: usize,
    opts: &HeightOptions,
) -> Result<GammaRecord> {
    check_epsilon(eps)?;
    word.validate(system.k())?;
    let prec = opts.prec;
    let mut hhat = canonical_height_word(system, word, p, opts)?;
    let preperiodic = word.is_periodic() && find_cycle(system, word, p, depth.max(opts.depth), &opts.limits)?.is_some();
    if preperiodic {
        // a cycle forces ĥ = 0 exactly
        hhat.value = Interval::zero(prec);
    }
    let scaled = hhat.value.scale_rational(eps);
    let letters = word.prefix(depth).ok_or_else(|| {
        Error::InvalidParameter(format!("word {word} is shorter than {depth}"))
    })?;
    let mut members = Vec::with_capacity(depth + 1);
    let mut x = p.clone();
    let mut dn = BigInt::one();
    for n in 0..=depth {
        if n > 0 {
            let m = system.map(letters[n - 1])?;
            opts.limits.check_point(&x, &letters[..n - 1])?;
            x = m.eval(&x);
            dn *= BigInt::from(m.degree());
        }
        let rhs = scaled.scale_int(&dn);
        let (lhs, verdict) = match proximity(&x, a, s) {
            None => (None, Verdict::In),
            Some(l) => {
                let iv = l.to_interval(prec);
                let v = if iv.lo() >= rhs.hi() {
                    Verdict::In
                } else if iv.hi() < rhs.lo() {
                    Verdict::Out
                } else {
                    Verdict::Ambiguous
                };
                (Some(iv), v)
            }
        };
        members.push(GammaEntry {
            n,
            verdict,
            point: x.clone(),
            lhs,
            rhs,
        });
    }
    Ok(GammaRecord {
        word: word.clone(),
        a: a.clone(),
        p: p.clone(),
        s: s.clone(),
        epsilon: format_rational(eps),
        depth,
        hhat,
        preperiodic,
        members,
    })
}

/// `λ_v(Φ^n(P), A) / D_n` for `n <= depth`; `None` entries mark `Φ^n(P) = A`.
pub fn normalized_proximity(
    system: &MapSystem,
    word: &Word,
    p: &ProjPoint,
    a: &ProjPoint,
    v: &Place,
    depth: usize,
    prec: u32,
) -> Result<Vec<Option<Interval>>> {
    let letters = word.prefix(depth).ok_or(Error::EmptyWord)?;
    let mut x = p.clone();
    let mut dn = BigInt::one();
    let mut out = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        if n > 0 {
            let m = system.map(letters[n - 1])?;
            x = m.eval(&x);
            dn *= BigInt::from(m.degree());
        }
        out.push(
            log_chordal(&x, a, v)
                .value()
                .map(|l| l.to_interval(prec).div_int(&dn)),
        );
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub hits: Vec<OrbitRecord>,
    pub count: usize,
    pub depth: usize,
    /// Distinct points `Φ^n(P)`, `n >= 1`, examined.
    pub distinct_points: usize,
    pub bound_value: Option<f64>,
}

/// Distinct orbit points `Q = Φ^n(P)`, `n >= 1`, with `z(Q) ∈ R_S`; each
/// point is listed with the first word reaching it. `∞` is never counted.
pub fn s_integral_census(system: &MapSystem, p: &ProjPoint, s: &PlaceSet, depth: usize, opts: &TreeOptions) -> Result<CensusReport> {
    if !s.contains_infinite() {
        return Err(Error::MissingInfinitePlace);
    }
    let all = enumerate_tree(
        system,
        p,
        depth,
        &TreeOptions {
            dedupe: false,
            ..*opts
        },
    )?;
    let mut seen = HashSet::new();
    let mut distinct = 0;
    let mut hits = Vec::new();
    for r in all.into_iter().filter(|r| r.n >= 1) {
        if !seen.insert(r.point.clone()) {
            continue;
        }
        distinct += 1;
        if let Some(z) = r.point.affine() {
            if is_s_integer(&z, s) {
                hits.push(r);
            }
        }
    }
    Ok(CensusReport {
        count: hits.len(),
        hits,
        depth,
        distinct_points: distinct,
        bound_value: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioStatus {
    Defined,
    /// `|a_n| <= 1` or `|b_n| <= 1`: a logarithm vanishes.
    Undefined,
    /// The orbit reached `∞`; the series stops here.
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioTerm {
    pub n: usize,
    pub a_bits: u64,
    pub b_bits: u64,
    #[serde(skip)]
    pub ratio: Option<Interval>,
    pub status: RatioStatus,
}

impl RatioTerm {
    pub fn ratio_f64(&self) -> Option<f64> {
        self.ratio.as_ref().map(Interval::mid_f64)
    }

    /// Certified enclosure of `|ratio - 1|`.
    pub fn distance_from_one(&self) -> Option<Interval> {
        let prec = self.ratio.as_ref()?.precision();
        self.ratio
            .as_ref()
            .map(|r| r.sub(&Interval::from_int(1, prec)).abs())
    }
}

fn ratio_of(x: &ProjPoint, n: usize, prec: u32) -> RatioTerm {
    let (a, b) = (x.x().magnitude(), x.y().magnitude());
    let mut term = RatioTerm {
        n,
        a_bits: a.bits(),
        b_bits: b.bits(),
        ratio: None,
        status: RatioStatus::Defined,
    };
    if x.is_infinity() {
        term.status = RatioStatus::Infinity;
    } else if a <= &BigUint::one() || b <= &BigUint::one() {
        term.status = RatioStatus::Undefined;
    } else {
        term.ratio = Some(Interval::ln_int(a, prec).div(&Interval::ln_int(b, prec)));
    }
    term
}

/// `log|a_n| / log|b_n|` for `Φ^n(α) = a_n / b_n`, `1 <= n <= depth`.
pub fn ratio_series(system: &MapSystem, word: &Word, alpha: &ProjPoint, depth: usize, prec: u32, limits: &WorkLimits) -> Result<Vec<RatioTerm>> {
    word.validate(system.k())?;
    if alpha.is_infinity() {
        return Err(Error::InvalidParameter("α must be affine".into()));
    }
    let letters = word.prefix(depth).ok_or(Error::EmptyWord)?;
    let mut x = alpha.clone();
    let mut out = Vec::with_capacity(depth);
    for n in 1..=depth {
        limits.check_point(&x, &letters[..n - 1])?;
        x = system.map(letters[n - 1])?.eval(&x);
        let t = ratio_of(&x, n, prec);
        let stop = t.status == RatioStatus::Infinity;
        out.push(t);
        if stop {
            break;
        }
    }
    Ok(out)
}

/// CSV with columns `n, a_bits, b_bits, ratio, verdict`.
pub fn ratio_csv(terms: &[RatioTerm]) -> String {
    let mut out = String::from("n,a_bits,b_bits,ratio,verdict\n");
    for t in terms {
        let ratio = t.ratio_f64().map(|r| format!("{r:.15e}")).unwrap_or_default();
        let verdict = match t.status {
            RatioStatus::Defined => "defined",
            RatioStatus::Undefined => "undefined",
            RatioStatus::Infinity => "infinity",
        };
        let _ = writeln!(out, "{},{},{},{},{}", t.n, t.a_bits, t.b_bits, ratio, verdict);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AveragedRatio {
    pub n: usize,
    #[serde(serialize_with = "ser_opt_interval")]
    pub mean: Option<Interval>,
    pub defined: usize,
    pub excluded: usize,
}

/// Mean of `log|a_f(α)| / log|b_f(α)|` over all `k^n` words of length `n`
/// (words, not distinct maps). Undefined terms are excluded and counted.
pub fn averaged_ratio(system: &MapSystem, alpha: &ProjPoint, n: usize, prec: u32, limits: &WorkLimits) -> Result<AveragedRatio> {
    let mut sum = Interval::zero(prec);
    let mut defined = 0usize;
    let mut excluded = 0usize;
    for_each_node(system, alpha, n, limits, |w, x| {
        if w.len() == n {
            match ratio_of(x, n, prec).ratio {
                Some(r) => {
                    sum = sum.add(&r);
                    defined += 1;
                }
                None => excluded += 1,
            }
        }
        Ok(())
    })?;
    let mean = (defined > 0).then(|| sum.div_int(&BigInt::from(defined)));
    Ok(AveragedRatio {
        n,
        mean,
        defined,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn sys(s: &str) -> MapSystem {
        s.parse().unwrap()
    }

    fn pt(s: &str) -> ProjPoint {
        s.parse().unwrap()
    }

    fn places(s: &str) -> PlaceSet {
        s.parse().unwrap()
    }

    #[test]
    fn quasi_integral_examples() {
        let one = Rational::one();
        assert!(quasi_integral_test(&q("5"), &places("inf"), &one, 128).unwrap());
        assert!(!quasi_integral_test(&q("8/3"), &places("inf"), &one, 128).unwrap());
        assert!(quasi_integral_test(&q("8/3"), &places("inf,p3"), &one, 128).unwrap());
        assert!(matches!(
            quasi_integral_test(&q("2"), &places("inf"), &Rational::zero(), 128),
            Err(Error::InvalidEpsilon(_))
        ));
        assert!(quasi_integral_test(&q("1/3"), &places("inf"), &q("1/2"), 128).is_ok_and(|b| !b));
    }

    #[test]
    fn gamma_examples() {
        let f = sys("z^2");
        let w = Word::constant(1);
        let half = q("1/2");
        let opts = HeightOptions::default();
        let inf = ProjPoint::infinity();
        let g = gamma_set(&f, &w, &places("inf"), &inf, &pt("2"), &half, 5, &opts).unwrap();
        assert_eq!(g.in_set(), vec![0, 1, 2, 3, 4, 5]);
        assert!(!g.preperiodic);
        let g = gamma_set(&f, &w, &places("inf"), &pt("0"), &pt("2"), &half, 5, &opts).unwrap();
        assert_eq!(g.count(Verdict::Out), 6);
        // the orbit of 1 is fixed: ĥ = 0 and the distance to A = 1 is infinite
        let g = gamma_set(&f, &w, &places("inf"), &pt("1"), &pt("1"), &half, 3, &opts).unwrap();
        assert!(g.preperiodic);
        assert!(g.members.iter().all(|e| e.lhs.is_none() && e.verdict == Verdict::In));
    }

    #[test]
    fn gamma_reports_ambiguity_at_low_precision() {
        // ĥ of 3 under z^2 - 1 is not exact, so a wide enclosure straddles
        let f = sys("z^2-1");
        let opts = HeightOptions {
            depth: 1,
            ..HeightOptions::default()
        };
        let g = gamma_set(&f, &Word::constant(1), &places("inf"), &ProjPoint::infinity(), &pt("3"), &Rational::one(), 2, &opts).unwrap();
        assert!(g.count(Verdict::Ambiguous) > 0);
    }

    #[test]
    fn census_examples() {
        let opts = TreeOptions::default();
        let s = places("inf");
        let c = s_integral_census(&sys("z^2"), &pt("2"), &s, 4, &opts).unwrap();
        assert_eq!(c.count, 4);
        let c = s_integral_census(&sys("1/z^2"), &pt("2"), &s, 4, &opts).unwrap();
        let hits: Vec<String> = c.hits.iter().map(|r| r.point.to_string()).collect();
        assert_eq!(hits, ["16", "65536"]);
        let c = s_integral_census(&sys("z^2"), &ProjPoint::infinity(), &s, 3, &opts).unwrap();
        assert_eq!(c.count, 0);
        assert!(matches!(
            s_integral_census(&sys("z^2"), &pt("2"), &places("p2"), 3, &opts),
            Err(Error::MissingInfinitePlace)
        ));
    }

    #[test]
    fn ratio_examples() {
        let lim = WorkLimits::default();
        let f = sys("(z^2-1)/(z^2+1)");
        let r = ratio_series(&f, &Word::constant(1), &pt("2"), 2, 128, &lim).unwrap();
        assert!((r[0].ratio_f64().unwrap() - 3f64.ln() / 5f64.ln()).abs() < 1e-12);
        assert!((r[1].ratio_f64().unwrap() - 8f64.ln() / 17f64.ln()).abs() < 1e-12);
        let r = ratio_series(&sys("z^2"), &Word::constant(1), &pt("2"), 4, 128, &lim).unwrap();
        assert!(r.iter().all(|t| t.status == RatioStatus::Undefined));
        // 1/z^2 swaps numerator and denominator, so consecutive ratios are reciprocal
        let inv = sys("1/z^2");
        let r = ratio_series(&inv, &Word::constant(1), &pt("2/3"), 4, 128, &lim).unwrap();
        for pair in r.windows(2) {
            let prod = pair[0].ratio.as_ref().unwrap().mul(pair[1].ratio.as_ref().unwrap());
            assert!(prod.contains(&crate::numeric::Dyadic::from_int(1)));
        }
        let csv = ratio_csv(&r);
        assert!(csv.starts_with("n,a_bits,b_bits,ratio,verdict\n1,"));
    }

    #[test]
    fn averaged_ratio_examples() {
        let lim = WorkLimits::default();
        let f = sys("(z^2-1)/(z^2+1)");
        let single = averaged_ratio(&f, &pt("2"), 3, 128, &lim).unwrap();
        let series = ratio_series(&f, &Word::constant(1), &pt("2"), 3, 128, &lim).unwrap();
        assert!(single.mean.unwrap().overlaps(series[2].ratio.as_ref().unwrap()));
        let two = sys("(z^2-1)/(z^2+1); (z^3-2)/(z^3+2)");
        let avg = averaged_ratio(&two, &pt("2"), 2, 128, &lim).unwrap();
        assert_eq!(avg.defined + avg.excluded, 4);
    }
}
