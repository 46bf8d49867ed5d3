//! Acceptance suite: one line per criterion. Criteria listed in
//! `UNATTAINABLE` are evaluated and reported like the rest but do not fail the
//! run; every other failure does.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use orbitint::bounds::{corollary_bounds, theorem52_bound, BoundParameters};
use orbitint::cli::verify::{self, SuiteResult};
use orbitint::cli::{run, ExperimentConfig, RunOptions, Subcommand};
use orbitint::heights::{c_bound, canonical_height_system, canonical_height_word, ConstantMode, HeightOptions};
use orbitint::integrality::{gamma_set, quasi_integral_test, ratio_series, s_integral_census, RatioStatus};
use orbitint::numeric::{Dyadic, Interval};
use orbitint::orbits::{TreeOptions, WorkLimits};
use orbitint::places::{parse_rational, PlaceSet, Rational};
use orbitint::proj1::ProjPoint;
use orbitint::ratmap::{MapSystem, RatMap};
use orbitint::words::Word;

const SEED: u64 = 20_240_917;
const PREC: u32 = 128;
const UNATTAINABLE: &[usize] = &[11];

/// ln 2 to 40 digits, bracketed.
const LN2_LO: &str = "6931471805599453094172321214581765680754/10000000000000000000000000000000000000000";
const LN2_HI: &str = "6931471805599453094172321214581765680756/10000000000000000000000000000000000000000";

struct Outcome {
    pass: bool,
    detail: String,
}

/// `min_cases` per suite; skipped cases fail a suite unless `skips_ok`.
fn from_suites(results: &[SuiteResult], min_cases: &[usize], skips_ok: bool) -> Outcome {
    let pass = results
        .iter()
        .zip(min_cases)
        .all(|(r, &min)| r.passed() && r.cases >= min && (skips_ok || r.skipped == 0));
    let detail = results
        .iter()
        .map(|r| match &r.first_failure {
            Some(f) => format!("{}: {}/{} failed, {} skipped ({f})", r.name, r.failures, r.cases, r.skipped),
            None => format!("{}: {}/{} failed, {} skipped", r.name, r.failures, r.cases, r.skipped),
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { pass, detail }
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn sys(s: &str) -> MapSystem {
    s.parse().unwrap()
}

fn pt(s: &str) -> ProjPoint {
    s.parse().unwrap()
}

fn contains_ln2(iv: &Interval) -> bool {
    let lo = Interval::from_rational(&q(LN2_LO), 256);
    let hi = Interval::from_rational(&q(LN2_HI), 256);
    iv.lo() <= lo.lo() && iv.hi() >= hi.hi()
}

fn shipped_configs() -> Vec<(String, ExperimentConfig)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, ExperimentConfig::load(&p).unwrap())
        })
        .collect()
}

fn c1() -> Outcome {
    from_suites(
        &[verify::product_formula(SEED, 10_000, PREC), verify::abs_log_multiplicativity(SEED + 1, 10_000, PREC)],
        &[10_000, 10_000],
        false,
    )
}

fn c2() -> Outcome {
    from_suites(
        &[verify::height_identity(SEED, 10_000, PREC), verify::height_defect(SEED + 1, 10_000, PREC)],
        &[10_000, 10_000],
        false,
    )
}

fn c3() -> Outcome {
    // 10^4 premises at each of inf, 2 and 3
    from_suites(&[verify::chordal_lemma(SEED, 10_000, PREC)], &[30_000], false)
}

fn c4() -> Outcome {
    from_suites(
        &[verify::ramification_multiplicativity(SEED, 1_000, PREC), verify::ramification_conjugation(SEED + 1, 100, PREC)],
        &[1_000, 100],
        false,
    )
}

fn c5() -> Outcome {
    let mut problems = Vec::new();
    // rounding allowance on top of the truncation width 2c/D_n
    let slack = Dyadic::new(BigInt::from(1), -((PREC as i64) - 8));
    for d in [2usize, 3] {
        let system = MapSystem::single(RatMap::power(d)).unwrap();
        let c = c_bound(&RatMap::power(d), ConstantMode::Certified, PREC);
        for n in 1..=8 {
            let opts = HeightOptions { depth: n, ..HeightOptions::default() };
            let est = canonical_height_word(&system, &Word::constant(1), &pt("2"), &opts).unwrap();
            let dn = BigInt::from(d).pow(n as u32);
            let allowed = Interval::point(c.upper().clone(), PREC)
                .scale_int(&BigInt::from(2))
                .div_int(&dn)
                .widen(&slack);
            if !contains_ln2(&est.value) {
                problems.push(format!("z^{d} depth {n}: ln 2 not enclosed"));
            }
            if &est.value.width() > allowed.hi() {
                problems.push(format!("z^{d} depth {n}: width {:e}", est.value.width().to_f64()));
            }
        }
    }
    let preperiodic = [("z^2", "1"), ("z^2", "0"), ("z^2", "-1"), ("z^2", "inf"), ("z^2-1", "0"), ("z^2-2", "0"), ("z^2-2", "2"), ("z^3", "-1")];
    for (f, p) in preperiodic {
        let est = canonical_height_word(&sys(f), &Word::constant(1), &pt(p), &HeightOptions::default()).unwrap();
        if !est.value.contains_zero() {
            problems.push(format!("{f} at {p}: [{}, {}] misses 0", est.value.lo_f64(), est.value.hi_f64()));
        }
    }
    let shift = from_suites(&[verify::canonical_shift(SEED, 100, PREC)], &[100], false);
    Outcome {
        pass: problems.is_empty() && shift.pass,
        detail: format!("monomial and preperiodic checks: {} problems {problems:?}; {}", problems.len(), shift.detail),
    }
}

fn c6() -> Outcome {
    let f = sys("z^2; z^3");
    let opts = HeightOptions::default();
    let h = |p: &str| canonical_height_system(&f, &pt(p), 8, &opts).unwrap().value;
    let (h2, h1, h0) = (h("2"), h("1"), h("0"));
    let exact = contains_ln2(&h2) && h1.contains_zero() && h0.contains_zero();
    let suites = from_suites(&[verify::system_eigen(SEED, 100, PREC), verify::system_tail(SEED + 1, 100, PREC)], &[100, 100], false);
    Outcome {
        pass: exact && suites.pass,
        detail: format!(
            "ĥ_F(2) = [{:.12}, {:.12}], ĥ_F(1) hi {:e}, ĥ_F(0) hi {:e}; {}",
            h2.lo_f64(),
            h2.hi_f64(),
            h1.hi_f64(),
            h0.hi_f64(),
            suites.detail
        ),
    }
}

fn c7() -> Outcome {
    // four word lengths per system
    from_suites(&[verify::composition_height(SEED, 100, PREC)], &[400], false)
}

fn c8() -> Outcome {
    // skips are orbits outside the hypothesis
    from_suites(&[verify::ramification_decay(SEED, 100, PREC)], &[100], true)
}

fn c9() -> Outcome {
    let s = PlaceSet::infinite_only();
    let census = s_integral_census(&sys("1/z^2"), &pt("2"), &s, 4, &TreeOptions::default()).unwrap();
    let hits: Vec<String> = census.hits.iter().map(|r| r.point.to_string()).collect();
    let census_ok = hits == ["16", "65536"];
    let quasi = quasi_integral_test(&q("8/3"), &"inf,p3".parse().unwrap(), &q("1"), PREC).unwrap();
    let g = gamma_set(&sys("z^2"), &Word::constant(1), &s, &ProjPoint::infinity(), &pt("2"), &q("1/2"), 5, &HeightOptions::default()).unwrap();
    let all_in = g.in_set() == vec![0, 1, 2, 3, 4, 5];
    let mut ambiguous = Vec::new();
    for (name, cfg) in shipped_configs() {
        let r = run(Subcommand::Gamma, &cfg, &RunOptions::default()).unwrap();
        let n = r.json["result"]["counts"]["ambiguous"].as_u64().unwrap();
        if n > 0 {
            ambiguous.push(format!("{name}: {n}"));
        }
    }
    Outcome {
        pass: census_ok && quasi && all_in && ambiguous.is_empty(),
        detail: format!("census {hits:?}; quasi(8/3) {quasi}; Γ = {:?}; ambiguous in shipped configs: {ambiguous:?}", g.in_set()),
    }
}

fn nonincreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] <= w[0])
}

fn nondecreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] >= w[0])
}

fn c10() -> Outcome {
    let mut problems = Vec::new();
    let mut checked = 0;
    for (name, cfg) in shipped_configs() {
        let r = run(Subcommand::Bounds, &cfg, &RunOptions::default()).unwrap();
        for key in ["theorem52", "corollary"] {
            let b = &r.json["result"][key];
            if b.get("skipped").is_some() {
                continue;
            }
            checked += 1;
            if b["dominates"] != serde_json::json!(true) {
                problems.push(format!("{name} {key}"));
            }
        }
    }
    let f = sys("z^2; z^3");
    let p = BoundParameters::default();
    let half = q("1/2");
    let iv = |x: f64| Interval::from_f64(x, PREC);
    let sets: Vec<PlaceSet> = ["inf", "inf,p2", "inf,p2,p3", "inf,p2,p3,p5"].iter().map(|s| s.parse().unwrap()).collect();
    let sweep = [0.05, 0.1, 0.3, 0.7, 1.0, 2.0, 5.0];
    let t52 = |s: &PlaceSet, a: f64, hf: f64, hp: f64| theorem52_bound(&f, s, &half, &iv(a), &iv(hf), &iv(hp), &p, PREC).unwrap().total;
    let cor = |s: &PlaceSet, hf: f64, hm: f64| {
        let c = corollary_bounds(&f, s, &iv(hf), &iv(hm), &p, PREC).unwrap();
        (c.cor54, c.cor55_count.to_f64().unwrap())
    };
    let s0 = &sets[0];
    let monotone = [
        ("count bound in ĥ(P)", nonincreasing(&sweep.map(|h| t52(s0, 1.0, 1.0, h)))),
        ("count bound in #S", nondecreasing(&sets.iter().map(|s| t52(s, 1.0, 1.0, 0.3)).collect::<Vec<_>>())),
        ("count bound in h(F)", nondecreasing(&sweep.map(|h| t52(s0, 1.0, h, 0.3)))),
        ("count bound in ĥ(A)", nondecreasing(&sweep.map(|h| t52(s0, h, 1.0, 0.3)))),
        ("S-integral bound in ĥ^min", nonincreasing(&sweep.map(|h| cor(s0, 1.0, h).0))),
        ("word-count bound in ĥ^min", nonincreasing(&sweep.map(|h| cor(s0, 1.0, h).1))),
        ("S-integral bound in #S", nondecreasing(&sets.iter().map(|s| cor(s, 1.0, 0.3).0).collect::<Vec<_>>())),
        ("S-integral bound in h(F)", nondecreasing(&sweep.map(|h| cor(s0, h, 0.3).0))),
        ("word-count bound in h(F)", nondecreasing(&sweep.map(|h| cor(s0, h, 0.3).1))),
    ];
    for (what, ok) in monotone {
        if !ok {
            problems.push(what.to_string());
        }
    }
    Outcome {
        pass: problems.is_empty() && checked > 0,
        detail: format!("{checked} dominance checks over shipped configs, 9 monotonicity sweeps; problems {problems:?}"),
    }
}

fn c11() -> Outcome {
    let f = sys("(z^2-1)/(z^2+1)");
    let terms = ratio_series(&f, &Word::constant(1), &pt("2"), 8, PREC, &WorkLimits::default()).unwrap();
    let dist: Vec<Interval> = terms
        .iter()
        .filter(|t| t.status == RatioStatus::Defined)
        .map(|t| t.distance_from_one().unwrap())
        .collect();
    let last = &dist[dist.len().saturating_sub(3)..];
    let monotone = last.windows(2).all(|w| w[1].hi() <= w[0].lo());
    let small = last.last().is_some_and(|d| d.hi_f64() < 0.1);
    let shown: Vec<String> = dist.iter().map(|d| format!("{:.4}", d.mid_f64())).collect();
    Outcome {
        pass: monotone && small,
        detail: format!(
            "|ratio_n - 1| for n = 1..{}: {}; last three non-increasing: {monotone}; final < 0.1: {small}",
            dist.len(),
            shown.join(", ")
        ),
    }
}

fn c12() -> Outcome {
    let mut problems = Vec::new();
    let mut compared = 0;
    for (name, cfg) in shipped_configs() {
        for cmd in [Subcommand::Orbit, Subcommand::Census] {
            let files: Vec<_> = [1, 2, 8]
                .iter()
                .map(|&w| run(cmd, &cfg, &RunOptions { workers: w, ..RunOptions::default() }).unwrap().files())
                .collect();
            compared += 1;
            if files[0] != files[1] || files[1] != files[2] {
                problems.push(format!("{name} {cmd}"));
            }
        }
    }
    Outcome {
        pass: problems.is_empty(),
        detail: format!("{compared} report sets compared across 1, 2 and 8 workers; differing {problems:?}"),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("exact arithmetic core", c1),
        ("height identities", c2),
        ("chordal distance lemma", c3),
        ("ramification", c4),
        ("canonical heights", c5),
        ("system height", c6),
        ("composition height bound", c7),
        ("ramification decay", c8),
        ("integrality", c9),
        ("bound dominance", c10),
        ("ratio trend", c11),
        ("determinism", c12),
    ];
    let mut blocking = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        let note = if !out.pass && UNATTAINABLE.contains(&id) { " (known unattainable)" } else { "" };
        println!("criterion {id:>2} {verdict}{note} [{name}] {secs:.1}s: {}", out.detail);
        if !out.pass && !UNATTAINABLE.contains(&id) {
            blocking += 1;
        }
    }
    if blocking == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
