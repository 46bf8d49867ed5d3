//! Batch front end: an experiment config in, deterministic JSON and CSV
//! reports out.

pub mod config;
pub mod verify;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{choose_m, corollary_bounds, kappa_constants, prop33_bound, theorem52_bound, RamificationMode};
use crate::error::{Error, Result};
use crate::heights::{canonical_height_system, canonical_height_word, hmin_estimate};
use crate::integrality::{averaged_ratio, gamma_set, ratio_csv, ratio_series, s_integral_census, Verdict};
use crate::orbits::{enumerate_tree, hypothesis_check, iterate_word, preperiodicity_check, records_csv, tree_size};
use crate::words::enumerate_words;

pub use config::ExperimentConfig;
pub use verify::{SuiteResult, VerifyOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subcommand {
    Orbit,
    Canonical,
    SystemHeight,
    Gamma,
    Census,
    Ratios,
    Bounds,
    Verify,
}

impl Subcommand {
    pub const ALL: [Subcommand; 8] = [
        Subcommand::Orbit,
        Subcommand::Canonical,
        Subcommand::SystemHeight,
        Subcommand::Gamma,
        Subcommand::Census,
        Subcommand::Ratios,
        Subcommand::Bounds,
        Subcommand::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Orbit => "orbit",
            Subcommand::Canonical => "canonical",
            Subcommand::SystemHeight => "system-height",
            Subcommand::Gamma => "gamma",
            Subcommand::Census => "census",
            Subcommand::Ratios => "ratios",
            Subcommand::Bounds => "bounds",
            Subcommand::Verify => "verify",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Subcommand> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::parse("subcommand", s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub depth: Option<usize>,
    pub seed: Option<u64>,
    /// Never part of the report: output must not depend on it.
    pub workers: usize,
    /// Cases per property suite for `verify`.
    pub cases: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> RunOptions {
        RunOptions {
            depth: None,
            seed: None,
            workers: 1,
            cases: None,
        }
    }
}

/// What one subcommand produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub subcommand: Subcommand,
    pub config_hash: String,
    pub json: Value,
    pub csv: Option<String>,
    /// Human-readable table printed to stdout.
    pub table: Option<String>,
    /// False only when `verify` saw a failing suite.
    pub passed: bool,
}

impl Report {
    fn stem(&self) -> String {
        format!("{}-{}", self.subcommand, self.config_hash)
    }

    /// `(file name, contents)` pairs, JSON first.
    pub fn files(&self) -> Vec<(String, String)> {
        let mut json = serde_json::to_string_pretty(&self.json).expect("report serializes");
        json.push('\n');
        let mut out = vec![(format!("{}.json", self.stem()), json)];
        if let Some(csv) = &self.csv {
            out.push((format!("{}.csv", self.stem()), csv.clone()));
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.files()
            .into_iter()
            .map(|(name, body)| {
                let path = dir.join(name);
                std::fs::write(&path, body)?;
                Ok(path)
            })
            .collect()
    }
}

/// Machine-readable description of an error.
pub fn diagnostic(err: &Error) -> Value {
    let mut d = json!({
        "kind": err.kind(),
        "message": err.to_string(),
        "exitCode": err.exit_code(),
    });
    if let Error::CommonFactor { factor } = err {
        d["witness"] = json!(factor);
    }
    json!({ "error": d })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Apply the overrides and dispatch.
pub fn run(cmd: Subcommand, config: &ExperimentConfig, opts: &RunOptions) -> Result<Report> {
    let mut cfg = config.clone();
    if let Some(d) = opts.depth {
        cfg.depth = d;
    }
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    let workers = opts.workers.max(1);
    let mut csv = None;
    let mut table = None;
    let mut passed = true;
    let result = match cmd {
        Subcommand::Orbit => {
            let records = enumerate_tree(&cfg.system, &cfg.point, cfg.depth, &cfg.tree_options(workers))?;
            let along = iterate_word(&cfg.system, &cfg.word, &cfg.point, cfg.depth)?;
            let hyp = hypothesis_check(&cfg.system, &cfg.point_a, cfg.depth, &cfg.work_limits)?;
            csv = Some(records_csv(&records));
            json!({
                "nodes": records.len(),
                "word": cfg.word,
                "wordOrbit": along.iter().map(|r| r.point.to_string()).collect::<Vec<_>>(),
                "hypotheses": { "summary": hyp.summary(), "holds": hyp.holds(), "report": to_value(&hyp) },
            })
        }
        Subcommand::Canonical => {
            let opts = cfg.height_options();
            let est = canonical_height_word(&cfg.system, &cfg.word, &cfg.point, &opts)?;
            let verdict = if cfg.word.is_periodic() {
                to_value(&preperiodicity_check(&cfg.system, &cfg.word, &cfg.point, cfg.depth, &opts)?)
            } else {
                Value::Null
            };
            let along = iterate_word(&cfg.system, &cfg.word, &cfg.point, cfg.depth)?;
            csv = Some(records_csv(&along));
            json!({ "word": cfg.word, "hhat": est, "preperiodicity": verdict })
        }
        Subcommand::SystemHeight => {
            let opts = cfg.height_options();
            let est = canonical_height_system(&cfg.system, &cfg.point, cfg.depth, &opts)?;
            let hmin = hmin_estimate(&cfg.system, &cfg.point, cfg.period_bound, &opts)?;
            json!({ "hhat": est, "hmin": hmin })
        }
        Subcommand::Gamma => {
            let g = gamma_set(&cfg.system, &cfg.word, &cfg.places, &cfg.point_a, &cfg.point, &cfg.epsilon, cfg.depth, &cfg.height_options())?;
            json!({
                "inSet": g.in_set(),
                "counts": { "in": g.count(Verdict::In), "out": g.count(Verdict::Out), "ambiguous": g.count(Verdict::Ambiguous) },
                "record": to_value(&g),
            })
        }
        Subcommand::Census => {
            let mut report = s_integral_census(&cfg.system, &cfg.point, &cfg.places, cfg.depth, &cfg.tree_options(workers))?;
            let bound = census_bound(&cfg)?;
            report.bound_value = bound.as_ref().and_then(|b| b["cor55Count"].as_f64());
            csv = Some(records_csv(&report.hits));
            json!({
                "hits": report.hits.iter().map(|r| r.point.to_string()).collect::<Vec<_>>(),
                "report": to_value(&report),
                "bound": bound,
            })
        }
        Subcommand::Ratios => {
            let prec = cfg.precision_bits;
            let terms = ratio_series(&cfg.system, &cfg.word, &cfg.point, cfg.depth, prec, &cfg.work_limits)?;
            let mut averaged = Vec::new();
            if cfg.system.k() > 1 {
                for n in 1..=cfg.depth {
                    match averaged_ratio(&cfg.system, &cfg.point, n, prec, &cfg.work_limits) {
                        Ok(a) => averaged.push(to_value(&a)),
                        Err(Error::WorkLimit(_)) => break,
                        Err(e) => return Err(e),
                    }
                }
            }
            csv = Some(ratio_csv(&terms));
            json!({
                "terms": terms.iter().map(|t| json!({
                    "n": t.n,
                    "status": t.status,
                    "ratio": t.ratio.as_ref().map(|r| [r.lo_f64(), r.hi_f64()]),
                    "aBits": t.a_bits,
                    "bBits": t.b_bits,
                })).collect::<Vec<_>>(),
                "averaged": averaged,
            })
        }
        Subcommand::Bounds => bounds_report(&cfg, workers)?,
        Subcommand::Verify => {
            let vopts = VerifyOptions {
                seed: cfg.seed,
                cases: opts.cases.unwrap_or(VerifyOptions::default().cases),
                prec: cfg.precision_bits,
            };
            let results = verify::run_all(&vopts);
            passed = results.iter().all(SuiteResult::passed);
            table = Some(verify::format_table(&results));
            json!({ "cases": vopts.cases, "passed": passed, "suites": results })
        }
    };
    let config_hash = cfg.hash();
    let json = json!({
        "subcommand": cmd.name(),
        "configHash": config_hash,
        "config": to_value(&cfg),
        "result": result,
    });
    Ok(Report {
        subcommand: cmd,
        config_hash,
        json,
        csv,
        table,
        passed,
    })
}

/// Census count bound from `ĥ^min`, or `None` when `P` is not certified wandering.
fn census_bound(cfg: &ExperimentConfig) -> Result<Option<Value>> {
    let prec = cfg.precision_bits;
    let hmin = hmin_estimate(&cfg.system, &cfg.point, cfg.period_bound, &cfg.height_options())?;
    if hmin.value.value.lo().signum() <= 0 {
        return Ok(None);
    }
    let hf = cfg.system.height().to_interval(prec);
    let c = corollary_bounds(&cfg.system, &cfg.places, &hf, &hmin.value.value, &cfg.bound_parameters, prec)?;
    Ok(Some(json!({
        "cor54": c.cor54,
        "cor55M": c.cor55_m,
        "cor55Count": c.cor55_count.to_f64(),
        "logTerm": c.log_term,
        "hmin": to_value(&hmin.value),
    })))
}

/// Constants, bounds and the empirical counts they should dominate.
fn bounds_report(cfg: &ExperimentConfig, workers: usize) -> Result<Value> {
    let prec = cfg.precision_bits;
    let hopts = cfg.height_options();
    let system = &cfg.system;
    let hf = system.height();
    let kappa_ntr = kappa_constants(system, RamificationMode::NotTotallyRamified);
    let kappa_do = kappa_constants(system, RamificationMode::DistinctOrbit);
    let m = choose_m(&cfg.epsilon, &kappa_ntr, prec)?;

    // composition heights against the exact bound, all words up to length 3
    let mut composition = Vec::new();
    for n in 1..=cfg.depth.min(3) {
        let mut observed = crate::numeric::LogSum::zero();
        for w in enumerate_words(system.k(), n) {
            let h = system.compose_word(w.letters())?.expect("nonempty word").height();
            if h.compare(&observed, prec) == Some(std::cmp::Ordering::Greater) {
                observed = h;
            }
        }
        let bound = prop33_bound(n as u32, system.d_max() as u64, &hf)?;
        composition.push(json!({
            "n": n,
            "bound": bound.to_f64(),
            "maxObserved": observed.to_f64(),
            "dominates": bound.compare(&observed, prec) != Some(std::cmp::Ordering::Less),
        }));
    }

    let hhat_p = canonical_height_word(system, &cfg.word, &cfg.point, &hopts)?;
    // the system height of A on a tree no larger than the node cap allows
    let mut depth_a = cfg.depth;
    while depth_a > 0 && tree_size(system.k(), depth_a).is_none_or(|n| n > cfg.work_limits.max_nodes) {
        depth_a -= 1;
    }
    let hhat_a = canonical_height_system(system, &cfg.point_a, depth_a, &hopts)?;
    let gamma = gamma_set(system, &cfg.word, &cfg.places, &cfg.point_a, &cfg.point, &cfg.epsilon, cfg.depth, &hopts)?;
    // ambiguous verdicts count as members
    let gamma_count = gamma.members.len() - gamma.count(Verdict::Out);
    let theorem52 = match theorem52_bound(system, &cfg.places, &cfg.epsilon, &hhat_a.value, &hf.to_interval(prec), &hhat_p.value, &cfg.bound_parameters, prec) {
        Ok(b) => json!({
            "bound": to_value(&b),
            "empiricalCount": gamma_count,
            "dominates": b.total >= gamma_count as f64,
        }),
        Err(Error::NotWandering(msg)) => json!({ "skipped": format!("ĥ_Φ(P) enclosure {msg} is not certified positive") }),
        Err(e) => return Err(e),
    };

    let corollary = if cfg.places.contains_infinite() {
        let census = s_integral_census(system, &cfg.point, &cfg.places, cfg.depth, &cfg.tree_options(workers))?;
        match census_bound(cfg)? {
            Some(mut b) => {
                let dominates = b["cor55Count"].as_f64().is_some_and(|c| c >= census.count as f64);
                b["empiricalCount"] = json!(census.count);
                b["dominates"] = json!(dominates);
                b
            }
            None => json!({ "skipped": "ĥ^min is not certified positive", "empiricalCount": census.count }),
        }
    } else {
        json!({ "skipped": "S does not contain the infinite place" })
    };

    let hyp = hypothesis_check(system, &cfg.point_a, cfg.depth.min(6), &cfg.work_limits)?;
    Ok(json!({
        "hF": hf.to_f64(),
        "hhatP": hhat_p,
        "hhatA": hhat_a,
        "kappa": { "notTotallyRamified": to_value(&kappa_ntr), "distinctOrbit": to_value(&kappa_do) },
        "m": to_value(&m),
        "composition": composition,
        "theorem52": theorem52,
        "corollary": corollary,
        "hypotheses": { "summary": hyp.summary(), "holds": hyp.holds() },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(text).unwrap()
    }

    #[test]
    fn census_report_lists_hits() {
        let c = cfg(r#"{"system": "1/z^2", "point": "2", "depth": 4}"#);
        let r = run(Subcommand::Census, &c, &RunOptions::default()).unwrap();
        assert_eq!(r.json["result"]["hits"], json!(["16", "65536"]));
        assert!(r.files()[0].0.starts_with("census-"));
    }

    #[test]
    fn gamma_report_is_all_in() {
        let c = cfg(r#"{"system": "z^2", "point": "2", "depth": 5}"#);
        let r = run(Subcommand::Gamma, &c, &RunOptions::default()).unwrap();
        assert_eq!(r.json["result"]["inSet"], json!([0, 1, 2, 3, 4, 5]));
    }

    #[test]
    fn overrides_change_the_hash_but_workers_do_not() {
        let c = cfg(r#"{"system": "z^2; z^3", "point": "2", "depth": 3}"#);
        let one = run(Subcommand::Orbit, &c, &RunOptions::default()).unwrap();
        let many = run(Subcommand::Orbit, &c, &RunOptions { workers: 8, ..RunOptions::default() }).unwrap();
        assert_eq!(one.files(), many.files());
        let deeper = run(Subcommand::Orbit, &c, &RunOptions { depth: Some(4), ..RunOptions::default() }).unwrap();
        assert_ne!(one.config_hash, deeper.config_hash);
    }

    #[test]
    fn work_limit_is_reported() {
        let c = cfg(r#"{"system": "z^2; z^3", "depth": 30, "workLimits": {"maxNodes": 1000}}"#);
        let err = run(Subcommand::Orbit, &c, &RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert_eq!(diagnostic(&err)["error"]["kind"], "work_limit");
    }

    #[test]
    fn bounds_dominate_on_a_small_system() {
        let c = cfg(r#"{"system": "z^2; z^3", "point": "2", "word": {"mode": "periodic", "letters": [1, 2]}, "depth": 5}"#);
        let r = run(Subcommand::Bounds, &c, &RunOptions::default()).unwrap();
        let res = &r.json["result"];
        assert_eq!(res["theorem52"]["dominates"], json!(true), "{res}");
        assert_eq!(res["corollary"]["dominates"], json!(true), "{res}");
        assert!(res["composition"].as_array().unwrap().iter().all(|c| c["dominates"] == json!(true)));
    }
}
