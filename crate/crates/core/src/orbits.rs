//! Orbits along words, the full word tree of a system, and the hypothesis
//! checks run on it.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heights::{canonical_height_word, HeightEstimate, HeightOptions};
use crate::numeric::LogSum;
use crate::proj1::ProjPoint;
use crate::ratmap::MapSystem;
use crate::words::Word;

pub const DEFAULT_MAX_NODES: u64 = 1_000_000;
pub const DEFAULT_MAX_BITS: u64 = 1_000_000;

/// Hard caps on tree size and coordinate size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase", deny_unknown_fields)]
pub struct WorkLimits {
    pub max_nodes: u64,
    pub max_bits: u64,
}

impl Default for WorkLimits {
    fn default() -> WorkLimits {
        WorkLimits {
            max_nodes: DEFAULT_MAX_NODES,
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}

impl WorkLimits {
    /// Fail before any work if `sum_{n <= depth} k^n` exceeds the node cap.
    pub fn check_tree(&self, k: usize, depth: usize) -> Result<u64> {
        let nodes = tree_size(k, depth)
            .filter(|&n| n <= self.max_nodes)
            .ok_or_else(|| {
                Error::WorkLimit(format!(
                    "word tree with k = {k} to depth {depth} exceeds {} nodes",
                    self.max_nodes
                ))
            })?;
        Ok(nodes)
    }

    pub fn check_point(&self, p: &ProjPoint, letters: &[usize]) -> Result<()> {
        if p.bits() > self.max_bits {
            return Err(Error::WorkLimit(format!(
                "coordinate of {} bits at word {} exceeds {} bits",
                p.bits(),
                word_label(letters),
                self.max_bits
            )));
        }
        Ok(())
    }
}

/// `sum_{n <= depth} k^n`, `None` on overflow.
pub fn tree_size(k: usize, depth: usize) -> Option<u64> {
    let k = k as u64;
    let mut total = 0u64;
    let mut level = 1u64;
    for _ in 0..=depth {
        total = total.checked_add(level)?;
        level = level.checked_mul(k)?;
    }
    Some(total)
}

/// Letters joined by `.`; the empty word prints as the empty string.
pub fn word_label(letters: &[usize]) -> String {
    let parts: Vec<String> = letters.iter().map(ToString::to_string).collect();
    parts.join(".")
}

/// `Φ^n(P)` reached by the word prefix `letters`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub word: Vec<usize>,
    pub n: usize,
    pub point: ProjPoint,
}

impl OrbitRecord {
    pub fn height(&self) -> LogSum {
        self.point.height()
    }
}

/// `Φ^0(P), ..., Φ^n(P)` with `Φ^i = φ_{w_i} ∘ ... ∘ φ_{w_1}`.
pub fn iterate_word(system: &MapSystem, word: &Word, p: &ProjPoint, n: usize) -> Result<Vec<OrbitRecord>> {
    word.validate(system.k())?;
    let letters = word.prefix(n).ok_or_else(|| {
        Error::InvalidParameter(format!("word {word} is shorter than {n}"))
    })?;
    let mut out = Vec::with_capacity(n + 1);
    let mut x = p.clone();
    out.push(OrbitRecord {
        word: Vec::new(),
        n: 0,
        point: x.clone(),
    });
    for i in 0..n {
        x = system.map(letters[i])?.eval(&x);
        out.push(OrbitRecord {
            word: letters[..=i].to_vec(),
            n: i + 1,
            point: x.clone(),
        });
    }
    Ok(out)
}

/// Visit every node of the word tree to `depth` in preorder, which is
/// lexicographic word order.
pub fn for_each_node<V>(system: &MapSystem, root: &ProjPoint, depth: usize, limits: &WorkLimits, mut visit: V) -> Result<()>
where
    V: FnMut(&[usize], &ProjPoint) -> Result<()>,
{
    limits.check_tree(system.k(), depth)?;
    let mut prefix = Vec::with_capacity(depth);
    walk(system, root, depth, limits, &mut prefix, &mut visit)
}

fn walk<V>(system: &MapSystem, p: &ProjPoint, left: usize, limits: &WorkLimits, prefix: &mut Vec<usize>, visit: &mut V) -> Result<()>
where
    V: FnMut(&[usize], &ProjPoint) -> Result<()>,
{
    limits.check_point(p, prefix)?;
    visit(prefix, p)?;
    if left == 0 {
        return Ok(());
    }
    for (i, m) in system.maps().iter().enumerate() {
        let q = m.eval(p);
        prefix.push(i + 1);
        walk(system, &q, left - 1, limits, prefix, visit)?;
        prefix.pop();
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeOptions {
    pub dedupe: bool,
    pub workers: usize,
    pub limits: WorkLimits,
}

impl Default for TreeOptions {
    fn default() -> TreeOptions {
        TreeOptions {
            dedupe: false,
            workers: 1,
            limits: WorkLimits::default(),
        }
    }
}

/// All records with `n <= depth` in lexicographic word order. With `dedupe`
/// only the first word reaching each point is kept.
///
/// Subtrees below a fixed split level are explored on `workers` threads and
/// reassembled in preorder, so the output does not depend on `workers`.
pub fn enumerate_tree(system: &MapSystem, root: &ProjPoint, depth: usize, opts: &TreeOptions) -> Result<Vec<OrbitRecord>> {
    let limits = opts.limits;
    limits.check_tree(system.k(), depth)?;
    let workers = opts.workers.max(1);
    let mut records = if workers == 1 || depth == 0 {
        let mut out = Vec::new();
        for_each_node(system, root, depth, &limits, |w, p| {
            out.push(record(w, p));
            Ok(())
        })?;
        out
    } else {
        parallel_preorder(system, root, depth, workers, &limits)?
    };
    if opts.dedupe {
        let mut seen = HashSet::new();
        records.retain(|r| seen.insert(r.point.clone()));
    }
    Ok(records)
}

fn record(w: &[usize], p: &ProjPoint) -> OrbitRecord {
    OrbitRecord {
        word: w.to_vec(),
        n: w.len(),
        point: p.clone(),
    }
}

fn parallel_preorder(system: &MapSystem, root: &ProjPoint, depth: usize, workers: usize, limits: &WorkLimits) -> Result<Vec<OrbitRecord>> {
    let k = system.k();
    // smallest split level with at least `workers` subtrees
    let mut split = 1;
    while split < depth && (k as u64).saturating_pow(split as u32) < workers as u64 {
        split += 1;
    }
    let mut jobs: Vec<(Vec<usize>, ProjPoint)> = Vec::new();
    for_each_node(system, root, split, limits, |w, p| {
        if w.len() == split {
            jobs.push((w.to_vec(), p.clone()));
        }
        Ok(())
    })?;
    let results: Vec<Result<Vec<OrbitRecord>>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|t| {
                let jobs = &jobs;
                s.spawn(move || {
                    jobs.iter()
                        .enumerate()
                        .filter(|(i, _)| i % workers == t)
                        .map(|(i, (w, p))| {
                            let mut out = Vec::new();
                            let mut prefix = w.clone();
                            let r = walk(system, p, depth - split, limits, &mut prefix, &mut |w: &[usize], p: &ProjPoint| {
                                out.push(record(w, p));
                                Ok(())
                            });
                            (i, r.map(|_| out))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut slots: Vec<Option<Result<Vec<OrbitRecord>>>> = (0..jobs.len()).map(|_| None).collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
        slots.into_iter().map(|s| s.expect("every job ran")).collect()
    });
    let mut subtrees = Vec::with_capacity(results.len());
    for r in results {
        subtrees.push(r?);
    }
    // reassemble: shallow nodes in preorder, each split-level node followed by its subtree
    let mut out = Vec::new();
    let mut next = subtrees.into_iter();
    for_each_node(system, root, split, limits, |w, p| {
        if w.len() < split {
            out.push(record(w, p));
        } else {
            out.extend(next.next().expect("one subtree per split node"));
        }
        Ok(())
    })?;
    Ok(out)
}

/// Orbit dump with columns `word, n, x, y, height_nats`.
pub fn records_csv(records: &[OrbitRecord]) -> String {
    let mut out = String::from("word,n,x,y,height_nats\n");
    for r in records {
        let h = r.point.height_interval(64).mid_f64();
        let _ = writeln!(
            out,
            "{},{},{},{},{:.15e}",
            word_label(&r.word),
            r.n,
            r.point.x(),
            r.point.y(),
            h
        );
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepetitionWitness {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub point: ProjPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationWitness {
    /// 1-based map index.
    pub map: usize,
    pub word: Vec<usize>,
    pub point: ProjPoint,
}

/// Depth-bounded checks of the two orbit hypotheses: a pass is evidence up
/// to `depth_checked`, not a proof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub repeated_point_free: bool,
    pub repetition_witness: Option<RepetitionWitness>,
    pub totally_ramified_free: bool,
    pub ramification_witness: Option<RamificationWitness>,
    pub depth_checked: usize,
}

impl HypothesisReport {
    /// Either hypothesis holds to the checked depth.
    pub fn holds(&self) -> bool {
        self.repeated_point_free || self.totally_ramified_free
    }

    pub fn summary(&self) -> String {
        let verdict = |ok: bool| {
            if ok {
                format!("verified to depth {}", self.depth_checked)
            } else {
                "fails".to_string()
            }
        };
        format!(
            "no repeated points: {}; no totally ramified points: {}",
            verdict(self.repeated_point_free),
            verdict(self.totally_ramified_free)
        )
    }
}

/// Scan the full word tree of `a` for repeated points and for points at which
/// some map of the system is totally ramified.
pub fn hypothesis_check(system: &MapSystem, a: &ProjPoint, depth: usize, limits: &WorkLimits) -> Result<HypothesisReport> {
    let mut first_seen: HashMap<ProjPoint, Vec<usize>> = HashMap::new();
    let mut checked: HashSet<ProjPoint> = HashSet::new();
    let mut repetition = None;
    let mut ramification = None;
    for_each_node(system, a, depth, limits, |w, p| {
        if let Some(first) = first_seen.get(p) {
            if repetition.is_none() {
                repetition = Some(RepetitionWitness {
                    first: first.clone(),
                    second: w.to_vec(),
                    point: p.clone(),
                });
            }
        } else {
            first_seen.insert(p.clone(), w.to_vec());
        }
        if ramification.is_none() && checked.insert(p.clone()) {
            if let Some(j) = system.maps().iter().position(|m| m.is_totally_ramified(p)) {
                ramification = Some(RamificationWitness {
                    map: j + 1,
                    word: w.to_vec(),
                    point: p.clone(),
                });
            }
        }
        Ok(())
    })?;
    Ok(HypothesisReport {
        repeated_point_free: repetition.is_none(),
        repetition_witness: repetition,
        totally_ramified_free: ramification.is_none(),
        ramification_witness: ramification,
        depth_checked: depth,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PreperiodicVerdict {
    /// `Φ^tail(P)` starts a cycle of the given length; `cycle` lists its points.
    Preperiodic {
        tail: usize,
        period: usize,
        cycle: Vec<ProjPoint>,
    },
    WanderingCertified { estimate: HeightEstimate },
    Unknown { estimate: HeightEstimate },
}

impl PreperiodicVerdict {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self, PreperiodicVerdict::Preperiodic { .. })
    }
}

/// Exact cycle detection along a periodic word, falling back to a certified
/// positive canonical height.
pub fn preperiodicity_check(system: &MapSystem, word: &Word, p: &ProjPoint, depth: usize, opts: &HeightOptions) -> Result<PreperiodicVerdict> {
    if !word.is_periodic() {
        return Err(Error::InvalidParameter(format!("word {word} is not periodic")));
    }
    if let Some((tail, cycle)) = find_cycle(system, word, p, depth, &opts.limits)? {
        return Ok(PreperiodicVerdict::Preperiodic {
            tail,
            period: cycle.len(),
            cycle,
        });
    }
    let estimate = canonical_height_word(system, word, p, &HeightOptions { depth, ..opts.clone() })?;
    if estimate.value.lo().signum() > 0 {
        Ok(PreperiodicVerdict::WanderingCertified { estimate })
    } else {
        Ok(PreperiodicVerdict::Unknown { estimate })
    }
}

/// Repeated state `(Φ^n(P), n mod period)` within `depth` steps: returns the
/// tail length and the cycle points. Stops quietly at the bit cap.
pub(crate) fn find_cycle(system: &MapSystem, word: &Word, p: &ProjPoint, depth: usize, limits: &WorkLimits) -> Result<Option<(usize, Vec<ProjPoint>)>> {
    word.validate(system.k())?;
    let period = word.letters().len();
    let mut seen: HashMap<(ProjPoint, usize), usize> = HashMap::new();
    let mut orbit = vec![p.clone()];
    let mut x = p.clone();
    for n in 0..=depth {
        if let Some(&m) = seen.get(&(x.clone(), n % period)) {
            return Ok(Some((m, orbit[m..n].to_vec())));
        }
        seen.insert((x.clone(), n % period), n);
        if n == depth || x.bits() > limits.max_bits {
            break;
        }
        x = system.map(word.letter(n).expect("periodic"))?.eval(&x);
        orbit.push(x.clone());
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(s: &str) -> MapSystem {
        s.parse().unwrap()
    }

    fn pt(s: &str) -> ProjPoint {
        s.parse().unwrap()
    }

    fn points(rs: &[OrbitRecord]) -> Vec<String> {
        rs.iter().map(|r| r.point.to_string()).collect()
    }

    #[test]
    fn iterate_examples() {
        let f = sys("z^2+1; z^2-1");
        let orbit = iterate_word(&f, &Word::finite(vec![1, 2]), &pt("0"), 2).unwrap();
        assert_eq!(points(&orbit), ["0", "1", "0"]);
        assert_eq!(iterate_word(&f, &Word::finite(vec![]), &pt("5"), 0).unwrap().len(), 1);
        let sq = sys("z^2");
        let orbit = iterate_word(&sq, &Word::finite(vec![1, 1, 1]), &pt("2"), 3).unwrap();
        assert_eq!(points(&orbit), ["2", "4", "16", "256"]);
        assert_eq!(orbit[3].word, vec![1, 1, 1]);
    }

    #[test]
    fn tree_examples() {
        let f = sys("z^2; z^3");
        let dd = TreeOptions {
            dedupe: true,
            ..TreeOptions::default()
        };
        let t = enumerate_tree(&f, &pt("2"), 2, &dd).unwrap();
        assert_eq!(points(&t), ["2", "4", "16", "64", "8", "512"]);
        let at64 = t.iter().find(|r| r.point == pt("64")).unwrap();
        assert_eq!(at64.word, vec![1, 2]);
        assert_eq!(enumerate_tree(&f, &pt("2"), 0, &dd).unwrap().len(), 1);
        assert_eq!(points(&enumerate_tree(&f, &pt("1"), 3, &dd).unwrap()), ["1"]);
        let full = enumerate_tree(&f, &pt("2"), 3, &TreeOptions::default()).unwrap();
        assert_eq!(full.len(), 15);
    }

    #[test]
    fn parallel_matches_sequential() {
        let f = sys("z^2+1; (z^2-1)/(z+2); z^3");
        let base = enumerate_tree(&f, &pt("1/2"), 4, &TreeOptions::default()).unwrap();
        for workers in [2, 3, 8, 40] {
            let opts = TreeOptions {
                workers,
                ..TreeOptions::default()
            };
            assert_eq!(enumerate_tree(&f, &pt("1/2"), 4, &opts).unwrap(), base);
        }
    }

    #[test]
    fn limits_fail_loudly() {
        let f = sys("z^2; z^3");
        let tight = TreeOptions {
            limits: WorkLimits {
                max_nodes: 10,
                max_bits: 1_000,
            },
            ..TreeOptions::default()
        };
        assert!(matches!(enumerate_tree(&f, &pt("2"), 3, &tight), Err(Error::WorkLimit(_))));
        let bits = TreeOptions {
            limits: WorkLimits {
                max_nodes: 1_000,
                max_bits: 20,
            },
            ..TreeOptions::default()
        };
        assert!(matches!(enumerate_tree(&f, &pt("2"), 4, &bits), Err(Error::WorkLimit(_))));
    }

    #[test]
    fn hypothesis_examples() {
        let inf = ProjPoint::infinity();
        let lim = WorkLimits::default();
        let r = hypothesis_check(&sys("z^2"), &inf, 3, &lim).unwrap();
        assert!(!r.repeated_point_free && !r.totally_ramified_free);
        let r = hypothesis_check(&sys("(z^2+1)/z"), &inf, 3, &lim).unwrap();
        assert!(!r.repeated_point_free && r.totally_ramified_free);
        assert!(r.summary().contains("verified to depth 3"));
        let r = hypothesis_check(&sys("1/z^2"), &inf, 3, &lim).unwrap();
        assert!(!r.repeated_point_free && !r.totally_ramified_free);
        let w = r.repetition_witness.unwrap();
        let f = sys("1/z^2");
        assert_eq!(f.eval_word(&w.first, &inf).unwrap(), f.eval_word(&w.second, &inf).unwrap());
        let rw = r.ramification_witness.unwrap();
        assert!(f.map(rw.map).unwrap().is_totally_ramified(&rw.point));
    }

    #[test]
    fn preperiodicity_examples() {
        let opts = HeightOptions::default();
        let v = preperiodicity_check(&sys("z^2-1"), &Word::constant(1), &pt("0"), 10, &opts).unwrap();
        match v {
            PreperiodicVerdict::Preperiodic { tail, period, cycle } => {
                assert_eq!((tail, period), (0, 2));
                assert_eq!(cycle, vec![pt("0"), pt("-1")]);
            }
            other => panic!("{other:?}"),
        }
        let v = preperiodicity_check(&sys("z^2"), &Word::constant(1), &pt("2"), 6, &opts).unwrap();
        assert!(matches!(v, PreperiodicVerdict::WanderingCertified { .. }));
        let v = preperiodicity_check(&sys("z^2"), &Word::constant(1), &pt("1"), 6, &opts).unwrap();
        assert!(v.is_preperiodic());
    }

    #[test]
    fn csv_dump() {
        let f = sys("z^2");
        let rs = iterate_word(&f, &Word::constant(1), &pt("2"), 1).unwrap();
        let csv = records_csv(&rs);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "word,n,x,y,height_nats");
        assert!(lines[1].starts_with(",0,2,1,6.93147180559945"));
        assert!(lines[2].starts_with("1,1,4,1,1.38629436"));
    }
}
