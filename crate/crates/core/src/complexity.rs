//! Arc-complexity, f-width and the related bounds.
//!
//! # Exhaustive search
//!
//! The arc-complexity of a matroid is the least number of arcs in any
//! standard representation of it. The search deepens over the arc count `a`
//! starting from [`lower_bound`] and, at each level, tries every standard
//! representation with exactly `a` arcs whose target set is a base of the
//! matroid. Nothing else needs to be tried, for these reasons:
//!
//! * In a standard representation the targets always form a base.
//! * In a representation with a minimum number of arcs, every non-ground
//!   ("internal") vertex that touches an arc has in-degree and out-degree at
//!   least one. Otherwise no routing can use its arcs, and deleting them keeps
//!   the matroid and the standard form. Isolated internal vertices can be dropped.
//! * Every internal vertex then receives an arc, and when `a > 0` some arc
//!   enters a target. Otherwise no element is routable and all arcs could
//!   go. Hence `a >= k + 1` for `k` internal vertices.
//! * A non-target element that is not a loop of the matroid has out-degree
//!   at least one, and in a minimum representation loops have out-degree zero.
//! * Internal vertices are interchangeable, so only labellings in which their
//!   adjacency signatures are non-decreasing are generated.
//!
//! A level is *complete* when all internal-vertex counts up to `a - 1` were
//! tried. If the `max_internal` limit cuts a level short, any witness found
//! later is reported without the exhaustive flag.

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{elements, full, k_subsets, submasks};
use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};
use crate::gammoid::{Representation, StandardRepresentation};
use crate::matroid::{Matroid, DEFAULT_ENUMERATION_LIMIT};
use crate::routing::RoutingNetwork;

/// Exact non-negative rational.
pub type Rational = Ratio<u64>;

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("`{s}` is not a rational p/q"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    if q == 0 {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

mod rational_string {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Explicit limits for the exhaustive search. A search that hits any of them
/// never claims exhaustiveness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_arcs: usize,
    pub max_internal: usize,
    pub max_candidates: u64,
    pub wall_secs: Option<u64>,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    pub enumeration_limit: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_arcs: 16,
            max_internal: 15,
            max_candidates: 2_000_000_000,
            wall_secs: None,
            workers: 0,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

/// Integer functions `N -> N \ {0}` used as denominators of the f-width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuperAdditiveFn {
    /// `x -> max(1, x)`.
    Fhat,
    /// `x -> c * max(1, x)`.
    Linear(u64),
    /// Explicit values `f(0), f(1), ...`; undefined past the end.
    Table(Vec<u64>),
}

impl SuperAdditiveFn {
    pub fn eval(&self, x: usize) -> Result<u64> {
        match self {
            SuperAdditiveFn::Fhat => Ok((x as u64).max(1)),
            SuperAdditiveFn::Linear(c) => Ok(c * (x as u64).max(1)),
            SuperAdditiveFn::Table(v) => v
                .get(x)
                .copied()
                .ok_or_else(|| Error::InvalidFunction(format!("table has no value at {x}"))),
        }
    }
}

impl FromStr for SuperAdditiveFn {
    type Err = Error;

    /// `fhat`, `linear:c`, or `table:v0,v1,...`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidFunction(format!("`{s}`: {why}"));
        match s.split_once(':') {
            None if s == "fhat" => Ok(Self::Fhat),
            Some(("linear", c)) => {
                let c: u64 = c.trim().parse().map_err(|_| bad("expected an integer factor"))?;
                if c == 0 {
                    return Err(bad("factor must be positive"));
                }
                Ok(Self::Linear(c))
            }
            Some(("table", vals)) => vals
                .split(',')
                .map(|v| v.trim().parse::<u64>().map_err(|_| bad("expected integers")))
                .collect::<Result<Vec<_>>>()
                .map(Self::Table),
            _ => Err(bad("expected fhat, linear:c or table:v0,v1,...")),
        }
    }
}

impl std::fmt::Display for SuperAdditiveFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SuperAdditiveFn::Fhat => write!(f, "fhat"),
            SuperAdditiveFn::Linear(c) => write!(f, "linear:{c}"),
            SuperAdditiveFn::Table(v) => {
                let vals: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "table:{}", vals.join(","))
            }
        }
    }
}

/// Checks `f(x) >= 1` on `0..=upto` and `f(n + m) >= f(n) + f(m)` for all
/// positive `n, m` with `n + m <= upto`.
pub fn is_superadditive(f: &SuperAdditiveFn, upto: usize) -> bool {
    let Ok(vals) = (0..=upto).map(|x| f.eval(x)).collect::<Result<Vec<u64>>>() else {
        return false;
    };
    if vals.contains(&0) {
        return false;
    }
    (1..=upto).all(|s| (1..s).all(|n| vals[s] >= vals[n] + vals[s - n]))
}

/// Number of non-loop elements outside `base`; each needs an outgoing arc.
pub fn lower_bound(m: &Matroid, base: u32) -> Result<usize> {
    if !m.is_base(base) {
        return Err(Error::NotABase(format!("{:?}", m.labels_of(base))));
    }
    Ok((m.full_mask() & !base & !m.loops()).count_ones() as usize)
}

/// Upper bound on the arc-complexity from the digraph-size bound for gammoid
/// representations, saturating at `u64::MAX`.
pub fn kw_upper_bound(rank: usize, size: usize) -> u64 {
    let (r, n) = (rank as u128, size as u128);
    let v = r.pow(4) * n * n + 2 * r.pow(3) * n + 2 * r * r * n * n + r * r + 2 * r * n + n * n;
    u64::try_from(v).unwrap_or(u64::MAX)
}

/// The standard representation of U_{r,n}: targets `1..=r`, every other
/// element joined to every target.
pub fn uniform_rep(r: usize, n: usize) -> Result<StandardRepresentation> {
    if r > n {
        return Err(Error::RankTooLarge(r, n));
    }
    let labels = (1..=n).map(|i| i.to_string());
    let arcs = (r..n).flat_map(|x| (0..r).map(move |t| (x, t)));
    let d = Digraph::from_arcs(labels, arcs)?;
    StandardRepresentation::new(Representation::new(d, (0..r).collect(), (0..n).collect())?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchStats {
    pub candidates: u64,
    pub elapsed_ms: u128,
    pub levels: Vec<LevelStats>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelStats {
    pub arcs: usize,
    pub complete: bool,
    pub found: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexityCertificate {
    pub value: usize,
    /// Smallest arc count not ruled out; equals `value` when exhaustive.
    pub lower_bound: usize,
    pub exhaustive: bool,
    pub witness: StandardRepresentation,
    pub stats: SearchStats,
}

struct Budget {
    max_candidates: u64,
    deadline: Option<Instant>,
    candidates: AtomicU64,
    stop: AtomicBool,
    reason: Mutex<Option<String>>,
}

impl Budget {
    fn tick(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let c = self.candidates.fetch_add(1, Ordering::Relaxed) + 1;
        if c > self.max_candidates {
            self.halt(format!("candidate limit {} reached", self.max_candidates));
            return false;
        }
        if c.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.halt("wall-clock limit reached".into());
                    return false;
                }
            }
        }
        true
    }

    fn halt(&self, reason: String) {
        self.stop.store(true, Ordering::Relaxed);
        self.reason.lock().unwrap().get_or_insert(reason);
    }
}

/// The matroid being matched, in the shape candidate checks need.
struct Goal<'a> {
    m: &'a Matroid,
    n: usize,
    rank: usize,
    loops: u32,
    /// every rank-sized subset with whether it is a basis, non-bases first
    probes: Vec<(Vec<Vertex>, bool)>,
}

impl<'a> Goal<'a> {
    fn new(m: &'a Matroid) -> Self {
        let n = m.len();
        let rank = m.rank();
        let mut probes: Vec<(Vec<Vertex>, bool)> = k_subsets(n, rank)
            .map(|s| (elements(s).collect(), m.is_base(s)))
            .collect();
        probes.sort_by_key(|(_, b)| *b);
        Self { m, n, rank, loops: m.loops(), probes }
    }
}

/// One unit of parallel work inside a level: a target base, an internal
/// vertex count, and the out-degree of every non-target element.
#[derive(Clone, Debug)]
struct Task {
    base: u32,
    internal: usize,
    sources: Vec<Vertex>,
    degrees: Vec<usize>,
    internal_arcs: usize,
}

/// Candidate digraph over ground vertices `0..n` and internal `n..n+k`.
struct Candidate<'s> {
    goal: &'s Goal<'s>,
    task: &'s Task,
    heads: Vec<Vertex>,
    internal_pairs: Vec<(Vertex, Vertex)>,
    succ: Vec<Vec<Vertex>>,
}

impl Candidate<'_> {
    fn vertex_count(&self) -> usize {
        self.goal.n + self.task.internal
    }

    /// (source in-neighbour mask, target out-neighbour mask, in-degree, out-degree)
    fn signature(&self, i: Vertex) -> (u32, u32, usize, usize) {
        let n = self.goal.n;
        let mut src = 0u32;
        let mut tgt = 0u32;
        let mut indeg = 0;
        for (u, out) in self.succ.iter().enumerate() {
            if out.contains(&i) {
                indeg += 1;
                if u < n {
                    src |= 1 << u;
                }
            }
        }
        for &w in &self.succ[i] {
            if w < n {
                tgt |= 1 << w;
            }
        }
        (src, tgt, indeg, self.succ[i].len())
    }

    fn source_mask(&self, i: Vertex) -> u32 {
        self.task.sources.iter().filter(|&&s| self.succ[s].contains(&i)).fold(0, |acc, &s| acc | 1 << s)
    }

    fn represents(&self) -> bool {
        let succ = &self.succ;
        let targets: Vec<Vertex> = elements(self.task.base).collect();
        let mut net = RoutingNetwork::from_successors(
            self.vertex_count(),
            |v| {
                let mut s = succ[v].clone();
                s.sort_unstable();
                s
            },
            &targets,
        );
        self.goal.probes.iter().all(|(x, is_base)| net.is_linkable(x) == *is_base)
    }

    fn witness(&self) -> StandardRepresentation {
        let n = self.goal.n;
        let mut labels: Vec<String> = self.goal.m.ground().to_vec();
        for i in 0..self.task.internal {
            let mut l = format!("v{i}");
            while labels.contains(&l) {
                l.push('\'');
            }
            labels.push(l);
        }
        let arcs = self.succ.iter().enumerate().flat_map(|(u, out)| out.iter().map(move |&v| (u, v)));
        let d = Digraph::from_arcs(labels, arcs).expect("candidate vertices in range");
        let rep = Representation::new(d, elements(self.task.base).collect(), (0..n).collect())
            .expect("candidate vertices in range");
        StandardRepresentation::new(rep).expect("candidates are standard by construction")
    }
}

fn run_task(goal: &Goal, task: &Task, budget: &Budget) -> Option<StandardRepresentation> {
    let n = goal.n;
    let k = task.internal;
    let heads: Vec<Vertex> = elements(task.base).chain(n..n + k).collect();
    let internal_pairs: Vec<(Vertex, Vertex)> = (n..n + k)
        .flat_map(|u| elements(task.base).chain(n..n + k).filter(move |&w| w != u).map(move |w| (u, w)))
        .collect();
    let mut cand = Candidate {
        goal,
        task,
        heads,
        internal_pairs,
        succ: vec![Vec::new(); n + k],
    };
    let mut found = None;
    choose_source_arcs(&mut cand, 0, budget, &mut found);
    found
}

fn choose_source_arcs(
    cand: &mut Candidate,
    idx: usize,
    budget: &Budget,
    found: &mut Option<StandardRepresentation>,
) -> bool {
    if budget.stop.load(Ordering::Relaxed) {
        return true;
    }
    let task = cand.task;
    if idx == task.sources.len() {
        let n = cand.goal.n;
        // the primary signature key must already be sorted
        let masks: Vec<u32> = (n..n + task.internal).map(|i| cand.source_mask(i)).collect();
        if masks.windows(2).any(|w| w[0] > w[1]) {
            return false;
        }
        return choose_internal_arcs(cand, budget, found);
    }
    let s = task.sources[idx];
    let d = task.degrees[idx];
    let options = cand.heads.len();
    for combo in (0..options).combinations(d) {
        cand.succ[s] = combo.iter().map(|&i| cand.heads[i]).collect();
        if choose_source_arcs(cand, idx + 1, budget, found) {
            return true;
        }
    }
    cand.succ[s].clear();
    false
}

fn choose_internal_arcs(cand: &mut Candidate, budget: &Budget, found: &mut Option<StandardRepresentation>) -> bool {
    let task = cand.task;
    let n = cand.goal.n;
    let k = task.internal;
    let pairs = cand.internal_pairs.len();
    for combo in (0..pairs).combinations(task.internal_arcs) {
        for i in n..n + k {
            cand.succ[i].clear();
        }
        for &p in &combo {
            let (u, w) = cand.internal_pairs[p];
            cand.succ[u].push(w);
        }
        if (n..n + k).any(|i| cand.succ[i].is_empty()) {
            continue;
        }
        if (n..n + k).any(|i| !cand.succ.iter().any(|out| out.contains(&i))) {
            continue;
        }
        let sigs: Vec<_> = (n..n + k).map(|i| cand.signature(i)).collect();
        if sigs.windows(2).any(|w| w[0] > w[1]) {
            continue;
        }
        if !budget.tick() {
            return true;
        }
        if cand.represents() {
            *found = Some(cand.witness());
            return true;
        }
    }
    for i in n..n + k {
        cand.succ[i].clear();
    }
    false
}

/// Out-degree vectors for the given sources with total `total`.
fn degree_vectors(bounds: &[(usize, usize)], total: usize) -> Vec<Vec<usize>> {
    fn rec(bounds: &[(usize, usize)], left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(&(lo, hi)) = bounds.first() else {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        };
        let rest_lo: usize = bounds[1..].iter().map(|b| b.0).sum();
        let rest_hi: usize = bounds[1..].iter().map(|b| b.1).sum();
        for d in lo..=hi.min(left) {
            if left - d < rest_lo || left - d > rest_hi {
                continue;
            }
            cur.push(d);
            rec(&bounds[1..], left - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(bounds, total, &mut Vec::new(), &mut out);
    out
}

fn level_tasks(goal: &Goal, arcs: usize, max_internal: usize) -> (Vec<Task>, bool) {
    let needed = arcs.saturating_sub(1);
    let kmax = needed.min(max_internal);
    let complete = kmax == needed;
    let mut tasks = Vec::new();
    for &base in goal.m.bases() {
        let sources: Vec<Vertex> = elements(full(goal.n) & !base).collect();
        for k in 0..=kmax {
            let pair_count = if k == 0 { 0 } else { k * (k - 1 + goal.rank) };
            let bounds: Vec<(usize, usize)> = sources
                .iter()
                .map(|&s| if goal.loops >> s & 1 == 1 { (0, 0) } else { (1, goal.rank + k) })
                .collect();
            // each internal vertex emits at least one arc
            for internal_arcs in k..=pair_count.min(arcs) {
                if k == 0 && internal_arcs > 0 {
                    break;
                }
                for degrees in degree_vectors(&bounds, arcs - internal_arcs) {
                    tasks.push(Task {
                        base,
                        internal: k,
                        sources: sources.clone(),
                        degrees,
                        internal_arcs,
                    });
                }
            }
        }
    }
    (tasks, complete)
}

enum Level {
    Found(StandardRepresentation),
    Exhausted { complete: bool },
    Aborted(String),
}

fn search_level(goal: &Goal, arcs: usize, limits: &SearchLimits, budget: &Budget) -> Level {
    let (tasks, complete) = level_tasks(goal, arcs, limits.max_internal);
    let found = tasks.par_iter().find_map_first(|t| run_task(goal, t, budget));
    match found {
        Some(w) => Level::Found(w),
        None if budget.stop.load(Ordering::Relaxed) => {
            Level::Aborted(budget.reason.lock().unwrap().clone().unwrap_or_default())
        }
        None => Level::Exhausted { complete },
    }
}

/// Minimum arc count over all standard representations of `m`, by
/// iterative deepening (see the module docs for why the search is complete).
pub fn arc_complexity(m: &Matroid, limits: &SearchLimits) -> Result<ComplexityCertificate> {
    if m.len() > limits.enumeration_limit.min(32) {
        return Err(Error::EnumerationLimit { size: m.len(), limit: limits.enumeration_limit });
    }
    let run = || search(m, limits);
    if limits.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(limits.workers)
            .build()
            .map_err(|e| Error::Parse(format!("thread pool: {e}")))?
            .install(run)
    } else {
        run()
    }
}

fn search(m: &Matroid, limits: &SearchLimits) -> Result<ComplexityCertificate> {
    let start = Instant::now();
    let goal = Goal::new(m);
    let budget = Budget {
        max_candidates: limits.max_candidates,
        deadline: limits.wall_secs.map(|s| start + Duration::from_secs(s)),
        candidates: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        reason: Mutex::new(None),
    };
    let first = m.bases().iter().map(|&b| lower_bound(m, b)).collect::<Result<Vec<_>>>()?.into_iter().min().unwrap_or(0);
    let mut proven = first;
    let mut all_complete = true;
    let mut levels = Vec::new();
    for arcs in first..=limits.max_arcs {
        match search_level(&goal, arcs, limits, &budget) {
            Level::Found(witness) => {
                levels.push(LevelStats { arcs, complete: true, found: true });
                debug_assert_eq!(witness.arc_count(), arcs);
                return Ok(ComplexityCertificate {
                    value: arcs,
                    lower_bound: if all_complete { arcs } else { proven },
                    exhaustive: all_complete,
                    witness,
                    stats: SearchStats {
                        candidates: budget.candidates.load(Ordering::Relaxed),
                        elapsed_ms: start.elapsed().as_millis(),
                        levels,
                    },
                });
            }
            Level::Exhausted { complete } => {
                levels.push(LevelStats { arcs, complete, found: false });
                all_complete &= complete;
                if all_complete {
                    proven = arcs + 1;
                }
            }
            Level::Aborted(reason) => {
                return Err(Error::BudgetExhausted { reason, lower_bound: proven });
            }
        }
    }
    Err(Error::BudgetExhausted {
        reason: format!("no representation with at most {} arcs", limits.max_arcs),
        lower_bound: proven,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjectureVerdict {
    pub rank: usize,
    pub size: usize,
    pub expected: usize,
    pub certificate: ComplexityCertificate,
    pub holds: bool,
}

/// Runs the exhaustive search on U_{r,n} and compares with `r (n - r)`.
/// Fails with `BudgetExhausted` if the certificate is not exhaustive.
pub fn uniform_conjecture(r: usize, n: usize, limits: &SearchLimits) -> Result<ConjectureVerdict> {
    let m = Matroid::uniform(r, n)?;
    let certificate = arc_complexity(&m, limits)?;
    if !certificate.exhaustive {
        return Err(Error::BudgetExhausted {
            reason: "internal-vertex limit truncated the search".into(),
            lower_bound: certificate.lower_bound,
        });
    }
    let expected = r * (n - r);
    Ok(ConjectureVerdict { rank: r, size: n, expected, holds: certificate.value == expected, certificate })
}

pub fn verify_uniform_conjecture(r: usize, n: usize, limits: &SearchLimits) -> Result<bool> {
    uniform_conjecture(r, n, limits).map(|v| v.holds)
}

/// Arc-complexity values keyed by isomorphism class, shared across searches.
#[derive(Default)]
pub struct ComplexityCache {
    values: Mutex<HashMap<(usize, Vec<u32>), CachedValue>>,
}

#[derive(Clone, Copy, Debug)]
struct CachedValue {
    /// proven lower bound
    lower: usize,
    exhaustive: bool,
}

impl ComplexityCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `(lower bound, exhaustive)`; the bound is the exact value when exhaustive.
    pub fn arc_complexity(&self, m: &Matroid, limits: &SearchLimits) -> Result<(usize, bool)> {
        // isomorphism keys are only affordable on small grounds
        let key = (m.len() <= 8).then(|| m.canonical_key());
        if let Some(key) = &key {
            if let Some(v) = self.values.lock().unwrap().get(key) {
                return Ok((v.lower, v.exhaustive));
            }
        }
        let v = match arc_complexity(m, limits) {
            Ok(c) => CachedValue { lower: c.lower_bound, exhaustive: c.exhaustive },
            Err(Error::BudgetExhausted { lower_bound, .. }) => CachedValue { lower: lower_bound, exhaustive: false },
            Err(e) => return Err(e),
        };
        if let Some(key) = key {
            self.values.lock().unwrap().insert(key, v);
        }
        Ok((v.lower, v.exhaustive))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinorEntry {
    /// restricted-to set
    pub x: Vec<String>,
    /// contracted-to set
    pub y: Vec<String>,
    pub arc_complexity: usize,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WidthReport {
    #[serde(with = "rational_string")]
    pub value: Rational,
    pub function: String,
    /// `(X, Y)` attaining the maximum; the first in enumeration order.
    pub argmax: (Vec<String>, Vec<String>),
    /// When false, `value` is only a lower bound on the width.
    pub exhaustive: bool,
    pub minors: Vec<MinorEntry>,
}

/// The f-width: the largest `arcC((M contracted to Y) restricted to X) / f(|X|)`
/// over all `X ⊆ Y ⊆ E`.
pub fn f_width(m: &Matroid, f: &SuperAdditiveFn, limits: &SearchLimits) -> Result<WidthReport> {
    f_width_cached(m, f, limits, &ComplexityCache::new())
}

pub fn f_width_cached(
    m: &Matroid,
    f: &SuperAdditiveFn,
    limits: &SearchLimits,
    cache: &ComplexityCache,
) -> Result<WidthReport> {
    if m.len() > limits.enumeration_limit.min(32) {
        return Err(Error::EnumerationLimit { size: m.len(), limit: limits.enumeration_limit });
    }
    if !is_superadditive(f, 2 * m.len()) {
        return Err(Error::InvalidFunction(format!("{f} is not super-additive on 0..={}", 2 * m.len())));
    }
    let mut best = Rational::from_integer(0);
    let mut argmax = (Vec::new(), Vec::new());
    let mut exhaustive = true;
    let mut minors = Vec::new();
    for y in submasks(m.full_mask()) {
        let contracted = m.contract_to_mask(y)?;
        for x in submasks(y) {
            let minor = contracted.restrict_mask(crate::bits::compress(x, y))?;
            let (value, exact) = cache.arc_complexity(&minor, limits)?;
            exhaustive &= exact;
            let q = Rational::new(value as u64, f.eval(x.count_ones() as usize)?);
            if minors.is_empty() || q > best {
                best = q;
                argmax = (m.labels_of(x), m.labels_of(y));
            }
            minors.push(MinorEntry {
                x: m.labels_of(x),
                y: m.labels_of(y),
                arc_complexity: value,
                exhaustive: exact,
            });
        }
    }
    Ok(WidthReport { value: best, function: f.to_string(), argmax, exhaustive, minors })
}

/// Whether the f-width is at most `q`. An inexact width only decides the
/// question when its lower bound already exceeds `q`.
pub fn in_class(m: &Matroid, f: &SuperAdditiveFn, q: Rational, limits: &SearchLimits) -> Result<bool> {
    let report = f_width(m, f, limits)?;
    if report.value > q {
        return Ok(false);
    }
    if !report.exhaustive {
        return Err(Error::BudgetExhausted {
            reason: "width is only a lower bound".into(),
            lower_bound: 0,
        });
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::gamma;

    fn limits() -> SearchLimits {
        SearchLimits::default()
    }

    #[test]
    fn trivial_complexities() {
        for n in 0..4 {
            let free = Matroid::uniform(n, n).unwrap();
            let c = arc_complexity(&free, &limits()).unwrap();
            assert_eq!((c.value, c.exhaustive), (0, true));
            let loops = Matroid::uniform(0, n).unwrap();
            assert_eq!(arc_complexity(&loops, &limits()).unwrap().value, 0);
        }
    }

    #[test]
    fn u12_needs_one_arc() {
        let m = Matroid::uniform(1, 2).unwrap();
        let c = arc_complexity(&m, &limits()).unwrap();
        assert_eq!(c.value, 1);
        assert!(c.exhaustive);
        assert_eq!(gamma(&c.witness).unwrap(), m);
        assert_eq!(c.stats.levels.len(), 1);
    }

    #[test]
    fn lower_bound_cases() {
        let free = Matroid::uniform(3, 3).unwrap();
        assert_eq!(lower_bound(&free, free.full_mask()).unwrap(), 0);
        let u12 = Matroid::uniform(1, 2).unwrap();
        assert_eq!(lower_bound(&u12, 0b01).unwrap(), 1);
        let u24 = Matroid::uniform(2, 4).unwrap();
        for &b in u24.bases() {
            assert_eq!(lower_bound(&u24, b).unwrap(), 2);
        }
        assert!(lower_bound(&u24, 0b111).is_err());
    }

    #[test]
    fn kw_bound_values() {
        assert_eq!(kw_upper_bound(0, 0), 0);
        assert_eq!(kw_upper_bound(0, 5), 25);
        assert_eq!(kw_upper_bound(1, 2), 25);
    }

    #[test]
    fn uniform_rep_cases() {
        let r = uniform_rep(0, 3).unwrap();
        assert_eq!(r.arc_count(), 0);
        assert!(r.targets().is_empty());
        let r = uniform_rep(2, 2).unwrap();
        assert_eq!(r.arc_count(), 0);
        let r = uniform_rep(2, 4).unwrap();
        assert_eq!(r.arc_count(), 4);
        assert_eq!(gamma(&r).unwrap(), Matroid::uniform(2, 4).unwrap());
        assert!(uniform_rep(3, 2).is_err());
    }

    #[test]
    fn superadditivity() {
        assert!(is_superadditive(&SuperAdditiveFn::Fhat, 20));
        let one = SuperAdditiveFn::Table(vec![1; 21]);
        assert!(!is_superadditive(&one, 20));
        let mut two_x: Vec<u64> = (0..=20).map(|x| 2 * x).collect();
        two_x[0] = 1;
        assert!(is_superadditive(&SuperAdditiveFn::Table(two_x), 20));
        assert!(!is_superadditive(&SuperAdditiveFn::Table(vec![0, 1, 2]), 2));
        assert!(!is_superadditive(&SuperAdditiveFn::Table(vec![1, 1]), 5));
        assert!(is_superadditive(&SuperAdditiveFn::Linear(3), 10));
    }

    #[test]
    fn function_parsing() {
        assert_eq!("fhat".parse::<SuperAdditiveFn>().unwrap(), SuperAdditiveFn::Fhat);
        assert_eq!("linear:2".parse::<SuperAdditiveFn>().unwrap(), SuperAdditiveFn::Linear(2));
        assert_eq!(
            "table:1,2,4".parse::<SuperAdditiveFn>().unwrap(),
            SuperAdditiveFn::Table(vec![1, 2, 4])
        );
        assert!("linear:0".parse::<SuperAdditiveFn>().is_err());
        assert!("cubic".parse::<SuperAdditiveFn>().is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("2/4").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&Rational::new(1, 2)), "1/2");
    }

    #[test]
    fn width_cases() {
        let w = f_width(&Matroid::empty(), &SuperAdditiveFn::Fhat, &limits()).unwrap();
        assert_eq!(w.value, Rational::from_integer(0));
        let free = Matroid::uniform(3, 3).unwrap();
        assert_eq!(f_width(&free, &SuperAdditiveFn::Fhat, &limits()).unwrap().value, Rational::from_integer(0));
        let u12 = Matroid::uniform(1, 2).unwrap();
        let w = f_width(&u12, &SuperAdditiveFn::Fhat, &limits()).unwrap();
        assert_eq!(w.value, Rational::new(1, 2));
        assert_eq!(w.argmax, (u12.ground().to_vec(), u12.ground().to_vec()));
        let mut values: Vec<usize> = w.minors.iter().map(|e| e.arc_complexity).collect();
        values.sort();
        assert_eq!(values, vec![0, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert!(w.exhaustive);
    }

    #[test]
    fn class_membership() {
        let free = Matroid::uniform(2, 2).unwrap();
        assert!(in_class(&free, &SuperAdditiveFn::Linear(1), Rational::from_integer(1), &limits()).unwrap());
        let u12 = Matroid::uniform(1, 2).unwrap();
        assert!(!in_class(&u12, &SuperAdditiveFn::Fhat, Rational::new(1, 4), &limits()).unwrap());
        assert!(in_class(&u12, &SuperAdditiveFn::Fhat, Rational::new(1, 2), &limits()).unwrap());
    }

    #[test]
    fn width_rejects_non_superadditive() {
        let f = SuperAdditiveFn::Table(vec![1; 10]);
        assert!(matches!(
            f_width(&Matroid::uniform(1, 2).unwrap(), &f, &limits()),
            Err(Error::InvalidFunction(_))
        ));
    }

    #[test]
    fn budget_is_reported() {
        let m = Matroid::uniform(2, 4).unwrap();
        let tight = SearchLimits { max_arcs: 3, ..limits() };
        match arc_complexity(&m, &tight) {
            Err(Error::BudgetExhausted { lower_bound, .. }) => assert_eq!(lower_bound, 4),
            other => panic!("{other:?}"),
        }
        let starved = SearchLimits { max_candidates: 10, ..limits() };
        assert!(matches!(arc_complexity(&m, &starved), Err(Error::BudgetExhausted { .. })));
    }

    #[test]
    fn internal_cap_clears_exhaustive_flag() {
        // levels 2 and 3 would need internal vertices to be ruled out
        let m = Matroid::uniform(2, 4).unwrap();
        let capped = SearchLimits { max_internal: 0, ..limits() };
        let c = arc_complexity(&m, &capped).unwrap();
        assert_eq!(c.value, 4);
        assert!(!c.exhaustive);
        assert_eq!(c.lower_bound, 2);
    }

    #[test]
    fn search_is_deterministic_across_workers() {
        let m = Matroid::uniform(1, 3).unwrap();
        let one = arc_complexity(&m, &SearchLimits { workers: 1, ..limits() }).unwrap();
        let four = arc_complexity(&m, &SearchLimits { workers: 4, ..limits() }).unwrap();
        assert_eq!(one.witness, four.witness);
    }
}
