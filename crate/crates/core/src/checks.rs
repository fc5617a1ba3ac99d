//! Property suites over generated instances, shared by the `check` command.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{compress, submasks};
use crate::complexity::{
    arc_complexity, f_width_cached, kw_upper_bound, ComplexityCache, SearchLimits, SuperAdditiveFn,
};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::gammoid::{Representation, StandardRepresentation};
use crate::generate::{all_matroids, random_gammoid, random_representation};
use crate::matroid::{gamma, Matroid};
use crate::routing::independence_table;

pub const SUITES: &[&str] = &["swap", "standard", "surgery", "minors", "bounds", "closure"];

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: u64,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        Self { name: name.into(), cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        // keep reports readable when a property fails everywhere
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    /// Size parameter: vertex bound for digraph suites, ground-size bound for
    /// matroid suites.
    pub size: usize,
    pub samples: usize,
    pub seed: u64,
    pub limits: SearchLimits,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { size: 4, samples: 100, seed: 0, limits: SearchLimits::default() }
    }
}

pub fn run_suite(name: &str, cfg: &CheckConfig) -> Result<Vec<CheckReport>> {
    match name {
        "swap" => Ok(vec![swap_invariance(cfg.size.min(4))]),
        "standard" => Ok(vec![standard_forms(cfg)?]),
        "surgery" => Ok(vec![surgery(cfg)?]),
        "minors" => Ok(vec![minor_complexity(cfg.size.min(4), &cfg.limits)?]),
        "bounds" => Ok(vec![bounds(cfg.size.min(4), &cfg.limits)?]),
        "closure" => Ok(vec![closure(cfg)?]),
        "all" => SUITES.iter().map(|s| run_suite(s, cfg).map(|mut v| v.remove(0))).collect(),
        other => Err(Error::Parse(format!("unknown suite `{other}`; expected one of {SUITES:?} or all"))),
    }
}

/// Every digraph on at most `max_vertices` vertices, every target set and
/// every swap of an arc entering a sink target from a non-target: the
/// represented matroid is the same for every ground set.
pub fn swap_invariance(max_vertices: usize) -> CheckReport {
    let mut report = CheckReport::new("swap");
    for n in 1..=max_vertices {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let all: Vec<usize> = (0..n).collect();
        let partial: Vec<CheckReport> = (0u64..1 << (n * n))
            .into_par_iter()
            .map(|mask| {
                let mut r = CheckReport::new("swap");
                let arcs = (0..n * n).filter(|i| mask >> i & 1 == 1).map(|i| (i / n, i % n));
                let d = Digraph::from_arcs(labels.clone(), arcs).expect("in range");
                for t in submasks((1u32 << n) - 1) {
                    let targets: Vec<usize> = crate::bits::elements(t).collect();
                    let before = independence_table(&d, &targets, &all);
                    for (u, v) in d.arcs().filter(|&(u, v)| t >> v & 1 == 1 && t >> u & 1 == 0 && d.is_sink(v)) {
                        let rep = Representation::new(d.clone(), targets.clone(), all.clone()).expect("in range");
                        let swapped = rep.target_swap(u, v).expect("precondition holds");
                        let after = independence_table(swapped.digraph(), swapped.targets(), &all);
                        for e in submasks((1u32 << n) - 1) {
                            let same = submasks(e).all(|x| before[x as usize] == after[x as usize]);
                            r.expect(same, || format!("n={n} arcs={mask:#x} T={t:#b} E={e:#b} swap ({u},{v})"));
                        }
                    }
                }
                r
            })
            .collect();
        for p in partial {
            report.cases += p.cases;
            report.failures.extend(p.failures);
        }
    }
    report.failures.truncate(20);
    report
}

/// Random representations rebased and standardized onto each base; the result
/// is standard, represents the same matroid, and its dual representation
/// represents the dual matroid.
pub fn standard_forms(cfg: &CheckConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("standard");
    for (rep, std) in standardized_corpus(cfg)? {
        let m = gamma(&rep)?;
        let g = gamma(&std)?;
        report.expect(std.is_standard(), || format!("not standard: {}", json(&std)));
        report.expect(g == m, || format!("gamma changed: {}", json(&rep)));
        let dual = std.dual_representation();
        report.expect(gamma(&dual)? == m.dual(), || format!("dual mismatch: {}", json(&std)));
        report.expect(std.is_duality_respecting()?, || format!("not duality respecting: {}", json(&std)));
    }
    Ok(report)
}

/// `(original, standardized)` pairs for every base of every sampled representation.
pub fn standardized_corpus(cfg: &CheckConfig) -> Result<Vec<(Representation, StandardRepresentation)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for _ in 0..cfg.samples {
        let rep = random_representation(&mut rng, cfg.size.max(1));
        let m = gamma(&rep)?;
        for &b in m.bases() {
            let base: Vec<usize> = crate::bits::elements(b).map(|i| rep.ground()[i]).collect();
            out.push((rep.clone(), rep.standardize(&base)?));
        }
    }
    Ok(out)
}

/// Restriction and contraction surgery on standardized representations for
/// every subset of the ground set.
pub fn surgery(cfg: &CheckConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("surgery");
    for (_, std) in standardized_corpus(cfg)? {
        let m = gamma(&std)?;
        let ground = std.ground().to_vec();
        for x in submasks(m.full_mask()) {
            let xs: Vec<usize> = crate::bits::elements(x).map(|i| ground[i]).collect();
            let r = std.restrict_representation(&xs)?;
            report.expect(
                r.is_standard() && gamma(&r)? == m.restrict_mask(x)? && r.arc_count() <= std.arc_count(),
                || format!("restriction to {:?} of {}", m.labels_of(x), json(&std)),
            );
            let c = std.contract_representation(&xs)?;
            report.expect(
                c.is_standard() && gamma(&c)? == m.contract_to_mask(x)? && c.arc_count() <= std.arc_count(),
                || format!("contraction to {:?} of {}", m.labels_of(x), json(&std)),
            );
        }
    }
    Ok(report)
}

/// Duality equality and minor monotonicity of the arc-complexity over all
/// matroids on at most `max_ground` elements.
pub fn minor_complexity(max_ground: usize, limits: &SearchLimits) -> Result<CheckReport> {
    let mut report = CheckReport::new("minors");
    let cache = ComplexityCache::new();
    for n in 0..=max_ground {
        for m in all_matroids(n) {
            let (a, exact) = cache.arc_complexity(&m, limits)?;
            if !exact {
                continue;
            }
            let (ad, dual_exact) = cache.arc_complexity(&m.dual(), limits)?;
            if dual_exact {
                report.expect(a == ad, || format!("arcC(M)={a} but arcC(M*)={ad} for {}", json(&m)));
            }
            for x in submasks(m.full_mask()) {
                for minor in [m.restrict_mask(x)?, m.contract_to_mask(x)?] {
                    let (b, e) = cache.arc_complexity(&minor, limits)?;
                    if e {
                        report.expect(b <= a, || format!("minor {} exceeds {}", json(&minor), json(&m)));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Certificates obey the size bound and every witness touches at most twice
/// as many vertices as it has arcs.
pub fn bounds(max_ground: usize, limits: &SearchLimits) -> Result<CheckReport> {
    let mut report = CheckReport::new("bounds");
    let mut seen = std::collections::HashSet::new();
    for n in 0..=max_ground {
        for m in all_matroids(n) {
            if !seen.insert(m.canonical_key()) {
                continue;
            }
            let c = match arc_complexity(&m, limits) {
                Ok(c) if c.exhaustive => c,
                _ => continue,
            };
            let bound = kw_upper_bound(m.rank(), m.len());
            report.expect(c.value as u64 <= bound, || format!("arcC {} above bound {bound}", c.value));
            let w = &c.witness;
            report.expect(w.digraph().non_isolated_count() <= 2 * w.arc_count(), || {
                format!("witness touches too many vertices: {}", json(w))
            });
            report.expect(w.is_standard() && gamma(w)? == m, || format!("bad witness {}", json(w)));
        }
    }
    Ok(report)
}

/// f-width closure under minors, duality and direct sums on sampled pairs,
/// with `f` the identity floored at one.
pub fn closure(cfg: &CheckConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("closure");
    let f = SuperAdditiveFn::Fhat;
    let cache = ComplexityCache::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let width = |m: &Matroid| f_width_cached(m, &f, &cfg.limits, &cache);
    let total = cfg.size.max(2);
    for _ in 0..cfg.samples.min(40) {
        let left = random_gammoid(&mut rng, 4, total / 2);
        let right = random_gammoid(&mut rng, 4, total - left.len()).with_prefix("n");
        let wm = width(&left)?;
        let wn = width(&right)?;
        let sum = left.direct_sum(&right)?;
        let ws = width(&sum)?;
        let wd = width(&left.dual())?;
        if wm.exhaustive && wd.exhaustive {
            report.expect(wm.value == wd.value, || format!("dual width differs for {}", json(&left)));
        }
        if wm.exhaustive && wn.exhaustive && ws.exhaustive {
            report.expect(ws.value <= wm.value.max(wn.value), || {
                format!("sum width {} above max for {} and {}", ws.value, json(&left), json(&right))
            });
        }
        for y in submasks(left.full_mask()) {
            for x in submasks(y) {
                let minor = left.contract_to_mask(y)?.restrict_mask(compress(x, y))?;
                let wmin = width(&minor)?;
                if wmin.exhaustive && wm.exhaustive {
                    report.expect(wmin.value <= wm.value, || format!("minor width exceeds {}", json(&left)));
                }
            }
        }
    }
    Ok(report)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default()
}
