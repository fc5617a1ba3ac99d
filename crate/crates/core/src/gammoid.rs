//! Representations `(D, T, E)` of gammoids and the transformations between them.
//!
//! A representation is a digraph together with a target set `T` and a ground
//! set `E`, both vertex sets. The represented matroid lives on `E`: a subset is
//! independent when it can be linked into `T` by vertex-disjoint paths.
//!
//! A *standard* representation additionally has `T` inside `E`, every target
//! a sink, and every non-target ground element a source. Reversing all arcs
//! of a standard representation and complementing `T` in `E` represents the
//! dual matroid, so standard representations are where the minor surgery
//! below takes place.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Path, Vertex};
use crate::error::{Error, Result, StandardClause};
use crate::matroid::gamma;
use crate::routing::{max_routing, Routing, RoutingNetwork};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RepresentationJson", into = "RepresentationJson")]
pub struct Representation {
    digraph: Digraph,
    targets: Vec<Vertex>,
    ground: Vec<Vertex>,
}

impl Representation {
    /// `targets` is treated as a set; `ground` keeps its order, which becomes
    /// the ground order of the represented matroid.
    pub fn new(digraph: Digraph, mut targets: Vec<Vertex>, ground: Vec<Vertex>) -> Result<Self> {
        let n = digraph.vertex_count();
        if let Some(&v) = targets.iter().chain(&ground).find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange(v, n));
        }
        let mut seen = vec![false; n];
        for &e in &ground {
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::DuplicateLabel(digraph.label(e).to_string()));
            }
        }
        targets.sort_unstable();
        targets.dedup();
        Ok(Self { digraph, targets, ground })
    }

    pub fn from_labels<S: AsRef<str>>(digraph: Digraph, targets: &[S], ground: &[S]) -> Result<Self> {
        let lookup = |l: &S| {
            digraph
                .vertex(l.as_ref())
                .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_string()))
        };
        let t = targets.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        let e = ground.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        Self::new(digraph, t, e)
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    /// Targets in ascending vertex order.
    pub fn targets(&self) -> &[Vertex] {
        &self.targets
    }

    pub fn ground(&self) -> &[Vertex] {
        &self.ground
    }

    pub fn arc_count(&self) -> usize {
        self.digraph.arc_count()
    }

    pub fn is_target(&self, v: Vertex) -> bool {
        self.targets.binary_search(&v).is_ok()
    }

    pub fn in_ground(&self, v: Vertex) -> bool {
        self.ground.contains(&v)
    }

    /// Ground vertices with the given element labels.
    pub fn ground_vertices<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<Vertex>> {
        labels
            .iter()
            .map(|l| {
                self.digraph
                    .vertex(l.as_ref())
                    .filter(|v| self.in_ground(*v))
                    .ok_or(Error::NotSubset("ground set"))
            })
            .collect()
    }

    /// Rank of the represented matroid.
    pub fn rank(&self) -> usize {
        RoutingNetwork::new(&self.digraph, &self.targets).max_size(&self.ground)
    }

    fn ground_minus_targets(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.ground.iter().copied().filter(|&e| !self.is_target(e)).collect();
        out.sort_unstable();
        out
    }

    /// The first standard-representation condition this representation breaks.
    pub fn standard_violation(&self) -> Option<(StandardClause, Vertex)> {
        if let Some(&t) = self.targets.iter().find(|&&t| !self.in_ground(t)) {
            return Some((StandardClause::TargetsInGround, t));
        }
        if let Some(&t) = self.targets.iter().find(|&&t| !self.digraph.is_sink(t)) {
            return Some((StandardClause::TargetsAreSinks, t));
        }
        self.ground
            .iter()
            .find(|&&e| !self.is_target(e) && !self.digraph.is_source(e))
            .map(|&e| (StandardClause::NonTargetsAreSources, e))
    }

    pub fn is_standard(&self) -> bool {
        self.standard_violation().is_none()
    }

    /// Whether reversing all arcs and using `E \ T` as targets represents the dual.
    pub fn is_duality_respecting(&self) -> Result<bool> {
        let flipped = Representation::new(
            self.digraph.opposite(),
            self.ground_minus_targets(),
            self.ground.clone(),
        )?;
        Ok(gamma(&flipped)? == gamma(self)?.dual())
    }

    /// The swap of `(r, s)` where `s` is a target and a sink and `r` is not a
    /// target: the target moves from `s` to `r`, and the represented matroid
    /// is unchanged. Without the sink condition the matroid can change, since
    /// `s` keeps its own out-arcs.
    pub fn target_swap(&self, r: Vertex, s: Vertex) -> Result<Self> {
        if !self.is_target(s) || self.is_target(r) || !self.digraph.is_sink(s) {
            return Err(Error::InvalidRouting(format!(
                "swap of ({}, {}) needs a non-target tail and a sink target head",
                self.digraph.label(r),
                self.digraph.label(s)
            )));
        }
        let d = self.digraph.swap(r, s)?;
        let mut t: Vec<Vertex> = self.targets.iter().copied().filter(|&v| v != s).collect();
        t.push(r);
        Self::new(d, t, self.ground.clone())
    }

    /// Swaps every arc of the routing's paths, last arc first, moving the
    /// targets onto the starts. The result has the routing's starts as targets.
    ///
    /// Arcs leaving targets are dropped first: no routing needs them, and
    /// each swap only preserves the matroid when the head is a sink. This also
    /// covers dropping the arcs out of starts that were already targets.
    ///
    /// The routing must start in a base of the represented matroid.
    pub fn swap_sequence(&self, routing: &Routing) -> Result<Self> {
        let routing = Routing::new(&self.digraph, routing.paths().to_vec(), &self.targets)?;
        let starts = routing.starts();
        if let Some(&b) = starts.iter().find(|&&b| !self.in_ground(b)) {
            return Err(Error::InvalidRouting(format!(
                "path starts at `{}` outside the ground set",
                self.digraph.label(b)
            )));
        }
        let rank = self.rank();
        if starts.len() != rank {
            return Err(Error::NotABase(format!(
                "routing has {} paths but the rank is {rank}",
                starts.len()
            )));
        }
        let paths = cut_at_first_target(routing.paths(), |v| self.is_target(v));
        let mut pruned = self.digraph.clone();
        for &t in &self.targets {
            pruned.clear_out_arcs(t);
        }
        let (d, _) = apply_swaps(&pruned, &self.targets, &paths);
        Self::new(d, starts, self.ground.clone())
    }

    /// An equivalent representation whose targets are exactly `base`.
    pub fn rebase(&self, base: &[Vertex]) -> Result<Self> {
        let mut base = base.to_vec();
        base.sort_unstable();
        base.dedup();
        if !base.iter().all(|&b| self.in_ground(b)) {
            return Err(Error::NotSubset("ground set"));
        }
        let routing = max_routing(&self.digraph, &base, &self.targets);
        if routing.len() < base.len() {
            return Err(Error::NotABase(format!("only {} of {} elements can be linked", routing.len(), base.len())));
        }
        self.swap_sequence(&routing)
    }

    /// A standard representation of the same matroid with target set `base`.
    ///
    /// After rebasing to `base`, every vertex `v` gets a fresh copy `v'`;
    /// the arcs are copied between the primed vertices, each `b` in `base`
    /// receives `(b', b)` and every other ground element `e` emits `(e, e')`.
    /// Unprimed non-ground vertices remain, isolated.
    pub fn standardize(&self, base: &[Vertex]) -> Result<StandardRepresentation> {
        let rebased = self.rebase(base)?;
        let d0 = rebased.digraph();
        let n = d0.vertex_count();
        let mut d = d0.clone();
        for v in 0..n {
            d.clear_out_arcs(v);
        }
        let mut primed = Vec::with_capacity(n);
        for v in 0..n {
            let mut label = format!("{}'", d0.label(v));
            while d.vertex(&label).is_some() {
                label.push('\'');
            }
            primed.push(d.push_vertex(label)?);
        }
        for (u, v) in d0.arcs() {
            d.insert_arc(primed[u], primed[v]);
        }
        for &e in &rebased.ground {
            if rebased.is_target(e) {
                d.insert_arc(primed[e], e);
            } else {
                d.insert_arc(e, primed[e]);
            }
        }
        let rep = Self::new(d, rebased.targets, rebased.ground)?;
        Ok(StandardRepresentation::new_unchecked(rep))
    }
}

/// Truncates each path at the first vertex satisfying `is_target`.
fn cut_at_first_target(paths: &[Path], is_target: impl Fn(Vertex) -> bool) -> Vec<Path> {
    paths
        .iter()
        .map(|p| {
            let v = p.vertices();
            let cut = v.iter().position(|&x| is_target(x)).unwrap_or(v.len() - 1);
            Path::new_unchecked(v[..=cut].to_vec())
        })
        .collect()
}

/// Swaps the arcs of each path from its end backwards, path by path, moving
/// the target set along: each swap of `(r, s)` replaces `s` by `r`. Targets
/// must be sinks; every swap keeps them so.
fn apply_swaps(d: &Digraph, targets: &[Vertex], paths: &[Path]) -> (Digraph, Vec<Vertex>) {
    let mut d = d.clone();
    let mut t = targets.to_vec();
    for p in paths {
        let v = p.vertices();
        let len = v.len();
        for k in 1..len {
            let (r, s) = (v[len - k - 1], v[len - k]);
            d = d.swap(r, s).expect("routing arcs survive earlier swaps");
            let pos = t.iter().position(|&x| x == s).expect("head of swapped arc is a target");
            t[pos] = r;
        }
    }
    t.sort_unstable();
    (d, t)
}

/// A representation satisfying all three standard conditions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Representation", into = "Representation")]
pub struct StandardRepresentation(Representation);

impl StandardRepresentation {
    pub fn new(rep: Representation) -> Result<Self> {
        match rep.standard_violation() {
            None => Ok(Self(rep)),
            Some((clause, v)) => Err(Error::NotStandard(clause, rep.digraph.label(v).to_string())),
        }
    }

    pub(crate) fn new_unchecked(rep: Representation) -> Self {
        debug_assert!(rep.is_standard(), "{:?}", rep.standard_violation());
        Self(rep)
    }

    pub fn into_inner(self) -> Representation {
        self.0
    }

    /// `(D^opp, E \ T, E)`, a standard representation of the dual.
    pub fn dual_representation(&self) -> Self {
        let rep = &self.0;
        let targets = rep.ground_minus_targets();
        Self::new_unchecked(
            Representation::new(rep.digraph.opposite(), targets, rep.ground.clone())
                .expect("same vertex sets"),
        )
    }

    /// A standard representation of the restriction to `x`.
    ///
    /// When some targets fall outside `x`, a largest subset of `x` that can be
    /// linked to those targets takes their place via the swap sequence of a
    /// maximum routing; no arcs are added.
    pub fn restrict_representation(&self, x: &[Vertex]) -> Result<Self> {
        let rep = &self.0;
        let keep = self.ordered_subset(x)?;
        let t_in: Vec<Vertex> = rep.targets.iter().copied().filter(|t| keep.contains(t)).collect();
        if t_in.len() == rep.targets.len() {
            return Ok(Self::new_unchecked(Representation::new(rep.digraph.clone(), rep.targets.clone(), keep)?));
        }
        let lost: Vec<Vertex> = rep.targets.iter().copied().filter(|t| !keep.contains(t)).collect();
        let routing = max_routing(&rep.digraph, &keep, &lost);
        let (d, _) = apply_swaps(&rep.digraph, &rep.targets, routing.paths());
        let mut targets = t_in;
        targets.extend(routing.starts());
        Ok(Self::new_unchecked(Representation::new(d, targets, keep)?))
    }

    /// A standard representation of the contraction onto `x`, by dualizing,
    /// restricting, and dualizing back.
    pub fn contract_representation(&self, x: &[Vertex]) -> Result<Self> {
        Ok(self.dual_representation().restrict_representation(x)?.dual_representation())
    }

    /// `x` as ground vertices, in ground order.
    fn ordered_subset(&self, x: &[Vertex]) -> Result<Vec<Vertex>> {
        if !x.iter().all(|v| self.0.in_ground(*v)) {
            return Err(Error::NotSubset("ground set"));
        }
        Ok(self.0.ground.iter().copied().filter(|e| x.contains(e)).collect())
    }
}

impl Deref for StandardRepresentation {
    type Target = Representation;

    fn deref(&self) -> &Representation {
        &self.0
    }
}

impl TryFrom<Representation> for StandardRepresentation {
    type Error = Error;

    fn try_from(rep: Representation) -> Result<Self> {
        Self::new(rep)
    }
}

impl From<StandardRepresentation> for Representation {
    fn from(s: StandardRepresentation) -> Self {
        s.0
    }
}

#[derive(Serialize, Deserialize)]
struct RepresentationJson {
    digraph: Digraph,
    targets: Vec<String>,
    ground: Vec<String>,
}

impl TryFrom<RepresentationJson> for Representation {
    type Error = Error;

    fn try_from(j: RepresentationJson) -> Result<Self> {
        let lookup = |field: &str, l: &String| {
            j.digraph
                .vertex(l)
                .ok_or_else(|| Error::Parse(format!("{field}: unknown vertex `{l}`")))
        };
        let t = j.targets.iter().map(|l| lookup("targets", l)).collect::<Result<Vec<_>>>()?;
        let e = j.ground.iter().map(|l| lookup("ground", l)).collect::<Result<Vec<_>>>()?;
        Representation::new(j.digraph, t, e)
    }
}

impl From<Representation> for RepresentationJson {
    fn from(r: Representation) -> Self {
        let name = |v: &Vertex| r.digraph.label(*v).to_string();
        RepresentationJson {
            targets: r.targets.iter().map(name).collect(),
            ground: r.ground.iter().map(name).collect(),
            digraph: r.digraph,
        }
    }
}
