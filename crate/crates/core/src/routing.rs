//! Vertex-disjoint routings.
//!
//! A maximum routing is a maximum flow in the vertex-split network: every
//! vertex `v` becomes `v_in -> v_out` with capacity one, every arc `(u, v)`
//! becomes `u_out -> v_in`, the super-source feeds `x_in` for each start and
//! `t_out` drains into the super-sink for each target. Augmenting paths are
//! searched depth-first with neighbours visited in ascending vertex order, so
//! the returned paths are reproducible.

use crate::digraph::{Digraph, Path, Vertex};
use crate::error::{Error, Result};
use crate::gammoid::Representation;

/// Pairwise vertex-disjoint paths, sorted by start vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Routing {
    paths: Vec<Path>,
}

impl Routing {
    /// Validates the routing invariants against `d` and `targets`.
    pub fn new(d: &Digraph, mut paths: Vec<Path>, targets: &[Vertex]) -> Result<Self> {
        let mut used = vec![false; d.vertex_count()];
        for p in &paths {
            Path::new(d, p.vertices().to_vec())?;
            for &v in p.vertices() {
                if std::mem::replace(&mut used[v], true) {
                    return Err(Error::InvalidRouting(format!(
                        "paths share vertex `{}`",
                        d.label(v)
                    )));
                }
            }
            if !targets.contains(&p.last()) {
                return Err(Error::InvalidRouting(format!(
                    "path from `{}` ends outside the targets",
                    d.label(p.first())
                )));
            }
        }
        paths.sort();
        Ok(Self { paths })
    }

    pub fn empty() -> Self {
        Self { paths: Vec::new() }
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn starts(&self) -> Vec<Vertex> {
        self.paths.iter().map(Path::first).collect()
    }

    pub fn ends(&self) -> Vec<Vertex> {
        self.paths.iter().map(Path::last).collect()
    }
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    to: usize,
    rev: usize,
    cap: u8,
}

/// Reusable flow network for one digraph and target set.
///
/// Source capacities are set per query, so many start sets can be tested
/// against the same `(D, T)` without rebuilding.
#[derive(Clone, Debug)]
pub struct RoutingNetwork {
    n: usize,
    graph: Vec<Vec<Edge>>,
    initial: Vec<Vec<u8>>,
    visited: Vec<u32>,
    stamp: u32,
}

impl RoutingNetwork {
    pub fn new(d: &Digraph, targets: &[Vertex]) -> Self {
        Self::from_successors(d.vertex_count(), |v| d.successors(v).collect(), targets)
    }

    /// Builds the network for vertices `0..n` with `successors(v)` listing
    /// the heads of arcs leaving `v` in ascending order.
    pub fn from_successors(
        n: usize,
        successors: impl Fn(Vertex) -> Vec<Vertex>,
        targets: &[Vertex],
    ) -> Self {
        let (source, sink) = (2 * n, 2 * n + 1);
        let mut graph: Vec<Vec<Edge>> = vec![Vec::new(); 2 * n + 2];
        let add = |graph: &mut Vec<Vec<Edge>>, from: usize, to: usize, cap: u8| {
            let (rf, rt) = (graph[to].len(), graph[from].len());
            graph[from].push(Edge { to, rev: rf, cap });
            graph[to].push(Edge { to: from, rev: rt, cap: 0 });
        };
        for v in 0..n {
            // index v of graph[source] is the start edge of v
            add(&mut graph, source, 2 * v, 0);
        }
        let mut is_target = vec![false; n];
        for &t in targets {
            is_target[t] = true;
        }
        for (v, &target) in is_target.iter().enumerate() {
            add(&mut graph, 2 * v, 2 * v + 1, 1);
            // draining first makes paths stop at the first target they reach
            if target {
                add(&mut graph, 2 * v + 1, sink, 1);
            }
            for w in successors(v).into_iter().filter(|&w| w != v) {
                add(&mut graph, 2 * v + 1, 2 * w, 1);
            }
        }
        let initial = graph.iter().map(|es| es.iter().map(|e| e.cap).collect()).collect();
        Self {
            n,
            visited: vec![0; 2 * n + 2],
            stamp: 0,
            graph,
            initial,
        }
    }

    fn reset(&mut self, starts: &[Vertex]) {
        for (es, caps) in self.graph.iter_mut().zip(&self.initial) {
            for (e, &c) in es.iter_mut().zip(caps) {
                e.cap = c;
            }
        }
        let source = 2 * self.n;
        for &x in starts {
            self.graph[source][x].cap = 1;
        }
    }

    fn augment(&mut self, u: usize, sink: usize) -> bool {
        if u == sink {
            return true;
        }
        self.visited[u] = self.stamp;
        for i in 0..self.graph[u].len() {
            let e = self.graph[u][i];
            if e.cap == 0 || self.visited[e.to] == self.stamp {
                continue;
            }
            if self.augment(e.to, sink) {
                self.graph[u][i].cap -= 1;
                self.graph[e.to][e.rev].cap += 1;
                return true;
            }
        }
        false
    }

    /// Size of a maximum routing from a subset of `starts` into the targets.
    pub fn max_size(&mut self, starts: &[Vertex]) -> usize {
        self.reset(starts);
        let (source, sink) = (2 * self.n, 2 * self.n + 1);
        let mut flow = 0;
        loop {
            self.stamp = self.stamp.wrapping_add(1);
            if self.stamp == 0 {
                self.visited.iter_mut().for_each(|v| *v = 0);
                self.stamp = 1;
            }
            if !self.augment(source, sink) {
                return flow;
            }
            flow += 1;
        }
    }

    /// True iff every vertex of `starts` can be routed simultaneously.
    pub fn is_linkable(&mut self, starts: &[Vertex]) -> bool {
        self.max_size(starts) == starts.len()
    }

    /// Maximum routing from a subset of `starts`. Paths are cut at the first
    /// target they visit, so each path meets the targets only in its end.
    pub fn max_routing(&mut self, d: &Digraph, starts: &[Vertex]) -> Routing {
        self.max_size(starts);
        let n = self.n;
        let source = 2 * n;
        let sink = 2 * n + 1;
        let has_flow = |graph: &Vec<Vec<Edge>>, u: usize, i: usize| {
            // forward edges carry flow exactly when their reverse has capacity
            let e = graph[u][i];
            graph[e.to][e.rev].cap > 0 && self.initial[u][i] > 0
        };
        let mut paths = Vec::new();
        for x in 0..n {
            let e = self.graph[source][x];
            if self.graph[e.to][e.rev].cap == 0 {
                continue;
            }
            let mut verts = vec![x];
            let mut node = 2 * x + 1;
            loop {
                let next = (0..self.graph[node].len())
                    .find(|&i| has_flow(&self.graph, node, i))
                    .map(|i| self.graph[node][i].to)
                    .expect("flow is conserved");
                if next == sink {
                    break;
                }
                let v = next / 2;
                verts.push(v);
                node = 2 * v + 1;
            }
            paths.push(verts);
        }
        let is_target: Vec<bool> = (0..n).map(|v| self.graph[2 * v + 1].iter().any(|e| e.to == sink)).collect();
        let paths = paths
            .into_iter()
            .map(|mut verts| {
                let cut = verts.iter().position(|&v| is_target[v]).expect("paths end in targets");
                verts.truncate(cut + 1);
                Path::new_unchecked(verts)
            })
            .collect::<Vec<_>>();
        debug_assert!(Routing::new(d, paths.clone(), &(0..n).filter(|&v| is_target[v]).collect::<Vec<_>>()).is_ok());
        Routing { paths }
    }
}

/// A routing `S => T` with `S` a subset of `starts` of maximum possible size.
pub fn max_routing(d: &Digraph, starts: &[Vertex], targets: &[Vertex]) -> Routing {
    RoutingNetwork::new(d, targets).max_routing(d, starts)
}

/// Whether `x` (a subset of the ground set) can be routed into the targets.
pub fn is_independent(rep: &Representation, x: &[Vertex]) -> Result<bool> {
    if let Some(&v) = x.iter().find(|v| !rep.ground().contains(v)) {
        return Err(Error::UnknownLabel(
            rep.digraph().labels().get(v).cloned().unwrap_or_else(|| v.to_string()),
        ));
    }
    let targets: Vec<Vertex> = rep.targets().to_vec();
    Ok(RoutingNetwork::new(rep.digraph(), &targets).is_linkable(x))
}

/// Independence of every subset of `ground`, indexed by bit mask over
/// positions in `ground`.
pub fn independence_table(d: &Digraph, targets: &[Vertex], ground: &[Vertex]) -> Vec<bool> {
    let m = ground.len();
    assert!(m < 32, "independence table over {m} elements");
    let mut net = RoutingNetwork::new(d, targets);
    let mut table = vec![false; 1 << m];
    table[0] = true;
    let mut starts = Vec::with_capacity(m);
    for mask in 1usize..1 << m {
        // dependent as soon as one maximal proper subset is
        let mut bits = mask;
        let mut all_sub = true;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            if !table[mask ^ b] {
                all_sub = false;
                break;
            }
            bits ^= b;
        }
        if !all_sub {
            continue;
        }
        starts.clear();
        starts.extend((0..m).filter(|i| mask >> i & 1 == 1).map(|i| ground[i]));
        table[mask] = net.is_linkable(&starts);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_starts_compete_for_one_target() {
        let d = Digraph::from_arcs(["a", "b", "t"], [(0, 2), (1, 2)]).unwrap();
        let r = max_routing(&d, &[0, 1], &[2]);
        assert_eq!(r.len(), 1);
        assert_eq!(r.paths()[0].vertices(), &[0, 2]);
    }

    #[test]
    fn single_vertex_path_when_start_is_target() {
        let d = Digraph::with_vertices(1);
        let r = max_routing(&d, &[0], &[0]);
        assert_eq!(r.len(), 1);
        assert_eq!(r.paths()[0].vertices(), &[0]);
    }

    #[test]
    fn complete_bipartite_three_by_two() {
        let arcs = (0..3).flat_map(|x| (3..5).map(move |t| (x, t)));
        let d = Digraph::from_arcs((0..5).map(|i| i.to_string()), arcs).unwrap();
        assert_eq!(max_routing(&d, &[0, 1, 2], &[3, 4]).len(), 2);
    }

    #[test]
    fn paths_stop_at_first_target() {
        // a -> t1 -> t2, both targets
        let d = Digraph::from_arcs(["a", "t1", "t2"], [(0, 1), (1, 2)]).unwrap();
        let r = max_routing(&d, &[0], &[1, 2]);
        assert_eq!(r.paths()[0].vertices(), &[0, 1]);
    }

    #[test]
    fn loops_are_ignored() {
        let d = Digraph::from_arcs(["a", "t"], [(0, 0), (0, 1), (1, 1)]).unwrap();
        let r = max_routing(&d, &[0], &[1]);
        assert_eq!(r.paths()[0].vertices(), &[0, 1]);
    }

    #[test]
    fn rerouting_through_reverse_residual() {
        // a -> m -> t1, a -> t2 ... b -> m only; greedy a->m->t1 must be undone
        //   a=0 b=1 m=2 t1=3 t2=4
        let d = Digraph::from_arcs(
            ["a", "b", "m", "t1", "t2"],
            [(0, 2), (0, 4), (1, 2), (2, 3)],
        )
        .unwrap();
        let r = max_routing(&d, &[0, 1], &[3, 4]);
        assert_eq!(r.len(), 2);
        assert_eq!(r.paths()[0].vertices(), &[0, 4]);
        assert_eq!(r.paths()[1].vertices(), &[1, 2, 3]);
    }

    #[test]
    fn routing_validation() {
        let d = Digraph::from_arcs(["a", "b", "t"], [(0, 2), (1, 2)]).unwrap();
        let p = |v: Vec<usize>| Path::new(&d, v).unwrap();
        assert!(Routing::new(&d, vec![p(vec![0, 2]), p(vec![1, 2])], &[2]).is_err());
        assert!(Routing::new(&d, vec![p(vec![0])], &[2]).is_err());
        assert!(Routing::new(&d, vec![p(vec![0, 2]), p(vec![1])], &[1, 2]).is_ok());
    }

    #[test]
    fn table_is_monotone_and_matches_direct_queries() {
        let d = Digraph::from_arcs(["a", "b", "c", "t"], [(0, 3), (1, 3), (2, 1)]).unwrap();
        let ground = [0, 1, 2, 3];
        let table = independence_table(&d, &[3], &ground);
        let mut net = RoutingNetwork::new(&d, &[3]);
        for (mask, &independent) in table.iter().enumerate() {
            let x: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
            assert_eq!(independent, net.is_linkable(&x), "mask {mask:b}");
        }
    }
}
