//! Brute-force oracles. Nothing here calls the routing, matroid or
//! representation algorithms of the crate; results are compared by label.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gammoid_core::{Digraph, Matroid, Representation};

pub type Adj = Vec<Vec<bool>>;
pub type Set = BTreeSet<String>;

pub fn adjacency(d: &Digraph) -> Adj {
    let n = d.vertex_count();
    (0..n).map(|u| (0..n).map(|v| d.has_arc(u, v)).collect()).collect()
}

/// Whether `xs` can be joined to targets by pairwise vertex-disjoint
/// directed paths, trying every family of simple paths.
pub fn linkable(adj: &Adj, targets: &[bool], xs: &[usize]) -> bool {
    let mut used = vec![false; adj.len()];
    link_from(adj, targets, xs, &mut used)
}

fn link_from(adj: &Adj, targets: &[bool], xs: &[usize], used: &mut Vec<bool>) -> bool {
    let Some((&x, rest)) = xs.split_first() else {
        return true;
    };
    !used[x] && walk(adj, targets, x, rest, used)
}

fn walk(adj: &Adj, targets: &[bool], v: usize, rest: &[usize], used: &mut Vec<bool>) -> bool {
    used[v] = true;
    let ok = (targets[v] && link_from(adj, targets, rest, used))
        || (0..adj.len()).any(|w| adj[v][w] && !used[w] && walk(adj, targets, w, rest, used));
    used[v] = false;
    ok
}

/// Largest linkable subset of `starts`.
pub fn max_linkable(adj: &Adj, targets: &[bool], starts: &[usize]) -> usize {
    let k = starts.len();
    (0u32..1 << k)
        .filter(|m| {
            let xs: Vec<usize> = (0..k).filter(|i| m >> i & 1 == 1).map(|i| starts[i]).collect();
            linkable(adj, targets, &xs)
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn target_flags(n: usize, targets: &[usize]) -> Vec<bool> {
    let mut t = vec![false; n];
    for &v in targets {
        t[v] = true;
    }
    t
}

/// A matroid as labelled bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Oracle {
    pub ground: Set,
    pub bases: BTreeSet<Set>,
}

impl Oracle {
    pub fn of(m: &Matroid) -> Self {
        Oracle {
            ground: m.ground().iter().cloned().collect(),
            bases: m.bases().iter().map(|&b| m.labels_of(b).into_iter().collect()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.bases.iter().next().map_or(0, |b| b.len())
    }

    pub fn rank_of(&self, a: &Set) -> usize {
        self.bases.iter().map(|b| b.intersection(a).count()).max().unwrap_or(0)
    }

    pub fn dual(&self) -> Self {
        Oracle {
            ground: self.ground.clone(),
            bases: self.bases.iter().map(|b| self.ground.difference(b).cloned().collect()).collect(),
        }
    }

    pub fn restrict(&self, x: &Set) -> Self {
        let r = self.rank_of(x);
        Oracle {
            ground: x.clone(),
            bases: self
                .bases
                .iter()
                .map(|b| b.intersection(x).cloned().collect::<Set>())
                .filter(|s| s.len() == r)
                .collect(),
        }
    }

    /// Contract everything outside `x`.
    pub fn contract_to(&self, x: &Set) -> Self {
        let c: Set = self.ground.difference(x).cloned().collect();
        let rc = self.rank_of(&c);
        Oracle {
            ground: x.clone(),
            bases: self
                .bases
                .iter()
                .filter(|b| b.intersection(&c).count() == rc)
                .map(|b| b.intersection(x).cloned().collect())
                .collect(),
        }
    }

    pub fn subsets(&self) -> Vec<Set> {
        let g: Vec<&String> = self.ground.iter().collect();
        (0u32..1 << g.len())
            .map(|m| (0..g.len()).filter(|i| m >> i & 1 == 1).map(|i| g[i].clone()).collect())
            .collect()
    }
}

/// The matroid of `(adj, targets, ground)` with the given vertex labels.
pub fn gamma_adj(adj: &Adj, labels: &[String], targets: &[usize], ground: &[usize]) -> Oracle {
    let t = target_flags(adj.len(), targets);
    let k = ground.len();
    let mut indep: Vec<Vec<usize>> = Vec::new();
    let mut rank = 0;
    for m in 0u32..1 << k {
        let xs: Vec<usize> = (0..k).filter(|i| m >> i & 1 == 1).map(|i| ground[i]).collect();
        if linkable(adj, &t, &xs) {
            rank = rank.max(xs.len());
            indep.push(xs);
        }
    }
    Oracle {
        ground: ground.iter().map(|&v| labels[v].clone()).collect(),
        bases: indep
            .into_iter()
            .filter(|xs| xs.len() == rank)
            .map(|xs| xs.iter().map(|&v| labels[v].clone()).collect())
            .collect(),
    }
}

pub fn gamma(rep: &Representation) -> Oracle {
    let d = rep.digraph();
    gamma_adj(&adjacency(d), d.labels(), rep.targets(), rep.ground())
}

/// Targets inside the ground set, targets are sinks, other ground elements are sources.
pub fn is_standard(rep: &Representation) -> bool {
    let adj = adjacency(rep.digraph());
    let n = adj.len();
    let t = target_flags(n, rep.targets());
    let e = target_flags(n, rep.ground());
    (0..n).all(|v| {
        (!t[v] || (e[v] && !adj[v].iter().any(|&a| a)))
            && (!e[v] || t[v] || !(0..n).any(|u| adj[u][v]))
    })
}

/// Whether some standard representation of `m` with at most `arcs` arcs
/// exists. Every non-isolated non-ground vertex touches an arc, so `2 * arcs`
/// extra vertices suffice. Targets range over all rank-sized subsets.
pub fn has_representation_within(m: &Oracle, arcs: usize) -> bool {
    let labels: Vec<String> = m.ground.iter().cloned().chain((0..2 * arcs).map(|i| format!("#{i}"))).collect();
    let n = m.ground.len();
    let v = labels.len();
    let r = m.rank();
    let ground: Vec<usize> = (0..n).collect();
    for t in 0u32..1 << n {
        if t.count_ones() as usize != r {
            continue;
        }
        let is_t = |x: usize| x < n && t >> x & 1 == 1;
        let allowed: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| (0..v).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && !is_t(a) && (b >= n || is_t(b)))
            .collect();
        let targets: Vec<usize> = (0..n).filter(|&x| is_t(x)).collect();
        let mut chosen = Vec::new();
        if subsets_up_to(&allowed, arcs, 0, &mut chosen, &mut |arc_set| {
            let mut adj = vec![vec![false; v]; v];
            for &(a, b) in arc_set {
                adj[a][b] = true;
            }
            gamma_adj(&adj, &labels, &targets, &ground) == *m
        }) {
            return true;
        }
    }
    false
}

type ArcSetTest<'a> = dyn FnMut(&[(usize, usize)]) -> bool + 'a;

fn subsets_up_to(
    items: &[(usize, usize)],
    left: usize,
    from: usize,
    chosen: &mut Vec<(usize, usize)>,
    f: &mut ArcSetTest,
) -> bool {
    if f(chosen) {
        return true;
    }
    if left == 0 {
        return false;
    }
    for i in from..items.len() {
        chosen.push(items[i]);
        let hit = subsets_up_to(items, left - 1, i + 1, chosen, f);
        chosen.pop();
        if hit {
            return true;
        }
    }
    false
}

pub fn set(xs: &[&str]) -> Set {
    xs.iter().map(|s| s.to_string()).collect()
}

pub fn labels_of(set: &Set) -> Vec<String> {
    set.iter().cloned().collect()
}

impl Oracle {
    pub fn direct_sum(&self, other: &Oracle) -> Self {
        Oracle {
            ground: self.ground.union(&other.ground).cloned().collect(),
            bases: self
                .bases
                .iter()
                .flat_map(|a| other.bases.iter().map(move |b| a.union(b).cloned().collect()))
                .collect(),
        }
    }

    pub fn to_matroid(&self) -> Matroid {
        let ground: Vec<String> = self.ground.iter().cloned().collect();
        let mask = |b: &Set| {
            ground.iter().enumerate().filter(|(_, g)| b.contains(*g)).fold(0u32, |m, (i, _)| m | 1 << i)
        };
        Matroid::from_bases(ground.clone(), self.bases.iter().map(mask)).expect("oracle bases form a matroid")
    }
}

pub fn kw_formula(r: u128, n: u128) -> u128 {
    r.pow(4) * n * n + 2 * r.pow(3) * n + 2 * r * r * n * n + r * r + 2 * r * n + n * n
}

/// Vertices incident with at least one arc.
pub fn touched(adj: &Adj) -> usize {
    (0..adj.len()).filter(|&v| (0..adj.len()).any(|u| adj[u][v] || adj[v][u])).count()
}

pub fn arc_total(adj: &Adj) -> usize {
    adj.iter().map(|row| row.iter().filter(|&&a| a).count()).sum()
}
