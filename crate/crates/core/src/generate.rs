//! Instance generators for property suites.

use std::collections::HashSet;

use rand::Rng;

use crate::bits::{elements, full, k_subsets};
use crate::digraph::Digraph;
use crate::gammoid::Representation;
use crate::matroid::{gamma, Matroid};

/// Element labels `a, b, c, ...`, then `e26, e27, ...`.
pub fn element_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("e{i}")
            }
        })
        .collect()
}

/// Digraph on `n` vertices with each non-loop arc present with probability `p`.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Digraph {
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|(u, v)| u != v)
        .filter(|_| rng.gen_bool(p))
        .collect();
    Digraph::from_arcs((0..n).map(|i| format!("v{i}")), arcs).expect("in range")
}

/// A random representation with between one and `max_vertices` vertices and
/// a non-empty ground set.
pub fn random_representation<R: Rng>(rng: &mut R, max_vertices: usize) -> Representation {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let p = rng.gen_range(0.15..0.6);
    let d = random_digraph(rng, n, p);
    let mut ground: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
    if ground.is_empty() {
        ground.push(rng.gen_range(0..n));
    }
    let targets: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    Representation::new(d, targets, ground).expect("in range")
}

/// Gamma of a random representation with at most `max_ground` elements.
pub fn random_gammoid<R: Rng>(rng: &mut R, max_vertices: usize, max_ground: usize) -> Matroid {
    loop {
        let rep = random_representation(rng, max_vertices);
        if rep.ground().len() <= max_ground {
            return gamma(&rep).expect("small ground set");
        }
    }
}

/// Every matroid on the labels `a, b, ...` with `n` elements (labelled, so
/// isomorphic copies are listed separately). Practical for `n <= 5`.
pub fn all_matroids(n: usize) -> Vec<Matroid> {
    assert!(n <= 5, "{n} elements is too many to enumerate");
    let labels = element_labels(n);
    let mut out = Vec::new();
    for r in 0..=n {
        let subsets: Vec<u32> = k_subsets(n, r).collect();
        for family in 1u64..1 << subsets.len() {
            let bases: Vec<u32> = elements(family as u32).map(|i| subsets[i]).collect();
            if exchange_holds(&bases) {
                out.push(Matroid::from_bases(labels.clone(), bases).expect("exchange checked"));
            }
        }
    }
    debug_assert!(out.iter().all(|m| m.full_mask() == full(n)));
    out
}

fn exchange_holds(bases: &[u32]) -> bool {
    let set: HashSet<u32> = bases.iter().copied().collect();
    bases.iter().all(|&b1| {
        bases.iter().all(|&b2| {
            elements(b1 & !b2).all(|x| elements(b2 & !b1).any(|y| set.contains(&(b1 & !(1 << x) | 1 << y))))
        })
    })
}
