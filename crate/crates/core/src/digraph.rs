//! Finite simple digraphs with labeled vertices.
//!
//! Arcs are stored as a dense bit matrix, so membership is a single word
//! lookup and successor iteration always runs in ascending vertex order.
//! Loops `(v, v)` may be stored; routing code never uses them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DigraphJson", into = "DigraphJson")]
pub struct Digraph {
    labels: Vec<String>,
    words: usize,
    rows: Vec<u64>,
    arc_count: usize,
}

impl Digraph {
    /// Arc-free digraph on the given labels.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let words = labels.len().div_ceil(64).max(1);
        Ok(Self {
            rows: vec![0; labels.len() * words],
            labels,
            words,
            arc_count: 0,
        })
    }

    /// Arc-free digraph whose labels are the decimal vertex ids.
    pub fn with_vertices(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string())).expect("numeric labels are unique")
    }

    pub fn from_arcs<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        arcs: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self> {
        let mut d = Self::new(labels)?;
        for (u, v) in arcs {
            d.check(u)?;
            d.check(v)?;
            d.insert_arc(u, v);
        }
        Ok(d)
    }

    fn check(&self, v: Vertex) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v, self.vertex_count()))
        }
    }

    pub(crate) fn insert_arc(&mut self, u: Vertex, v: Vertex) {
        let idx = u * self.words + v / 64;
        let bit = 1u64 << (v % 64);
        if self.rows[idx] & bit == 0 {
            self.rows[idx] |= bit;
            self.arc_count += 1;
        }
    }

    pub(crate) fn remove_arc(&mut self, u: Vertex, v: Vertex) {
        let idx = u * self.words + v / 64;
        let bit = 1u64 << (v % 64);
        if self.rows[idx] & bit != 0 {
            self.rows[idx] &= !bit;
            self.arc_count -= 1;
        }
    }

    pub(crate) fn clear_out_arcs(&mut self, u: Vertex) {
        for w in 0..self.words {
            let idx = u * self.words + w;
            self.arc_count -= self.rows[idx].count_ones() as usize;
            self.rows[idx] = 0;
        }
    }

    /// Appends a fresh isolated vertex and returns its id.
    pub(crate) fn push_vertex(&mut self, label: String) -> Result<Vertex> {
        if self.labels.contains(&label) {
            return Err(Error::DuplicateLabel(label));
        }
        let n = self.labels.len();
        let words = (n + 1).div_ceil(64).max(1);
        if words != self.words {
            let mut rows = vec![0; (n + 1) * words];
            for u in 0..n {
                rows[u * words..u * words + self.words]
                    .copy_from_slice(&self.rows[u * self.words..(u + 1) * self.words]);
            }
            self.rows = rows;
            self.words = words;
        } else {
            self.rows.extend(std::iter::repeat_n(0, words));
        }
        self.labels.push(label);
        Ok(n)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Option<Vertex> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        u < self.vertex_count()
            && v < self.vertex_count()
            && self.rows[u * self.words + v / 64] & (1u64 << (v % 64)) != 0
    }

    /// Successors of `u` in ascending order, loops included.
    pub fn successors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let row = &self.rows[u * self.words..(u + 1) * self.words];
        row.iter().enumerate().flat_map(|(w, &bits)| BitIter(bits).map(move |b| w * 64 + b))
    }

    pub fn predecessors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).filter(move |&u| self.has_arc(u, v))
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| self.successors(u).map(move |v| (u, v)))
    }

    pub fn out_degree(&self, u: Vertex) -> usize {
        self.rows[u * self.words..(u + 1) * self.words]
            .iter()
            .map(|b| b.count_ones() as usize)
            .sum()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.predecessors(v).count()
    }

    pub fn is_sink(&self, v: Vertex) -> bool {
        self.out_degree(v) == 0
    }

    pub fn is_source(&self, v: Vertex) -> bool {
        self.in_degree(v) == 0
    }

    /// Vertices incident with at least one arc.
    pub fn non_isolated_count(&self) -> usize {
        let mut touched = vec![false; self.vertex_count()];
        for (u, v) in self.arcs() {
            touched[u] = true;
            touched[v] = true;
        }
        touched.into_iter().filter(|&t| t).count()
    }

    /// Same vertices, every arc reversed.
    pub fn opposite(&self) -> Self {
        let mut d = Self {
            labels: self.labels.clone(),
            words: self.words,
            rows: vec![0; self.rows.len()],
            arc_count: 0,
        };
        for (u, v) in self.arcs() {
            d.insert_arc(v, u);
        }
        d
    }

    /// The swap of the arc `(r, s)`: every arc leaving `r` is moved onto `s`
    /// (except the one that would become the loop `(s, s)`) and `(s, r)` is added.
    pub fn swap(&self, r: Vertex, s: Vertex) -> Result<Self> {
        if r == s {
            return Err(Error::SwapLoop(r));
        }
        if !self.has_arc(r, s) {
            return Err(Error::NotAnArc(r, s));
        }
        let moved: Vec<Vertex> = self.successors(r).filter(|&v| v != s).collect();
        let mut d = self.clone();
        d.clear_out_arcs(r);
        for v in moved {
            d.insert_arc(s, v);
        }
        d.insert_arc(s, r);
        Ok(d)
    }

    pub fn remove_loops(&self) -> Self {
        let mut d = self.clone();
        for v in 0..self.vertex_count() {
            d.remove_arc(v, v);
        }
        d
    }
}

/// Iterates the set bit positions of a word, lowest first.
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// A non-empty, non-repeating vertex sequence whose consecutive pairs are arcs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<Vertex>);

impl Path {
    pub fn new(d: &Digraph, vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidPath("empty vertex sequence".into()));
        }
        let mut seen = vec![false; d.vertex_count()];
        for &v in &vertices {
            d.check(v)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPath(format!("vertex `{}` repeats", d.label(v))));
            }
        }
        for w in vertices.windows(2) {
            if !d.has_arc(w[0], w[1]) {
                return Err(Error::InvalidPath(format!(
                    "({}, {}) is not an arc",
                    d.label(w[0]),
                    d.label(w[1])
                )));
            }
        }
        Ok(Self(vertices))
    }

    pub(crate) fn new_unchecked(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty());
        Self(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn first(&self) -> Vertex {
        self.0[0]
    }

    pub fn last(&self) -> Vertex {
        self.0[self.0.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Serialize, Deserialize)]
struct DigraphJson {
    vertices: Vec<String>,
    arcs: Vec<(String, String)>,
}

impl TryFrom<DigraphJson> for Digraph {
    type Error = Error;

    fn try_from(j: DigraphJson) -> Result<Self> {
        let mut d = Digraph::new(j.vertices)?;
        for (i, (u, v)) in j.arcs.iter().enumerate() {
            let lookup = |l: &String| {
                d.vertex(l)
                    .ok_or_else(|| Error::Parse(format!("arcs[{i}]: unknown vertex `{l}`")))
            };
            let (u, v) = (lookup(u)?, lookup(v)?);
            d.insert_arc(u, v);
        }
        Ok(d)
    }
}

impl From<Digraph> for DigraphJson {
    fn from(d: Digraph) -> Self {
        let arcs = d
            .arcs()
            .map(|(u, v)| (d.label(u).to_string(), d.label(v).to_string()))
            .collect();
        DigraphJson { vertices: d.labels, arcs }
    }
}
