//! Explicit finite matroids stored by their bases.
//!
//! Element labels are strings; a basis is a bit mask over positions in the
//! ground order. Equality compares label sets and basis families, so two
//! matroids with different ground orders can be equal.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::bits::{compress, elements, full, k_subsets, submasks};
use crate::error::{Error, Result};
use crate::gammoid::Representation;
use crate::routing::RoutingNetwork;

/// Largest ground set `gamma` enumerates unless told otherwise.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 16;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "MatroidJson", into = "MatroidJson")]
pub struct Matroid {
    ground: Vec<String>,
    bases: Vec<u32>,
}

impl Matroid {
    /// Builds a matroid and checks the basis axioms.
    pub fn from_bases(ground: Vec<String>, bases: impl IntoIterator<Item = u32>) -> Result<Self> {
        if ground.len() > 32 {
            return Err(Error::EnumerationLimit { size: ground.len(), limit: 32 });
        }
        let mut seen = HashSet::new();
        for l in &ground {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut bases: Vec<u32> = bases.into_iter().collect();
        bases.sort_unstable();
        bases.dedup();
        let m = Self { ground, bases };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_bases_unchecked(ground: Vec<String>, bases: impl IntoIterator<Item = u32>) -> Self {
        let mut bases: Vec<u32> = bases.into_iter().collect();
        bases.sort_unstable();
        bases.dedup();
        let m = Self { ground, bases };
        debug_assert!(m.bases.len() > 200 || m.validate().is_ok(), "{:?}", m.validate());
        m
    }

    /// Checks non-emptiness, equicardinality and basis exchange.
    pub fn validate(&self) -> Result<()> {
        let all = full(self.ground.len());
        let Some(&first) = self.bases.first() else {
            return Err(Error::InvalidMatroid("no bases".into()));
        };
        let r = first.count_ones();
        if let Some(b) = self.bases.iter().find(|&&b| b & !all != 0) {
            return Err(Error::InvalidMatroid(format!("basis {b:#b} exceeds the ground set")));
        }
        if self.bases.iter().any(|b| b.count_ones() != r) {
            return Err(Error::InvalidMatroid("bases differ in size".into()));
        }
        let set: HashSet<u32> = self.bases.iter().copied().collect();
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                for x in elements(b1 & !b2) {
                    let without = b1 & !(1 << x);
                    if !elements(b2 & !b1).any(|y| set.contains(&(without | 1 << y))) {
                        return Err(Error::InvalidMatroid(format!(
                            "basis exchange fails for {} leaving {}",
                            self.format_set(b1),
                            self.ground[x]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The matroid on no elements.
    pub fn empty() -> Self {
        Self { ground: Vec::new(), bases: vec![0] }
    }

    /// U_{r,n} on the labels `1..=n`.
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        if r > n {
            return Err(Error::RankTooLarge(r, n));
        }
        if n > 32 {
            return Err(Error::EnumerationLimit { size: n, limit: 32 });
        }
        let ground = (1..=n).map(|i| i.to_string()).collect();
        Ok(Self::from_bases_unchecked(ground, k_subsets(n, r)))
    }

    /// Every subset independent.
    pub fn free(ground: Vec<String>) -> Self {
        let all = full(ground.len());
        Self::from_bases_unchecked(ground, [all])
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    pub fn rank(&self) -> usize {
        self.bases[0].count_ones() as usize
    }

    pub fn full_mask(&self) -> u32 {
        full(self.ground.len())
    }

    pub fn is_base(&self, mask: u32) -> bool {
        self.bases.binary_search(&mask).is_ok()
    }

    pub fn is_independent(&self, mask: u32) -> bool {
        self.bases.iter().any(|&b| mask & !b == 0)
    }

    pub fn rank_of(&self, mask: u32) -> usize {
        self.bases.iter().map(|&b| (b & mask).count_ones()).max().unwrap_or(0) as usize
    }

    /// Elements in no basis.
    pub fn loops(&self) -> u32 {
        self.full_mask() & !self.bases.iter().fold(0, |acc, &b| acc | b)
    }

    /// Elements in every basis.
    pub fn coloops(&self) -> u32 {
        self.bases.iter().fold(self.full_mask(), |acc, &b| acc & b)
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.ground.iter().position(|l| l == label)
    }

    /// Mask of the given labels.
    pub fn mask_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<u32> {
        labels.iter().try_fold(0u32, |acc, l| {
            let l = l.as_ref();
            self.position(l)
                .map(|i| acc | 1 << i)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        })
    }

    pub fn labels_of(&self, mask: u32) -> Vec<String> {
        elements(mask).map(|i| self.ground[i].clone()).collect()
    }

    fn format_set(&self, mask: u32) -> String {
        format!("{{{}}}", self.labels_of(mask).join(","))
    }

    pub fn dual(&self) -> Self {
        let all = self.full_mask();
        Self::from_bases_unchecked(self.ground.clone(), self.bases.iter().map(|&b| all & !b))
    }

    /// Restriction to the elements of `x` (ground order kept).
    pub fn restrict_mask(&self, x: u32) -> Result<Self> {
        if x & !self.full_mask() != 0 {
            return Err(Error::NotSubset("ground set"));
        }
        let r = self.rank_of(x);
        let ground = self.labels_of(x);
        let bases: BTreeSet<u32> = self
            .bases
            .iter()
            .map(|&b| b & x)
            .filter(|b| b.count_ones() as usize == r)
            .map(|b| compress(b, x))
            .collect();
        Ok(Self::from_bases_unchecked(ground, bases))
    }

    pub fn restrict<S: AsRef<str>>(&self, x: &[S]) -> Result<Self> {
        let mask = self.mask_of(x).map_err(|_| Error::NotSubset("ground set"))?;
        self.restrict_mask(mask)
    }

    /// Contraction onto `x`, i.e. contracting everything outside `x`;
    /// computed as the dual of the restriction of the dual.
    pub fn contract_to_mask(&self, x: u32) -> Result<Self> {
        Ok(self.dual().restrict_mask(x)?.dual())
    }

    pub fn contract_to<S: AsRef<str>>(&self, x: &[S]) -> Result<Self> {
        let mask = self.mask_of(x).map_err(|_| Error::NotSubset("ground set"))?;
        self.contract_to_mask(mask)
    }

    /// `(M contracted to y) restricted to x`, with `x` a subset of `y`.
    pub fn minor_mask(&self, y: u32, x: u32) -> Result<Self> {
        if x & !y != 0 {
            return Err(Error::NotSubset("contraction set"));
        }
        self.contract_to_mask(y)?.restrict_mask(compress(x, y))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if let Some(l) = other.ground.iter().find(|l| self.ground.contains(l)) {
            return Err(Error::OverlappingLabels(l.clone()));
        }
        let shift = self.ground.len();
        if shift + other.ground.len() > 32 {
            return Err(Error::EnumerationLimit { size: shift + other.ground.len(), limit: 32 });
        }
        let ground = self.ground.iter().chain(&other.ground).cloned().collect();
        let bases = self
            .bases
            .iter()
            .flat_map(|&b| other.bases.iter().map(move |&c| b | c << shift));
        Ok(Self::from_bases_unchecked(ground, bases))
    }

    /// Same matroid with every label prefixed.
    pub fn with_prefix(&self, prefix: &str) -> Self {
        Self {
            ground: self.ground.iter().map(|l| format!("{prefix}{l}")).collect(),
            bases: self.bases.clone(),
        }
    }

    /// Bases re-expressed over the ground order of `reference`
    /// (which must have the same label set).
    fn bases_in_order_of(&self, reference: &[String]) -> Option<Vec<u32>> {
        let perm: Vec<usize> = self
            .ground
            .iter()
            .map(|l| reference.iter().position(|r| r == l))
            .collect::<Option<_>>()?;
        let mut out: Vec<u32> = self
            .bases
            .iter()
            .map(|&b| elements(b).fold(0, |acc, i| acc | 1 << perm[i]))
            .collect();
        out.sort_unstable();
        Some(out)
    }

    /// Isomorphism-invariant key: the lexicographically least sorted basis
    /// list over all orderings of the ground set. Only for small grounds.
    pub fn canonical_key(&self) -> (usize, Vec<u32>) {
        let n = self.ground.len();
        assert!(n <= 9, "canonical key over {n} elements");
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<u32>> = None;
        let mut scratch = Vec::with_capacity(self.bases.len());
        let mut visit = |perm: &[usize]| {
            scratch.clear();
            scratch.extend(
                self.bases
                    .iter()
                    .map(|&b| elements(b).fold(0u32, |acc, i| acc | 1 << perm[i])),
            );
            scratch.sort_unstable();
            if best.as_ref().is_none_or(|b| scratch < *b) {
                best = Some(scratch.clone());
            }
        };
        heap_permutations(&mut perm, &mut visit);
        (n, best.unwrap_or_default())
    }

    /// Every subset of the ground set that is independent.
    pub fn independent_sets(&self) -> Vec<u32> {
        let mut out: BTreeSet<u32> = BTreeSet::new();
        for &b in &self.bases {
            out.extend(submasks(b));
        }
        out.into_iter().collect()
    }
}

fn heap_permutations(perm: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    let n = perm.len();
    let mut c = vec![0usize; n];
    visit(perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground.len() == other.ground.len()
            && other.bases_in_order_of(&self.ground).as_ref() == Some(&self.bases)
    }
}

impl Eq for Matroid {}

/// The gammoid represented by `rep`, with the default enumeration limit.
pub fn gamma(rep: &Representation) -> Result<Matroid> {
    gamma_with_limit(rep, DEFAULT_ENUMERATION_LIMIT)
}

pub fn gamma_with_limit(rep: &Representation, limit: usize) -> Result<Matroid> {
    let ground = rep.ground();
    if ground.len() > limit.min(32) {
        return Err(Error::EnumerationLimit { size: ground.len(), limit });
    }
    let d = rep.digraph();
    let mut net = RoutingNetwork::new(d, rep.targets());
    let r = net.max_size(ground);
    let mut starts = Vec::with_capacity(r);
    let bases = k_subsets(ground.len(), r).filter(|&mask| {
        starts.clear();
        starts.extend(elements(mask).map(|i| ground[i]));
        net.is_linkable(&starts)
    });
    let bases: Vec<u32> = bases.collect();
    let labels = ground.iter().map(|&v| d.label(v).to_string()).collect();
    Ok(Matroid::from_bases_unchecked(labels, bases))
}

#[derive(Serialize, Deserialize)]
struct MatroidJson {
    ground: Vec<String>,
    bases: Vec<Vec<String>>,
}

impl TryFrom<MatroidJson> for Matroid {
    type Error = Error;

    fn try_from(j: MatroidJson) -> Result<Self> {
        let probe = Matroid { ground: j.ground, bases: Vec::new() };
        let bases = j
            .bases
            .iter()
            .enumerate()
            .map(|(i, b)| probe.mask_of(b).map_err(|e| Error::Parse(format!("bases[{i}]: {e}"))))
            .collect::<Result<Vec<u32>>>()?;
        Matroid::from_bases(probe.ground, bases)
    }
}

impl From<Matroid> for MatroidJson {
    fn from(m: Matroid) -> Self {
        let bases = m.bases.iter().map(|&b| m.labels_of(b)).collect();
        MatroidJson { ground: m.ground, bases }
    }
}
