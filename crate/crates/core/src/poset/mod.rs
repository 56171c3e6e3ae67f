//! Finite posets, up-set lattices and the lattices `Crt^n`.

mod crt;
mod dot;
mod lattice;
mod upset;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crt::{crt, CrtLattice};
pub use dot::{hasse_dot, parse_hasse_dot};
pub use lattice::{
    birkhoff, check_distributive, is_exact_square, Birkhoff, FinLattice, Lattice,
};
pub use upset::{
    enumerate_upsets, exact_decompose, upset_lattice, upset_transport, ExactMove, Transport,
    UpSet, UpSetLattice,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("relation has {got} entries, expected {expected}")]
    Shape { expected: usize, got: usize },
    #[error("not reflexive at {0}")]
    NotReflexive(usize),
    #[error("not antisymmetric: {0} <= {1} <= {0}")]
    NotAntisymmetric(usize, usize),
    #[error("not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("element index {0} out of range")]
    OutOfRange(usize),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("map is not monotone: {0} <= {1} but images are not ordered")]
    NotMonotone(usize, usize),
    #[error("map has {got} images for a source of size {expected}")]
    MapShape { expected: usize, got: usize },
    #[error("{0:?} is not an up-set")]
    NotUpSet(Vec<usize>),
    #[error("elements {0} and {1} have no {2}")]
    NotALattice(usize, usize, &'static str),
    #[error("not distributive: p={0}, q={1}, r={2}")]
    NotDistributive(usize, usize, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("size cap exceeded: {elements} elements > cap {cap} (width {width}, up to 2^{width} antichains)")]
    TooLarge { elements: usize, cap: usize, width: usize },
    #[error("size cap exceeded: {what} {got} > cap {cap}")]
    Cap { what: &'static str, got: usize, cap: usize },
}

impl PosetError {
    pub fn is_cap(&self) -> bool {
        matches!(self, PosetError::TooLarge { .. } | PosetError::Cap { .. })
    }
}

/// A finite partial order on `0..len`, stored as a dense relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPoset {
    labels: Vec<String>,
    leq: Vec<bool>,
}

/// Wire format of a poset: element labels and the full list of `a <= b` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    pub leq_pairs: Vec<[usize; 2]>,
}

impl FinPoset {
    /// Validates `leq` (row-major, `leq[a * n + b]` means `a <= b`).
    pub fn new(labels: Vec<String>, leq: Vec<bool>) -> Result<FinPoset, PosetError> {
        let n = labels.len();
        if leq.len() != n * n {
            return Err(PosetError::Shape { expected: n * n, got: leq.len() });
        }
        let p = FinPoset { labels, leq };
        p.validate()?;
        Ok(p)
    }

    pub fn from_relation(
        labels: Vec<String>,
        rel: impl Fn(usize, usize) -> bool,
    ) -> Result<FinPoset, PosetError> {
        let n = labels.len();
        let leq = (0..n * n).map(|k| rel(k / n, k % n)).collect();
        FinPoset::new(labels, leq)
    }

    /// Reflexive-transitive closure of the given pairs.
    pub fn from_covers(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<FinPoset, PosetError> {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(PosetError::OutOfRange(a.max(b)));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        FinPoset::new(labels, leq)
    }

    fn validate(&self) -> Result<(), PosetError> {
        let n = self.len();
        for a in 0..n {
            if !self.leq(a, a) {
                return Err(PosetError::NotReflexive(a));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) && self.leq(b, a) {
                    return Err(PosetError::NotAntisymmetric(a, b));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) && !self.leq(a, c) {
                        return Err(PosetError::NotTransitive(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// The chain `[n] = {0 < 1 < ... < n}`.
    pub fn chain(n: usize) -> FinPoset {
        let labels = (0..=n).map(|i| i.to_string()).collect();
        FinPoset::from_relation(labels, |a, b| a <= b).expect("chain")
    }

    pub fn antichain(k: usize) -> FinPoset {
        let labels = (0..k).map(|i| i.to_string()).collect();
        FinPoset::from_relation(labels, |a, b| a == b).expect("antichain")
    }

    /// Product order; element `(a, b)` has index `a * other.len() + b`.
    pub fn product(&self, other: &FinPoset) -> FinPoset {
        let m = other.len();
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("({a},{b})")))
            .collect();
        FinPoset::from_relation(labels, |x, y| {
            self.leq(x / m, y / m) && other.leq(x % m, y % m)
        })
        .expect("product of posets")
    }

    /// `[n] x [n]`, element `(p, q)` at index `p * (n + 1) + q`.
    pub fn grid(n: usize) -> FinPoset {
        let c = FinPoset::chain(n);
        c.product(&c)
    }

    /// `RCpt^n = {(i, j) : i <= j}` in the product order, listed lexicographically.
    pub fn rcpt(n: usize) -> FinPoset {
        let keep: Vec<usize> = (0..=n)
            .flat_map(|i| (i..=n).map(move |j| i * (n + 1) + j))
            .collect();
        FinPoset::grid(n).full_subposet(&keep)
    }

    pub fn full_subposet(&self, keep: &[usize]) -> FinPoset {
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        FinPoset::from_relation(labels, |a, b| self.leq(keep[a], keep[b])).expect("subposet")
    }

    pub fn opposite(&self) -> FinPoset {
        FinPoset::from_relation(self.labels.clone(), |a, b| self.leq(b, a)).expect("opposite")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Hasse diagram edges `(a, b)` with `a` covered by `b`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| !(0..self.len()).any(|b| self.lt(b, a)))
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| !(0..self.len()).any(|b| self.lt(a, b)))
            .collect()
    }

    /// Number of elements in a longest chain.
    pub fn height(&self) -> usize {
        let order = self.linear_extension();
        let mut best = vec![1usize; self.len()];
        for (k, &b) in order.iter().enumerate() {
            for &a in &order[..k] {
                if self.lt(a, b) {
                    best[b] = best[b].max(best[a] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// Elements sorted so that `a < b` implies `a` comes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        let below = |a: usize| (0..self.len()).filter(|&b| self.lt(b, a)).count();
        order.sort_by_key(|&a| (below(a), a));
        order
    }

    /// Size of a largest antichain, by Dilworth and bipartite matching.
    pub fn width(&self) -> usize {
        let n = self.len();
        let mut match_right: Vec<Option<usize>> = vec![None; n];
        let mut matched = 0;
        for a in 0..n {
            let mut seen = vec![false; n];
            if self.augment(a, &mut seen, &mut match_right) {
                matched += 1;
            }
        }
        n - matched
    }

    fn augment(&self, a: usize, seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
        for b in 0..self.len() {
            if self.lt(a, b) && !seen[b] {
                seen[b] = true;
                let free = match match_right[b] {
                    None => true,
                    Some(a2) => self.augment(a2, seen, match_right),
                };
                if free {
                    match_right[b] = Some(a);
                    return true;
                }
            }
        }
        false
    }

    pub fn to_doc(&self) -> PosetDoc {
        let n = self.len();
        let leq_pairs = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.leq(a, b))
            .map(|(a, b)| [a, b])
            .collect();
        PosetDoc { elements: self.labels.clone(), leq_pairs }
    }

    /// Accepts any generating set of pairs; the closure must be antisymmetric.
    pub fn from_doc(doc: &PosetDoc) -> Result<FinPoset, PosetError> {
        let pairs: Vec<(usize, usize)> = doc.leq_pairs.iter().map(|p| (p[0], p[1])).collect();
        FinPoset::from_covers(doc.elements.clone(), &pairs)
    }

    /// Index lookup from label.
    pub fn label_index(&self) -> HashMap<&str, usize> {
        self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
    }
}

/// A monotone map between finite posets.
#[derive(Clone, Debug)]
pub struct MonotoneMap<'a> {
    pub source: &'a FinPoset,
    pub target: &'a FinPoset,
    images: Vec<usize>,
}

impl<'a> MonotoneMap<'a> {
    pub fn new(
        source: &'a FinPoset,
        target: &'a FinPoset,
        images: Vec<usize>,
    ) -> Result<MonotoneMap<'a>, PosetError> {
        if images.len() != source.len() {
            return Err(PosetError::MapShape { expected: source.len(), got: images.len() });
        }
        if let Some(&bad) = images.iter().find(|&&i| i >= target.len()) {
            return Err(PosetError::OutOfRange(bad));
        }
        for a in 0..source.len() {
            for b in 0..source.len() {
                if source.leq(a, b) && !target.leq(images[a], images[b]) {
                    return Err(PosetError::NotMonotone(a, b));
                }
            }
        }
        Ok(MonotoneMap { source, target, images })
    }

    pub fn identity(p: &'a FinPoset) -> MonotoneMap<'a> {
        MonotoneMap { source: p, target: p, images: (0..p.len()).collect() }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

/// All monotone maps `[m] -> [n]`, as image vectors in lexicographic order.
pub fn monotone_maps(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, lo: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            go(len, v, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m + 1, 0, n, &mut Vec::new(), &mut out);
    out
}
