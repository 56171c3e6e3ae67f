use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{enumerate_upsets, FinPoset, PosetError, UpSet};
use crate::caps::Caps;

/// A finite lattice on `0..size()`.
pub trait Lattice {
    fn size(&self) -> usize;
    fn leq(&self, a: usize, b: usize) -> bool;
    /// Greatest lower bound (the product).
    fn meet(&self, a: usize, b: usize) -> usize;
    /// Least upper bound (the coproduct).
    fn join(&self, a: usize, b: usize) -> usize;

    fn bottom(&self) -> usize {
        (1..self.size()).fold(0, |acc, x| self.meet(acc, x))
    }

    fn top(&self) -> usize {
        (1..self.size()).fold(0, |acc, x| self.join(acc, x))
    }

    /// Hasse edges `(a, b)` with `a` covered by `b`, sorted.
    fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            let ups: Vec<usize> = (0..n).filter(|&b| b != a && self.leq(a, b)).collect();
            for &b in &ups {
                if !ups.iter().any(|&c| c != b && self.leq(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Elements `x` with `lo <= x <= hi`.
    fn interval(&self, lo: usize, hi: usize) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.leq(lo, x) && self.leq(x, hi)).collect()
    }

    fn order_poset(&self, labels: Vec<String>) -> FinPoset {
        FinPoset::from_relation(labels, |a, b| self.leq(a, b)).expect("lattice order")
    }
}

/// A lattice with dense meet and join tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinLattice {
    order: FinPoset,
    meet: Vec<u32>,
    join: Vec<u32>,
}

impl FinLattice {
    /// Computes bounds by scanning; fails if some pair lacks one.
    pub fn from_poset(order: FinPoset) -> Result<FinLattice, PosetError> {
        let n = order.len();
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> =
                    (0..n).filter(|&c| order.leq(c, a) && order.leq(c, b)).collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&c| lower.iter().all(|&d| order.leq(d, c)))
                    .ok_or(PosetError::NotALattice(a, b, "meet"))?;
                let upper: Vec<usize> =
                    (0..n).filter(|&c| order.leq(a, c) && order.leq(b, c)).collect();
                let lub = upper
                    .iter()
                    .copied()
                    .find(|&c| upper.iter().all(|&d| order.leq(c, d)))
                    .ok_or(PosetError::NotALattice(a, b, "join"))?;
                meet[a * n + b] = glb as u32;
                join[a * n + b] = lub as u32;
            }
        }
        Ok(FinLattice { order, meet, join })
    }

    /// Dense snapshot of any lattice.
    pub fn from_lattice(l: &impl Lattice, labels: Vec<String>) -> FinLattice {
        let n = l.size();
        let order = l.order_poset(labels);
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = l.meet(a, b) as u32;
                join[a * n + b] = l.join(a, b) as u32;
            }
        }
        FinLattice { order, meet, join }
    }

    /// Subsets of a `k`-element set under inclusion.
    pub fn boolean(k: usize) -> FinLattice {
        let labels = (0..1usize << k).map(|s| format!("{s:0k$b}")).collect();
        let order = FinPoset::from_relation(labels, |a, b| a & !b == 0).expect("boolean");
        FinLattice::from_poset(order).expect("boolean lattice")
    }

    /// The diamond `M_3`: bottom, three atoms, top.
    pub fn diamond() -> FinLattice {
        let labels = ["0", "a", "b", "c", "1"].iter().map(|s| s.to_string()).collect();
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)];
        FinLattice::from_poset(FinPoset::from_covers(labels, &pairs).unwrap()).unwrap()
    }

    /// The pentagon `N_5`: `0 < a < b < 1` and `0 < c < 1`.
    pub fn pentagon() -> FinLattice {
        let labels = ["0", "a", "b", "c", "1"].iter().map(|s| s.to_string()).collect();
        let pairs = [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)];
        FinLattice::from_poset(FinPoset::from_covers(labels, &pairs).unwrap()).unwrap()
    }

    pub fn order(&self) -> &FinPoset {
        &self.order
    }
}

impl Lattice for FinLattice {
    fn size(&self) -> usize {
        self.order.len()
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        self.order.leq(a, b)
    }
    fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b] as usize
    }
    fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b] as usize
    }
}

/// Checks `p ∧ (q ∨ r) = (p ∧ q) ∨ (p ∧ r)`; returns a violating triple.
///
/// Scans every triple up to `caps.distributive_scan` elements, samples
/// `caps.distributive_samples` triples with a fixed seed above that.
pub fn check_distributive(l: &impl Lattice, caps: &Caps) -> Result<(), PosetError> {
    let n = l.size();
    let violates = |p: usize, q: usize, r: usize| {
        l.meet(p, l.join(q, r)) != l.join(l.meet(p, q), l.meet(p, r))
    };
    if n <= caps.distributive_scan {
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    if violates(p, q, r) {
                        return Err(PosetError::NotDistributive(p, q, r));
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..caps.distributive_samples {
            let (p, q, r) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if violates(p, q, r) {
                return Err(PosetError::NotDistributive(p, q, r));
            }
        }
    }
    Ok(())
}

/// Whether `low -> a -> high`, `low -> b -> high` is both a pullback and a
/// pushout, decided by scanning all elements against the universal properties.
pub fn is_exact_square(l: &impl Lattice, low: usize, a: usize, b: usize, high: usize) -> bool {
    let n = l.size();
    if !(l.leq(low, a) && l.leq(low, b) && l.leq(a, high) && l.leq(b, high)) {
        return false;
    }
    let pullback = (0..n).all(|z| !(l.leq(z, a) && l.leq(z, b)) || l.leq(z, low));
    let pushout = (0..n).all(|z| !(l.leq(a, z) && l.leq(b, z)) || l.leq(high, z));
    pullback && pushout
}

/// Product-irreducibles of a finite distributive lattice and the map to up-sets.
#[derive(Clone, Debug)]
pub struct Birkhoff {
    /// Lattice elements that are product-irreducible, ascending.
    pub irreducibles: Vec<usize>,
    /// Induced order on the irreducibles.
    pub poset: FinPoset,
    /// `eta[x]` = irreducibles above `x`, as indices into `irreducibles`.
    pub eta: Vec<UpSet>,
    /// Whether `eta` is a bijection onto the up-sets of `poset` preserving order both ways.
    pub is_isomorphism: bool,
}

pub fn birkhoff(l: &impl Lattice, caps: &Caps) -> Result<Birkhoff, PosetError> {
    check_distributive(l, caps)?;
    let n = l.size();
    let top = l.top();
    let irreducibles: Vec<usize> = (0..n)
        .filter(|&p| {
            if p == top {
                return false;
            }
            let above = (0..n).filter(|&y| y != p && l.leq(p, y)).fold(top, |m, y| l.meet(m, y));
            above != p
        })
        .collect();
    if irreducibles.len() > 64 {
        return Err(PosetError::Cap { what: "irreducibles", got: irreducibles.len(), cap: 64 });
    }
    let labels = irreducibles.iter().map(|i| i.to_string()).collect();
    let poset =
        FinPoset::from_relation(labels, |a, b| l.leq(irreducibles[a], irreducibles[b]))?;
    let eta: Vec<UpSet> = (0..n)
        .map(|x| {
            UpSet::from_iter(
                irreducibles.iter().enumerate().filter(|&(_, &i)| l.leq(x, i)).map(|(k, _)| k),
            )
        })
        .collect();

    let mut sorted = eta.clone();
    sorted.sort();
    sorted.dedup();
    let injective = sorted.len() == n;
    let all_upsets = eta.iter().all(|q| q.is_upset_of(&poset));
    let target = enumerate_upsets(&poset, n + 1);
    let onto = matches!(&target, Ok(t) if t.len() == n);
    let reflects = (0..n).all(|x| {
        (0..n).all(|y| l.leq(x, y) == eta[x].is_superset(eta[y]))
    });
    Ok(Birkhoff {
        irreducibles,
        poset,
        eta,
        is_isomorphism: injective && all_upsets && onto && reflects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lattices() {
        let b2 = FinLattice::boolean(2);
        assert_eq!(b2.size(), 4);
        assert!(check_distributive(&b2, &Caps::default()).is_ok());
        let m3 = FinLattice::diamond();
        assert!(matches!(
            check_distributive(&m3, &Caps::default()),
            Err(PosetError::NotDistributive(..))
        ));
        assert!(check_distributive(&FinLattice::pentagon(), &Caps::default()).is_err());
    }

    #[test]
    fn non_lattice_rejected() {
        let labels = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        // two minimal and two maximal elements, all comparable across
        let p = FinPoset::from_covers(labels, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert!(matches!(FinLattice::from_poset(p), Err(PosetError::NotALattice(..))));
    }

    #[test]
    fn birkhoff_of_boolean() {
        let b = birkhoff(&FinLattice::boolean(2), &Caps::default()).unwrap();
        assert_eq!(b.poset.len(), 2);
        assert_eq!(b.poset.width(), 2);
        assert!(b.is_isomorphism);
    }

    #[test]
    fn birkhoff_rejects_diamond_with_witness() {
        let m3 = FinLattice::diamond();
        match birkhoff(&m3, &Caps::default()) {
            Err(PosetError::NotDistributive(p, q, r)) => {
                assert_ne!(
                    m3.meet(p, m3.join(q, r)),
                    m3.join(m3.meet(p, q), m3.meet(p, r))
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exact_square_in_boolean() {
        let b = FinLattice::boolean(2);
        // 00 -> 01, 00 -> 10, both -> 11
        assert!(is_exact_square(&b, 0, 1, 2, 3));
        assert!(!is_exact_square(&b, 0, 1, 1, 3));
    }
}
