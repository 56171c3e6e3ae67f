use std::collections::HashMap;

use super::{FinLattice, FinPoset, Lattice, MonotoneMap, PosetError};
use crate::caps::Caps;

/// A subset of a poset with at most 64 elements, as a bitset.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpSet(pub u64);

impl UpSet {
    pub const EMPTY: UpSet = UpSet(0);

    pub fn full(n: usize) -> UpSet {
        if n >= 64 {
            UpSet(u64::MAX)
        } else {
            UpSet((1u64 << n) - 1)
        }
    }

    /// Principal up-set `{q : q >= p}`.
    pub fn principal(p: &FinPoset, x: usize) -> UpSet {
        UpSet::from_iter((0..p.len()).filter(|&y| p.leq(x, y)))
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn union(self, o: UpSet) -> UpSet {
        UpSet(self.0 | o.0)
    }

    pub fn intersection(self, o: UpSet) -> UpSet {
        UpSet(self.0 & o.0)
    }

    pub fn difference(self, o: UpSet) -> UpSet {
        UpSet(self.0 & !o.0)
    }

    pub fn with(self, i: usize) -> UpSet {
        UpSet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> UpSet {
        UpSet(self.0 & !(1 << i))
    }

    pub fn is_superset(self, o: UpSet) -> bool {
        o.0 & !self.0 == 0
    }

    pub fn is_upset_of(self, p: &FinPoset) -> bool {
        self.iter().all(|x| (0..p.len()).all(|y| !p.leq(x, y) || self.contains(y)))
    }

    /// Minimal members of the set under the order of `p`.
    pub fn minimal_in(self, p: &FinPoset) -> Vec<usize> {
        self.iter().filter(|&x| !self.iter().any(|y| p.lt(y, x))).collect()
    }

    /// Characters `'1'`/`'0'` for elements `0..n`.
    pub fn bitstring(self, n: usize) -> String {
        (0..n).map(|i| if self.contains(i) { '1' } else { '0' }).collect()
    }
}

impl FromIterator<usize> for UpSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> UpSet {
        UpSet(iter.into_iter().fold(0u64, |acc, i| acc | 1 << i))
    }
}

/// All up-sets of `p`, sorted by bitset value; fails past `limit` of them.
pub fn enumerate_upsets(p: &FinPoset, limit: usize) -> Result<Vec<UpSet>, PosetError> {
    if p.len() > 64 {
        return Err(PosetError::Cap { what: "poset elements", got: p.len(), cap: 64 });
    }
    // Decide elements top-down so that everything above is settled first.
    let mut order = p.linear_extension();
    order.reverse();
    let above: Vec<UpSet> = (0..p.len())
        .map(|x| UpSet::principal(p, x).without(x))
        .collect();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, UpSet::EMPTY)];
    while let Some((k, cur)) = stack.pop() {
        if k == order.len() {
            if out.len() == limit {
                return Err(PosetError::Cap { what: "up-sets", got: limit + 1, cap: limit });
            }
            out.push(cur);
            continue;
        }
        let x = order[k];
        stack.push((k + 1, cur));
        if cur.is_superset(above[x]) {
            stack.push((k + 1, cur.with(x)));
        }
    }
    out.sort();
    Ok(out)
}

/// `U(P)` ordered by containment: `Q <= Q'` iff `Q ⊇ Q'`, so the join is
/// intersection and the meet is union. Tables are computed on demand.
#[derive(Clone, Debug)]
pub struct UpSetLattice {
    carrier: FinPoset,
    members: Vec<UpSet>,
    index: HashMap<UpSet, u32>,
}

/// All up-sets of `p` (including the empty one).
pub fn upset_lattice(p: &FinPoset, caps: &Caps) -> Result<UpSetLattice, PosetError> {
    if p.len() > caps.upset_elements {
        return Err(PosetError::TooLarge {
            elements: p.len(),
            cap: caps.upset_elements,
            width: p.width(),
        });
    }
    let members = enumerate_upsets(p, usize::MAX)?;
    Ok(UpSetLattice::from_members(p.clone(), members))
}

impl UpSetLattice {
    /// `members` must be sorted and closed under union and intersection.
    pub(crate) fn from_members(carrier: FinPoset, members: Vec<UpSet>) -> UpSetLattice {
        let index = members.iter().enumerate().map(|(i, &u)| (u, i as u32)).collect();
        UpSetLattice { carrier, members, index }
    }

    pub fn carrier(&self) -> &FinPoset {
        &self.carrier
    }

    pub fn members(&self) -> &[UpSet] {
        &self.members
    }

    pub fn upset(&self, i: usize) -> UpSet {
        self.members[i]
    }

    pub fn index_of(&self, u: UpSet) -> Option<usize> {
        self.index.get(&u).map(|&i| i as usize)
    }

    pub fn label(&self, i: usize) -> String {
        self.members[i].bitstring(self.carrier.len())
    }

    pub fn to_fin_lattice(&self) -> FinLattice {
        let labels = (0..self.size()).map(|i| self.label(i)).collect();
        FinLattice::from_lattice(self, labels)
    }
}

impl Lattice for UpSetLattice {
    fn size(&self) -> usize {
        self.members.len()
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        self.members[a].is_superset(self.members[b])
    }

    fn meet(&self, a: usize, b: usize) -> usize {
        self.index[&self.members[a].union(self.members[b])] as usize
    }

    fn join(&self, a: usize, b: usize) -> usize {
        self.index[&self.members[a].intersection(self.members[b])] as usize
    }

    fn bottom(&self) -> usize {
        let all = self.members.iter().fold(UpSet::EMPTY, |acc, &u| acc.union(u));
        self.index[&all] as usize
    }

    fn top(&self) -> usize {
        let common = self.members.iter().fold(UpSet(u64::MAX), |acc, &u| acc.intersection(u));
        self.index[&common] as usize
    }

    /// A cover removes one minimal element.
    fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, &u) in self.members.iter().enumerate() {
            for x in u.minimal_in(&self.carrier) {
                if let Some(b) = self.index_of(u.without(x)) {
                    out.push((a, b));
                }
            }
        }
        out.sort();
        out
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Transport {
    /// `f^{-1}(Q)` for `Q` an up-set of the target.
    Pullback,
    /// Up-set of the target generated by `f(Q)`.
    Pushforward,
}

pub fn upset_transport(f: &MonotoneMap, dir: Transport, q: UpSet) -> Result<UpSet, PosetError> {
    match dir {
        Transport::Pullback => {
            if !q.is_upset_of(f.target) {
                return Err(PosetError::NotUpSet(q.iter().collect()));
            }
            Ok(UpSet::from_iter((0..f.source.len()).filter(|&a| q.contains(f.apply(a)))))
        }
        Transport::Pushforward => {
            if !q.is_upset_of(f.source) {
                return Err(PosetError::NotUpSet(q.iter().collect()));
            }
            Ok(q.iter().fold(UpSet::EMPTY, |acc, a| {
                acc.union(UpSet::principal(f.target, f.apply(a)))
            }))
        }
    }
}

/// One step of an exact decomposition: `before` loses `element`.
///
/// The square `before -> principal -> principal_rest`,
/// `before -> after -> principal_rest` is exact in `U(P)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ExactMove {
    pub element: usize,
    pub before: UpSet,
    pub after: UpSet,
    pub principal: UpSet,
    pub principal_rest: UpSet,
}

impl ExactMove {
    /// Corners `(a ∧ b, a, b, a ∨ b)`.
    pub fn corners(&self) -> [UpSet; 4] {
        [self.before, self.principal, self.after, self.principal_rest]
    }
}

/// Decomposes `Q -> Q'` (that is, `Q ⊇ Q'`) into removals of single elements,
/// always removing the lowest-index minimal element of what is left of `Q - Q'`.
pub fn exact_decompose(p: &FinPoset, q: UpSet, q2: UpSet) -> Result<Vec<ExactMove>, PosetError> {
    for u in [q, q2] {
        if !u.is_upset_of(p) {
            return Err(PosetError::NotUpSet(u.iter().collect()));
        }
    }
    if !q.is_superset(q2) {
        return Err(PosetError::Precondition(format!(
            "{} is not below {} in U(P)",
            q.bitstring(p.len()),
            q2.bitstring(p.len())
        )));
    }
    let mut moves = Vec::new();
    let mut cur = q;
    while cur != q2 {
        let x = cur.difference(q2).minimal_in(p)[0];
        let principal = UpSet::principal(p, x);
        let after = cur.without(x);
        moves.push(ExactMove {
            element: x,
            before: cur,
            after,
            principal,
            principal_rest: principal.without(x),
        });
        cur = after;
    }
    Ok(moves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::is_exact_square;

    #[test]
    fn chain_and_antichain() {
        let l = upset_lattice(&FinPoset::chain(1), &Caps::default()).unwrap();
        assert_eq!(l.size(), 3);
        assert_eq!(l.covers().len(), 2);
        let b = upset_lattice(&FinPoset::antichain(2), &Caps::default()).unwrap();
        assert_eq!(b.size(), 4);
    }

    #[test]
    fn punctured_square_has_five_upsets() {
        let g = FinPoset::grid(1);
        let punctured = g.full_subposet(&[0, 1, 2]);
        let l = upset_lattice(&punctured, &Caps::default()).unwrap();
        assert_eq!(l.size(), 5);
        let full = upset_lattice(&g, &Caps::default()).unwrap();
        assert_eq!(full.size(), 6);
        assert_eq!(full.members().iter().filter(|u| !u.is_empty()).count(), 5);
    }

    #[test]
    fn cap_reports_width() {
        let caps = Caps { upset_elements: 3, ..Caps::default() };
        match upset_lattice(&FinPoset::antichain(4), &caps) {
            Err(PosetError::TooLarge { elements: 4, cap: 3, width: 4 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn transport_examples() {
        let a = FinPoset::chain(1);
        let b = FinPoset::chain(2);
        let f = MonotoneMap::new(&a, &b, vec![0, 2]).unwrap();
        let q = UpSet::from_iter([1]);
        assert_eq!(upset_transport(&f, Transport::Pushforward, q).unwrap(), UpSet::from_iter([2]));
        assert_eq!(
            upset_transport(&f, Transport::Pullback, UpSet::from_iter([1, 2])).unwrap(),
            UpSet::from_iter([1])
        );
        let id = MonotoneMap::identity(&b);
        let q = UpSet::from_iter([1, 2]);
        assert_eq!(upset_transport(&id, Transport::Pushforward, q).unwrap(), q);
        assert!(upset_transport(&id, Transport::Pullback, UpSet::from_iter([0])).is_err());
    }

    #[test]
    fn decompose_examples() {
        let c = FinPoset::chain(1);
        let full = UpSet::full(2);
        assert!(exact_decompose(&c, full, full).unwrap().is_empty());
        let moves = exact_decompose(&c, full, UpSet::from_iter([1])).unwrap();
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].element, 0);
        assert!(exact_decompose(&c, UpSet::from_iter([1]), full).is_err());

        let g = FinPoset::grid(1);
        let l = upset_lattice(&g, &Caps::default()).unwrap();
        let moves = exact_decompose(&g, UpSet::full(4), UpSet::from_iter([3])).unwrap();
        assert_eq!(moves.len(), 3);
        for m in &moves {
            assert!(m.after.is_upset_of(&g));
            let [lo, a, b, hi] = m.corners().map(|u| l.index_of(u).unwrap());
            assert!(is_exact_square(&l, lo, a, b, hi));
        }
        assert_eq!(moves.last().unwrap().after, UpSet::from_iter([3]));
    }
}
