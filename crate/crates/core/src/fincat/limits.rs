use std::sync::OnceLock;

use serde::Serialize;

use super::{CatError, FinCat};

/// A commuting square
///
/// ```text
/// nw --top--> ne
///  |          |
/// left      right
///  v          v
/// sw -bottom> se
/// ```
///
/// Vertical edges are the first direction.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Square {
    pub top: usize,
    pub left: usize,
    pub right: usize,
    pub bottom: usize,
}

impl Square {
    /// Checks endpoints and commutativity.
    pub fn new(
        c: &FinCat,
        top: usize,
        left: usize,
        right: usize,
        bottom: usize,
    ) -> Result<Square, CatError> {
        let sq = Square { top, left, right, bottom };
        let typed = c.src(top) == c.src(left)
            && c.dst(top) == c.src(right)
            && c.dst(left) == c.src(bottom)
            && c.dst(right) == c.dst(bottom);
        if !typed || c.compose(right, top) != c.compose(bottom, left) {
            return Err(CatError::NotCommuting(sq.describe(c)));
        }
        Ok(sq)
    }

    /// The square with every edge the identity of `o`.
    pub fn identity(c: &FinCat, o: usize) -> Square {
        let id = c.identity(o);
        Square { top: id, left: id, right: id, bottom: id }
    }

    pub fn nw(&self, c: &FinCat) -> usize {
        c.src(self.top)
    }
    pub fn ne(&self, c: &FinCat) -> usize {
        c.dst(self.top)
    }
    pub fn sw(&self, c: &FinCat) -> usize {
        c.dst(self.left)
    }
    pub fn se(&self, c: &FinCat) -> usize {
        c.dst(self.right)
    }

    /// Swaps the two directions.
    pub fn transpose(&self) -> Square {
        Square { top: self.left, left: self.top, right: self.bottom, bottom: self.right }
    }

    /// The diagonal `nw -> se`.
    pub fn diagonal(&self, c: &FinCat) -> usize {
        c.compose(self.right, self.top).expect("square commutes")
    }

    pub fn describe(&self, c: &FinCat) -> String {
        format!(
            "top={}, left={}, right={}, bottom={}",
            c.name_of(self.top),
            c.name_of(self.left),
            c.name_of(self.right),
            c.name_of(self.bottom)
        )
    }
}

/// A competing cone and its factorization through the pullback.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeFactorization {
    pub apex: usize,
    pub leg1: usize,
    pub leg2: usize,
    pub via: usize,
}

/// A terminal cone over `f: y -> x <- z: g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackCone {
    pub cospan: (usize, usize),
    pub apex: usize,
    /// `apex -> y`
    pub leg1: usize,
    /// `apex -> z`
    pub leg2: usize,
    /// The unique factorization of every commuting cone.
    pub factorizations: Vec<ConeFactorization>,
}

impl PullbackCone {
    /// The square with this cone as its upper-left corner.
    pub fn square(&self) -> Square {
        Square { top: self.leg1, left: self.leg2, right: self.cospan.0, bottom: self.cospan.1 }
    }

    pub fn factorization(&self, leg1: usize, leg2: usize) -> Option<usize> {
        self.factorizations
            .iter()
            .find(|f| f.leg1 == leg1 && f.leg2 == leg2)
            .map(|f| f.via)
    }
}

impl FinCat {
    /// Commuting cones `(w, a, b)` over `(f, g)` with legs allowed by `keep`.
    fn cones(&self, f: usize, g: usize, keep: &dyn Fn(usize) -> bool) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for w in 0..self.object_count() {
            for &a in self.hom(w, self.src(f)) {
                if !keep(a) {
                    continue;
                }
                let fa = self.compose(f, a);
                for &b in self.hom(w, self.src(g)) {
                    if keep(b) && self.compose(g, b) == fa {
                        out.push((w, a, b));
                    }
                }
            }
        }
        out
    }

    fn factorizations_into(
        &self,
        cone: (usize, usize, usize),
        target: (usize, usize, usize),
        keep: &dyn Fn(usize) -> bool,
    ) -> Vec<usize> {
        self.hom(cone.0, target.0)
            .iter()
            .copied()
            .filter(|&u| {
                keep(u)
                    && self.compose(target.1, u) == Some(cone.1)
                    && self.compose(target.2, u) == Some(cone.2)
            })
            .collect()
    }

    fn terminal_cone(
        &self,
        f: usize,
        g: usize,
        keep: &dyn Fn(usize) -> bool,
    ) -> Result<PullbackCone, CatError> {
        if self.dst(f) != self.dst(g) {
            return Err(CatError::Precondition(format!(
                "({}, {}) is not a cospan",
                self.name_of(f),
                self.name_of(g)
            )));
        }
        let cones = self.cones(f, g, keep);
        // Cones are produced by apex, then first leg, then second leg.
        for &cand in &cones {
            let mut factorizations = Vec::with_capacity(cones.len());
            let terminal = cones.iter().all(|&other| {
                let via = self.factorizations_into(other, cand, keep);
                if via.len() == 1 {
                    factorizations.push(ConeFactorization {
                        apex: other.0,
                        leg1: other.1,
                        leg2: other.2,
                        via: via[0],
                    });
                    true
                } else {
                    false
                }
            });
            if terminal {
                return Ok(PullbackCone {
                    cospan: (f, g),
                    apex: cand.0,
                    leg1: cand.1,
                    leg2: cand.2,
                    factorizations,
                });
            }
        }
        let reason = if cones.is_empty() {
            "no commuting cones".to_string()
        } else {
            format!("{} commuting cones, none terminal", cones.len())
        };
        Err(CatError::NoPullback(self.name_of(f).into(), self.name_of(g).into(), reason))
    }

    /// The chosen pullback of `f: y -> x <- z: g`: smallest apex, then
    /// smallest legs. Cached per cospan.
    pub fn pullback(&self, f: usize, g: usize) -> Result<&PullbackCone, CatError> {
        let m = self.morphism_count();
        let table = self
            .pullbacks
            .get_or_init(|| (0..m * m).map(|_| OnceLock::new()).collect());
        table[f * m + g]
            .get_or_init(|| self.terminal_cone(f, g, &|_| true))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Pullback computed inside the wide subcategory on the morphisms `keep`.
    pub fn pullback_in(
        &self,
        keep: &dyn Fn(usize) -> bool,
        f: usize,
        g: usize,
    ) -> Result<PullbackCone, CatError> {
        self.terminal_cone(f, g, keep)
    }

    /// First cospan without a pullback, scanning `(f, g)` in index order.
    pub fn missing_pullback(&self) -> Option<(usize, usize)> {
        *self.all_pullbacks.get_or_init(|| {
            let m = self.morphism_count();
            (0..m)
                .flat_map(|f| (0..m).map(move |g| (f, g)))
                .filter(|&(f, g)| self.dst(f) == self.dst(g))
                .find(|&(f, g)| self.pullback(f, g).is_err())
        })
    }

    pub fn admits_pullbacks(&self) -> bool {
        self.missing_pullback().is_none()
    }

    /// Whether `(nw, top, left)` is a terminal cone over `(right, bottom)`,
    /// decided by enumerating every cone.
    pub fn is_cartesian_square(&self, sq: &Square) -> Result<bool, CatError> {
        Square::new(self, sq.top, sq.left, sq.right, sq.bottom)?;
        let target = (sq.nw(self), sq.top, sq.left);
        let all = |_: usize| true;
        Ok(self
            .cones(sq.right, sq.bottom, &all)
            .into_iter()
            .all(|cone| self.factorizations_into(cone, target, &all).len() == 1))
    }

    /// The morphism `y -> y ×_x y` induced by `(id, id)`.
    pub fn diagonal_of(&self, f: usize) -> Result<usize, CatError> {
        let pb = self.pullback(f, f)?;
        let id = self.identity(self.src(f));
        Ok(pb.factorization(id, id).expect("identity cone factors"))
    }

    /// All Cartesian squares over `(right, bottom)`: the chosen pullback
    /// composed with every automorphism of its apex.
    pub fn cartesian_squares_over(&self, right: usize, bottom: usize) -> Vec<Square> {
        let Ok(pb) = self.pullback(right, bottom) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for o in 0..self.object_count() {
            for &phi in self.hom(o, pb.apex) {
                if self.is_iso(phi) {
                    out.push(Square {
                        top: self.compose(pb.leg1, phi).unwrap(),
                        left: self.compose(pb.leg2, phi).unwrap(),
                        right,
                        bottom,
                    });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{FinLattice, FinPoset, Lattice};

    fn arrow(c: &FinCat, a: usize, b: usize) -> usize {
        c.hom(a, b)[0]
    }

    #[test]
    fn pullback_in_lattice_is_meet() {
        let l = FinLattice::boolean(2);
        let c = FinCat::from_poset(l.order());
        let (b, cc, d) = (1, 2, 3);
        let pb = c.pullback(arrow(&c, b, d), arrow(&c, cc, d)).unwrap();
        assert_eq!(pb.apex, l.meet(b, cc));
        assert!(std::ptr::eq(pb, c.pullback(arrow(&c, b, d), arrow(&c, cc, d)).unwrap()));
        assert!(c.admits_pullbacks());
    }

    #[test]
    fn pullback_along_identity() {
        let c = FinCat::from_poset(&FinPoset::chain(2));
        let g = arrow(&c, 0, 2);
        let pb = c.pullback(c.identity(2), g).unwrap();
        assert_eq!(pb.apex, 0);
        assert_eq!(pb.leg2, c.identity(0));
    }

    #[test]
    fn cartesian_examples() {
        let c = FinCat::from_poset(&FinPoset::chain(2));
        assert!(c.is_cartesian_square(&Square::identity(&c, 1)).unwrap());
        let f = arrow(&c, 0, 1);
        let sq = Square::new(&c, f, c.identity(0), c.identity(1), f).unwrap();
        assert!(c.is_cartesian_square(&sq).unwrap());
        // 0 -> 1 -> 2 over 2 = 2 is not Cartesian: the pullback of id_2 along 1->2 is 1
        let sq = Square::new(&c, arrow(&c, 0, 2), f, c.identity(2), arrow(&c, 1, 2)).unwrap();
        assert!(!c.is_cartesian_square(&sq).unwrap());
        assert!(Square::new(&c, f, f, f, f).is_err());
    }

    #[test]
    fn diagonal_of_mono_is_iso() {
        let c = FinCat::from_poset(&FinPoset::grid(1));
        for f in 0..c.morphism_count() {
            assert!(c.is_iso(c.diagonal_of(f).unwrap()));
        }
    }
}
