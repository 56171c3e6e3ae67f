use std::collections::HashMap;

use serde::Serialize;

use super::grid::GridFunctor;
use super::NerveError;
use crate::caps::Caps;
use crate::fincat::{EdgeClass, FinCat, Square};
use crate::poset::{crt, CrtLattice, Lattice, UpSet};

/// A square split as a comparison map followed by a pullback square.
#[derive(Clone, Debug, Serialize)]
pub struct SquareDecomposition {
    /// The chosen pullback of `(right, bottom)`.
    pub pullback: Square,
    /// `nw -> apex` of the pullback.
    pub comparison: usize,
    pub comparison_is_iso: bool,
    pub in_class: bool,
}

pub fn square_decomposition(c: &FinCat, sq: &Square, e: &EdgeClass) -> Result<SquareDecomposition, NerveError> {
    let sq = Square::new(c, sq.top, sq.left, sq.right, sq.bottom)?;
    let pb = c.pullback(sq.right, sq.bottom)?;
    let comparison = pb.factorization(sq.top, sq.left).expect("a commuting cone factors through the pullback");
    Ok(SquareDecomposition {
        pullback: pb.square(),
        comparison,
        comparison_is_iso: c.is_iso(comparison),
        in_class: e.contains(comparison),
    })
}

/// A functor `Crt^n -> C` extending a grid `[n] × [n] -> C` by pullbacks.
#[derive(Clone, Debug)]
pub struct KartDiagram {
    pub lattice: CrtLattice,
    pub objects: Vec<usize>,
    /// `maps[(x, y)]` for every `x <= y`.
    pub maps: HashMap<(usize, usize), usize>,
}

impl KartDiagram {
    pub fn n(&self) -> usize {
        self.lattice.n()
    }

    pub fn map(&self, x: usize, y: usize) -> Option<usize> {
        self.maps.get(&(x, y)).copied()
    }

    /// First disagreement with `sigma` along `ς`, if any.
    pub fn restriction_mismatch(&self, c: &FinCat, sigma: &GridFunctor) -> Option<String> {
        let n = self.n();
        for p in 0..=n {
            for q in 0..=n {
                let x = self.lattice.sigma(p, q);
                if self.objects[x] != sigma.object_at(&[p, q]) {
                    return Some(format!("object at ({p},{q})"));
                }
                for p2 in p..=n {
                    for q2 in q..=n {
                        let y = self.lattice.sigma(p2, q2);
                        if self.map(x, y) != Some(sigma.map_between(c, &[p, q], &[p2, q2])) {
                            return Some(format!("map ({p},{q}) -> ({p2},{q2})"));
                        }
                    }
                }
            }
        }
        None
    }

    /// Image of the square `x ∧ y, x, y, x ∨ y`.
    pub fn square(&self, x: usize, y: usize) -> Square {
        let low = self.lattice.meet(x, y);
        let high = self.lattice.join(x, y);
        Square {
            top: self.maps[&(low, x)],
            left: self.maps[&(low, y)],
            right: self.maps[&(x, high)],
            bottom: self.maps[&(y, high)],
        }
    }

    /// Exact squares of `Crt^n` whose image is not a pullback.
    pub fn non_cartesian_squares(&self, c: &FinCat) -> Vec<(usize, usize)> {
        let size = self.lattice.size();
        let mut out = Vec::new();
        for x in 0..size {
            for y in x + 1..size {
                let sq = self.square(x, y);
                if !c.is_cartesian_square(&sq).unwrap_or(false) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

struct Builder<'a> {
    c: &'a FinCat,
    l: &'a CrtLattice,
    sigma: &'a GridFunctor,
    objects: Vec<usize>,
    /// Legs of the pullback at non-principal `x`: to `ς(m)` and to `x - {m}`.
    legs: Vec<Option<(usize, usize, usize)>>,
    maps: HashMap<(usize, usize), usize>,
}

impl Builder<'_> {
    fn min_elem(&self, x: usize) -> usize {
        self.l.upset(x).minimal_in(self.l.grid())[0]
    }

    fn coords(&self, m: usize) -> (usize, usize) {
        let n = self.l.n();
        (m / (n + 1), m % (n + 1))
    }

    fn idx(&self, u: UpSet) -> usize {
        self.l.index_of(u).expect("nonempty up-set")
    }

    fn map(&mut self, x: usize, y: usize) -> Result<usize, NerveError> {
        if let Some(&f) = self.maps.get(&(x, y)) {
            return Ok(f);
        }
        let c = self.c;
        let (ux, uy) = (self.l.upset(x), self.l.upset(y));
        debug_assert!(ux.is_superset(uy));
        let f = if x == y {
            c.identity(self.objects[x])
        } else if self.l.is_principal(y) {
            let my = self.min_elem(y);
            if self.l.is_principal(x) {
                let (p, q) = self.coords(self.min_elem(x));
                let (p2, q2) = self.coords(my);
                self.sigma.map_between(c, &[p, q], &[p2, q2])
            } else {
                let (m, to_a, to_b) = self.legs[x].expect("legs of a non-principal element");
                let a = self.idx(UpSet::principal(self.l.grid(), m));
                if UpSet::principal(self.l.grid(), m).contains(my) {
                    let rest = self.map(a, y)?;
                    c.compose(rest, to_a).expect("composable")
                } else {
                    let b = self.idx(ux.without(m));
                    let rest = self.map(b, y)?;
                    c.compose(rest, to_b).expect("composable")
                }
            }
        } else {
            let (m, _, _) = self.legs[y].expect("legs of a non-principal element");
            let a = self.idx(UpSet::principal(self.l.grid(), m));
            let b = self.idx(uy.without(m));
            let fa = self.map(x, a)?;
            let fb = self.map(x, b)?;
            let (ca, cb) = self.cospan(y)?;
            let pb = c.pullback(ca, cb)?;
            pb.factorization(fa, fb).ok_or_else(|| NerveError::MissingLimit(self.l.label(y)))?
        };
        self.maps.insert((x, y), f);
        Ok(f)
    }

    /// The cospan whose pullback defines a non-principal `x`.
    fn cospan(&mut self, x: usize) -> Result<(usize, usize), NerveError> {
        let m = self.min_elem(x);
        let p = UpSet::principal(self.l.grid(), m);
        let a = self.idx(p);
        let h = self.idx(p.without(m));
        let b = self.idx(self.l.upset(x).without(m));
        Ok((self.map(a, h)?, self.map(b, h)?))
    }
}

/// Extends `sigma: [n] × [n] -> C` to `Crt^n`.
///
/// Elements are processed by size. A non-principal `x` with lowest-index
/// minimal element `m` gets `F(ς(m)) ×_{F(ς(m) - m)} F(x - m)`.
pub fn cartesianize(c: &FinCat, sigma: &GridFunctor, caps: &Caps) -> Result<KartDiagram, NerveError> {
    if sigma.arity() != 2 || sigma.shape[0] != sigma.shape[1] || sigma.twist.iter().any(|&t| t) {
        return Err(NerveError::Shape(format!("expected an untwisted (n, n) grid, got {:?}", sigma.shape)));
    }
    sigma.validate(c)?;
    let n = sigma.shape[0];
    let l = crt(n, caps)?;
    let size = l.size();
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by_key(|&x| (l.upset(x).len(), x));
    let mut b = Builder { c, l: &l, sigma, objects: vec![usize::MAX; size], legs: vec![None; size], maps: HashMap::new() };
    for &x in &order {
        if l.is_principal(x) {
            let (p, q) = b.coords(b.min_elem(x));
            b.objects[x] = sigma.object_at(&[p, q]);
        } else {
            let m = b.min_elem(x);
            let (ca, cb) = b.cospan(x)?;
            let pb = c.pullback(ca, cb).map_err(|_| NerveError::MissingLimit(l.label(x)))?;
            b.objects[x] = pb.apex;
            b.legs[x] = Some((m, pb.leg1, pb.leg2));
        }
    }
    for x in 0..size {
        for y in 0..size {
            if l.leq(x, y) {
                b.map(x, y)?;
            }
        }
    }
    let Builder { objects, maps, .. } = b;
    Ok(KartDiagram { lattice: l, objects, maps })
}

/// The grid `α(τ)` of a chain `τ` in `Crt^n`, with the interval check.
#[derive(Clone, Debug, Serialize)]
pub struct Sections {
    /// `grid[a][b]`.
    pub grid: Vec<Vec<usize>>,
    /// Some `(p, q)` with `τ` inside `Crt^n_{p,q}`.
    pub interval: Option<(usize, usize)>,
    /// `λ(x, y) ∧ μ(x, y) = x` for all `x <= y` in `τ`; checked when `interval` is set.
    pub meet_identity: Option<bool>,
}

pub fn alpha_beta_sections(l: &CrtLattice, tau: &[usize]) -> Result<Sections, NerveError> {
    if tau.is_empty() {
        return Err(NerveError::Shape("empty chain".into()));
    }
    for w in tau.windows(2) {
        if !l.leq(w[0], w[1]) {
            return Err(NerveError::NotMonotone(format!("{} then {}", l.label(w[0]), l.label(w[1]))));
        }
    }
    let m = tau.len() - 1;
    let mut grid = vec![vec![0; m + 1]; m + 1];
    for a in 0..=m {
        for b in 0..=m {
            grid[a][b] = if a >= b { l.lambda(tau[b], tau[a])? } else { l.mu(tau[a], tau[b])? };
        }
    }
    let n = l.n();
    let interval = (0..=n)
        .flat_map(|p| (0..=n).map(move |q| (p, q)))
        .find(|&(p, q)| {
            let inside = l.interval_at(p, q);
            tau.iter().all(|x| inside.contains(x))
        });
    let meet_identity = match interval {
        None => None,
        Some(_) => {
            let mut ok = true;
            for i in 0..=m {
                for j in i..=m {
                    let (x, y) = (tau[i], tau[j]);
                    ok &= l.meet(l.lambda(x, y)?, l.mu(x, y)?) == x;
                }
            }
            Some(ok)
        }
    };
    Ok(Sections { grid, interval, meet_identity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multinerve::grid::{Marking, RestrictedNerve, Tiling};
    use crate::toys;

    #[test]
    fn decomposition_of_a_non_cartesian_square() {
        let c = toys::load("square5").unwrap();
        let e = EdgeClass::named(&c, "E").unwrap();
        let m = |n: &str| c.lookup(n).unwrap();
        let sq = Square::new(&c, m("w->y"), m("w->z"), m("y->x"), m("z->x")).unwrap();
        let d = square_decomposition(&c, &sq, &e).unwrap();
        assert_eq!(c.name_of(d.comparison), "w->m");
        assert!(d.in_class && !d.comparison_is_iso);
        let cart = Square::new(&c, m("m->y"), m("m->z"), m("y->x"), m("z->x")).unwrap();
        let d = square_decomposition(&c, &cart, &e).unwrap();
        assert!(d.comparison_is_iso);
        let degenerate = Square::new(&c, m("id_y"), m("y->x"), m("y->x"), m("id_x")).unwrap();
        assert!(square_decomposition(&c, &degenerate, &e).unwrap().comparison_is_iso);
    }

    #[test]
    fn kart_of_a_square_is_the_pullback() {
        let c = toys::load("square5").unwrap();
        let all = EdgeClass::all(&c);
        let nerve = RestrictedNerve::new(&c, Marking::new(&c, vec![all.clone(), all]).unwrap(), Tiling::all(), &[]).unwrap();
        let caps = Caps::default();
        let m = |n: &str| c.lookup(n).unwrap();
        let sigma = nerve
            .simplices(&[1, 1], &caps)
            .unwrap()
            .into_iter()
            .find(|g| g.edge(1, &[0, 0]) == m("w->y") && g.edge(0, &[0, 0]) == m("w->z") && g.edge(0, &[0, 1]) == m("y->x"))
            .unwrap();
        let k = cartesianize(&c, &sigma, &caps).unwrap();
        // ξ(1,1) = {(0,1),(1,0),(1,1)}, the pullback y ×_x z = m
        let xi = k.lattice.xi(1, 1);
        assert_eq!(c.object_name(k.objects[xi]), "m");
        assert!(k.restriction_mismatch(&c, &sigma).is_none());
        assert!(k.non_cartesian_squares(&c).is_empty());
    }

    #[test]
    fn kart_at_n0_is_sigma() {
        let c = toys::load("toy2").unwrap();
        let all = EdgeClass::all(&c);
        let nerve = RestrictedNerve::new(&c, Marking::new(&c, vec![all.clone(), all]).unwrap(), Tiling::all(), &[]).unwrap();
        for g in nerve.simplices(&[0, 0], &Caps::default()).unwrap() {
            let k = cartesianize(&c, &g, &Caps::default()).unwrap();
            assert_eq!(k.objects, g.objects);
        }
    }

    #[test]
    fn sections_on_an_interval() {
        let l = crt(2, &Caps::default()).unwrap();
        let inside = l.interval_at(1, 2);
        let (x, y) = inside
            .iter()
            .flat_map(|&x| inside.iter().map(move |&y| (x, y)))
            .find(|&(x, y)| x != y && l.leq(x, y))
            .unwrap();
        let s = alpha_beta_sections(&l, &[x, y]).unwrap();
        assert_eq!(s.grid[0][0], x);
        assert_eq!(s.grid[1][1], y);
        assert_eq!(s.meet_identity, Some(true));
        // constant chain gives a constant grid
        let s = alpha_beta_sections(&l, &[x, x, x]).unwrap();
        assert!(s.grid.iter().flatten().all(|&v| v == x));
        assert!(alpha_beta_sections(&l, &[y, x]).is_err());
    }
}
