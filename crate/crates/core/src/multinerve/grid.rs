use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::RngCore;
use serde::Serialize;

use super::kart::square_decomposition;
use super::NerveError;
use crate::caps::Caps;
use crate::fincat::{identity_witness, EdgeClass, FinCat, Square};

const NONE: usize = usize::MAX;

/// A functor `[n_1] × ... × [n_k] -> C`, stored by its unit edges.
///
/// Points are numbered in mixed radix with the first coordinate most
/// significant. `edges[i][x]` is the edge in direction `i` between `x` and
/// `x + e_i`; it runs `F(x) -> F(x + e_i)`, or backwards when direction `i`
/// is twisted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GridFunctor {
    pub shape: Vec<usize>,
    pub twist: Vec<bool>,
    pub objects: Vec<usize>,
    pub edges: Vec<Vec<usize>>,
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * (shape[i + 1] + 1);
    }
    s
}

impl GridFunctor {
    pub fn arity(&self) -> usize {
        self.shape.len()
    }

    pub fn num_points(&self) -> usize {
        self.shape.iter().map(|n| n + 1).product()
    }

    pub fn point(&self, coords: &[usize]) -> usize {
        strides(&self.shape).iter().zip(coords).map(|(s, c)| s * c).sum()
    }

    pub fn coords(&self, mut p: usize) -> Vec<usize> {
        let st = strides(&self.shape);
        st.iter()
            .map(|s| {
                let c = p / s;
                p %= s;
                c
            })
            .collect()
    }

    pub fn object_at(&self, coords: &[usize]) -> usize {
        self.objects[self.point(coords)]
    }

    /// Edge in direction `i` whose lower end is at `coords`.
    pub fn edge(&self, i: usize, coords: &[usize]) -> usize {
        self.edges[i][self.point(coords)]
    }

    /// The unit square at `coords` spanned by directions `i` (vertical) and
    /// `j` (horizontal), with its upper-left corner at the common source.
    pub fn unit_square(&self, i: usize, j: usize, coords: &[usize]) -> Square {
        let mut nw = coords.to_vec();
        if self.twist[i] {
            nw[i] += 1;
        }
        if self.twist[j] {
            nw[j] += 1;
        }
        let lower = |mut c: Vec<usize>, d: usize| {
            if self.twist[d] {
                c[d] -= 1;
            }
            c
        };
        let step = |mut c: Vec<usize>, d: usize| {
            if self.twist[d] {
                c[d] -= 1;
            } else {
                c[d] += 1;
            }
            c
        };
        let ne = step(nw.clone(), j);
        let sw = step(nw.clone(), i);
        Square {
            top: self.edge(j, &lower(nw.clone(), j)),
            left: self.edge(i, &lower(nw, i)),
            right: self.edge(i, &lower(ne, i)),
            bottom: self.edge(j, &lower(sw, j)),
        }
    }

    /// Every unit square as `(i, j, coords, square)` with `i < j`.
    pub fn unit_squares(&self) -> Vec<(usize, usize, Vec<usize>, Square)> {
        let mut out = Vec::new();
        for p in 0..self.num_points() {
            let c = self.coords(p);
            for i in 0..self.arity() {
                for j in i + 1..self.arity() {
                    if c[i] < self.shape[i] && c[j] < self.shape[j] {
                        out.push((i, j, c.clone(), self.unit_square(i, j, &c)));
                    }
                }
            }
        }
        out
    }

    /// Checks endpoints of every edge and commutation of every unit square.
    pub fn validate(&self, c: &FinCat) -> Result<(), NerveError> {
        for p in 0..self.num_points() {
            let co = self.coords(p);
            for i in 0..self.arity() {
                if co[i] == self.shape[i] {
                    continue;
                }
                let e = self.edges[i][p];
                let q = p + strides(&self.shape)[i];
                let (s, d) = if self.twist[i] { (q, p) } else { (p, q) };
                if e >= c.morphism_count() || c.src(e) != self.objects[s] || c.dst(e) != self.objects[d] {
                    return Err(NerveError::NotAFunctor(format!("edge {i} at {co:?}")));
                }
            }
        }
        for (i, j, co, sq) in self.unit_squares() {
            if c.compose(sq.right, sq.top) != c.compose(sq.bottom, sq.left) {
                return Err(NerveError::NotAFunctor(format!("square ({i},{j}) at {co:?} does not commute")));
            }
        }
        Ok(())
    }

    /// Composite of the edges between coordinates `a <= b` of direction `i`,
    /// the other coordinates taken from `at`.
    fn composite(&self, c: &FinCat, i: usize, at: &[usize], a: usize, b: usize) -> usize {
        let mut co = at.to_vec();
        co[i] = a;
        let mut acc = c.identity(self.object_at(&co));
        for t in a..b {
            co[i] = t;
            let e = self.edge(i, &co);
            acc = if self.twist[i] { c.compose(acc, e) } else { c.compose(e, acc) }
                .expect("grid edges compose");
        }
        acc
    }

    /// The composite along a monotone path from `from` to `to`; untwisted
    /// directions only.
    pub fn map_between(&self, c: &FinCat, from: &[usize], to: &[usize]) -> usize {
        let mut cur = from.to_vec();
        let mut acc = c.identity(self.object_at(from));
        for i in 0..self.arity() {
            let e = self.composite(c, i, &cur, from[i], to[i]);
            acc = c.compose(e, acc).expect("path composes");
            cur[i] = to[i];
        }
        acc
    }

    /// Restriction along a monotone `theta: [m] -> [n_dir]`.
    pub fn restrict(&self, c: &FinCat, dir: usize, theta: &[usize]) -> GridFunctor {
        let mut shape = self.shape.clone();
        shape[dir] = theta.len() - 1;
        let mut out = GridFunctor {
            shape: shape.clone(),
            twist: self.twist.clone(),
            objects: Vec::new(),
            edges: vec![Vec::new(); self.arity()],
        };
        let total = out.num_points();
        out.objects = Vec::with_capacity(total);
        for e in out.edges.iter_mut() {
            *e = vec![NONE; total];
        }
        for p in 0..total {
            let co = out.coords(p);
            let mut src = co.clone();
            src[dir] = theta[co[dir]];
            out.objects.push(self.object_at(&src));
            for i in 0..self.arity() {
                if co[i] == shape[i] {
                    continue;
                }
                out.edges[i][p] = if i == dir {
                    self.composite(c, i, &src, theta[co[i]], theta[co[i] + 1])
                } else {
                    self.edge(i, &src)
                };
            }
        }
        out
    }

    /// Face `d_k` in direction `dir`.
    pub fn face(&self, c: &FinCat, dir: usize, k: usize) -> GridFunctor {
        let theta: Vec<usize> = (0..self.shape[dir]).map(|t| if t < k { t } else { t + 1 }).collect();
        self.restrict(c, dir, &theta)
    }

    /// Degeneracy `s_k` in direction `dir`.
    pub fn degeneracy(&self, c: &FinCat, dir: usize, k: usize) -> GridFunctor {
        let theta: Vec<usize> = (0..=self.shape[dir] + 1).map(|t| if t <= k { t } else { t - 1 }).collect();
        self.restrict(c, dir, &theta)
    }

    /// Applies the same monotone map in every direction.
    pub fn restrict_diagonal(&self, c: &FinCat, theta: &[usize]) -> GridFunctor {
        (0..self.arity()).fold(self.clone(), |g, d| g.restrict(c, d, theta))
    }

    pub fn describe(&self, c: &FinCat) -> String {
        let objs: Vec<String> = (0..self.num_points())
            .map(|p| format!("{:?}={}", self.coords(p), c.object_name(self.objects[p])))
            .collect();
        let mut edges = Vec::new();
        for (i, level) in self.edges.iter().enumerate() {
            for (p, &e) in level.iter().enumerate() {
                if e != NONE {
                    edges.push(format!("d{}{:?}={}", i + 1, self.coords(p), c.name_of(e)));
                }
            }
        }
        format!("{} | {}", objs.join(" "), edges.join(" "))
    }
}

/// One edge class per direction.
#[derive(Clone, Debug)]
pub struct Marking {
    pub classes: Vec<EdgeClass>,
}

impl Marking {
    pub fn new(c: &FinCat, classes: Vec<EdgeClass>) -> Result<Marking, NerveError> {
        for e in &classes {
            if let Some(w) = identity_witness(c, e) {
                return Err(NerveError::Marking(format!("{} misses identity {w}", e.name())));
            }
        }
        Ok(Marking { classes })
    }

    pub fn arity(&self) -> usize {
        self.classes.len()
    }
}

/// Allowed squares for one pair of directions.
#[derive(Clone, Debug)]
pub enum Tile {
    /// Pullback squares.
    Cart,
    /// Every commuting square.
    All,
    /// Squares whose comparison map to the pullback lies in the class.
    Decomp(EdgeClass),
    /// An explicit set, oriented with the smaller direction vertical.
    Explicit(HashSet<Square>),
}

/// Tiles per unordered pair of directions; unset pairs are [`Tile::All`].
#[derive(Clone, Debug)]
pub struct Tiling {
    tiles: BTreeMap<(usize, usize), Tile>,
}

impl Tiling {
    pub fn all() -> Tiling {
        Tiling { tiles: BTreeMap::new() }
    }

    /// Pullback squares for every pair among `k` directions.
    pub fn cart(k: usize) -> Tiling {
        let mut t = Tiling::all();
        for i in 0..k {
            for j in i + 1..k {
                t.tiles.insert((i, j), Tile::Cart);
            }
        }
        t
    }

    /// Sets the tile of `{i, j}`; explicit squares given with `i` vertical are
    /// transposed when `i > j`.
    pub fn set(&mut self, i: usize, j: usize, tile: Tile) -> &mut Tiling {
        let tile = match tile {
            Tile::Explicit(s) if i > j => Tile::Explicit(s.iter().map(Square::transpose).collect()),
            t => t,
        };
        self.tiles.insert((i.min(j), i.max(j)), tile);
        self
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Tile> {
        self.tiles.get(&(i.min(j), i.max(j)))
    }
}

fn is_degenerate_square(c: &FinCat, sq: &Square) -> bool {
    (c.is_identity(sq.top) && c.is_identity(sq.bottom) && sq.left == sq.right)
        || (c.is_identity(sq.left) && c.is_identity(sq.right) && sq.top == sq.bottom)
}

/// A restricted multisimplicial nerve: grid functors with direction-`i`
/// edges in `E_i` and unit squares in the tiles, twisted in the directions
/// flagged by `twist`.
///
/// Direction 0 here is the first grid coordinate ("direction 1", vertical).
pub struct RestrictedNerve<'a> {
    pub category: &'a FinCat,
    pub marking: Marking,
    pub tiling: Tiling,
    pub twist: Vec<bool>,
    cache: RefCell<HashMap<(usize, usize, Square), bool>>,
}

impl<'a> RestrictedNerve<'a> {
    pub fn new(
        c: &'a FinCat,
        marking: Marking,
        tiling: Tiling,
        twist: &[usize],
    ) -> Result<RestrictedNerve<'a>, NerveError> {
        let k = marking.arity();
        if let Some(&bad) = twist.iter().find(|&&d| d >= k) {
            return Err(NerveError::Marking(format!("twisted direction {bad} out of range")));
        }
        for (&(i, j), tile) in &tiling.tiles {
            if j >= k {
                return Err(NerveError::Marking(format!("tile ({i}, {j}) out of range")));
            }
            if let Tile::Decomp(e) = tile {
                if e.universe() != c.morphism_count() {
                    return Err(NerveError::Marking(format!("class {} is over another category", e.name())));
                }
            }
        }
        let mut flags = vec![false; k];
        for &d in twist {
            flags[d] = true;
        }
        Ok(RestrictedNerve { category: c, marking, tiling, twist: flags, cache: RefCell::new(HashMap::new()) })
    }

    /// Marking `(E_1, ..., E_k)` with every pair tiled by pullback squares.
    pub fn cartesian(c: &'a FinCat, classes: Vec<EdgeClass>, twist: &[usize]) -> Result<RestrictedNerve<'a>, NerveError> {
        let k = classes.len();
        RestrictedNerve::new(c, Marking::new(c, classes)?, Tiling::cart(k), twist)
    }

    pub fn arity(&self) -> usize {
        self.marking.arity()
    }

    fn square_allowed(&self, i: usize, j: usize, sq: &Square) -> bool {
        let c = self.category;
        if c.compose(sq.right, sq.top) != c.compose(sq.bottom, sq.left) {
            return false;
        }
        let Some(tile) = self.tiling.get(i, j) else { return true };
        if matches!(tile, Tile::All) || is_degenerate_square(c, sq) {
            return true;
        }
        if let Some(&hit) = self.cache.borrow().get(&(i, j, *sq)) {
            return hit;
        }
        let ok = match tile {
            Tile::All => true,
            Tile::Cart => c.is_cartesian_square(sq).unwrap_or(false),
            Tile::Decomp(e) => square_decomposition(c, sq, e).map(|d| d.in_class).unwrap_or(false),
            Tile::Explicit(set) => set.contains(sq),
        };
        self.cache.borrow_mut().insert((i, j, *sq), ok);
        ok
    }

    /// Whether `g` is a simplex of this nerve.
    pub fn contains(&self, g: &GridFunctor) -> bool {
        if g.twist != self.twist || g.validate(self.category).is_err() {
            return false;
        }
        for (i, level) in g.edges.iter().enumerate() {
            if level.iter().any(|&e| e != NONE && !self.marking.classes[i].contains(e)) {
                return false;
            }
        }
        g.unit_squares().iter().all(|(i, j, _, sq)| self.square_allowed(*i, *j, sq))
    }

    fn check_shape(&self, shape: &[usize], caps: &Caps) -> Result<(), NerveError> {
        if shape.len() != self.arity() {
            return Err(NerveError::Shape(format!("shape {shape:?} for {} directions", self.arity())));
        }
        if shape.len() > caps.grid_directions {
            return Err(NerveError::Cap { what: "grid directions", got: shape.len(), cap: caps.grid_directions });
        }
        if let Some(&n) = shape.iter().find(|&&n| n > caps.grid_length) {
            return Err(NerveError::Cap { what: "grid length", got: n, cap: caps.grid_length });
        }
        Ok(())
    }

    /// All simplices of the given shape, in a canonical order.
    pub fn simplices(&self, shape: &[usize], caps: &Caps) -> Result<Vec<GridFunctor>, NerveError> {
        self.check_shape(shape, caps)?;
        let mut out = Vec::new();
        let mut overflow = false;
        self.search(shape, None, &mut |g| {
            if out.len() >= caps.grid_functors {
                overflow = true;
                return false;
            }
            out.push(g.clone());
            true
        });
        if overflow {
            return Err(NerveError::Cap { what: "grid functors", got: out.len() + 1, cap: caps.grid_functors });
        }
        out.sort();
        Ok(out)
    }

    /// Number of simplices of the given shape.
    pub fn count(&self, shape: &[usize], caps: &Caps) -> Result<usize, NerveError> {
        self.check_shape(shape, caps)?;
        let mut n = 0usize;
        self.search(shape, None, &mut |_| {
            n += 1;
            n <= caps.grid_functors
        });
        if n > caps.grid_functors {
            return Err(NerveError::Cap { what: "grid functors", got: n, cap: caps.grid_functors });
        }
        Ok(n)
    }

    /// The first simplex met by a search with shuffled candidates.
    pub fn random(&self, shape: &[usize], rng: &mut dyn RngCore, caps: &Caps) -> Result<Option<GridFunctor>, NerveError> {
        self.check_shape(shape, caps)?;
        let mut found = None;
        self.search(shape, Some(rng), &mut |g| {
            found = Some(g.clone());
            false
        });
        Ok(found)
    }

    /// Simplices of the diagonal: shape `(n, ..., n)`.
    pub fn diagonal_simplices(&self, n: usize, caps: &Caps) -> Result<Vec<GridFunctor>, NerveError> {
        self.simplices(&vec![n; self.arity()], caps)
    }

    /// Shape `n` in slot `j`, `0` elsewhere.
    pub fn epsilon_restrict(&self, j: usize, n: usize, caps: &Caps) -> Result<Vec<GridFunctor>, NerveError> {
        let mut shape = vec![0; self.arity()];
        if j >= shape.len() {
            return Err(NerveError::Shape(format!("direction {j} out of range")));
        }
        shape[j] = n;
        self.simplices(&shape, caps)
    }

    fn search<'s>(&'s self, shape: &[usize], rng: Option<&'s mut dyn RngCore>, visit: &'s mut dyn FnMut(&GridFunctor) -> bool) {
        let c = self.category;
        let k = shape.len();
        let mut g = GridFunctor { shape: shape.to_vec(), twist: self.twist.clone(), objects: Vec::new(), edges: Vec::new() };
        let total = g.num_points();
        g.objects = vec![NONE; total];
        g.edges = vec![vec![NONE; total]; k];
        // Candidate edges per direction, keyed by the endpoint already placed.
        let by_end: Vec<Vec<Vec<usize>>> = (0..k)
            .map(|i| {
                let mut v = vec![Vec::new(); c.object_count()];
                for x in self.marking.classes[i].members() {
                    let end = if self.twist[i] { c.dst(x) } else { c.src(x) };
                    v[end].push(x);
                }
                v
            })
            .collect();
        let mut s = Search { nerve: self, strides: strides(shape), by_end, rng, visit, total };
        s.point(&mut g, 0);
    }
}

struct Search<'s, 'a> {
    nerve: &'s RestrictedNerve<'a>,
    strides: Vec<usize>,
    by_end: Vec<Vec<Vec<usize>>>,
    rng: Option<&'s mut dyn RngCore>,
    visit: &'s mut dyn FnMut(&GridFunctor) -> bool,
    total: usize,
}

impl Search<'_, '_> {
    fn shuffled(&mut self, mut v: Vec<usize>) -> Vec<usize> {
        if let Some(r) = self.rng.as_mut() {
            v.shuffle(r);
        }
        v
    }

    /// Returns `false` once the visitor asks to stop.
    fn point(&mut self, g: &mut GridFunctor, p: usize) -> bool {
        if p == self.total {
            return (self.visit)(g);
        }
        let co = g.coords(p);
        let back: Vec<usize> = (0..co.len()).filter(|&i| co[i] > 0).collect();
        let c = self.nerve.category;
        if back.is_empty() {
            let objs = self.shuffled((0..c.object_count()).collect());
            for o in objs {
                g.objects[p] = o;
                if !self.point(g, p + 1) {
                    return false;
                }
            }
            return true;
        }
        let i0 = back[0];
        let prev = p - self.strides[i0];
        let cands = self.shuffled(self.by_end[i0][g.objects[prev]].clone());
        for e in cands {
            g.objects[p] = if g.twist[i0] { c.src(e) } else { c.dst(e) };
            g.edges[i0][prev] = e;
            if !self.rest(g, p, &co, &back, 1) {
                return false;
            }
        }
        true
    }

    fn rest(&mut self, g: &mut GridFunctor, p: usize, co: &[usize], back: &[usize], idx: usize) -> bool {
        let c = self.nerve.category;
        if idx == back.len() {
            for (a, &i) in back.iter().enumerate() {
                for &j in &back[a + 1..] {
                    let mut base = co.to_vec();
                    base[i] -= 1;
                    base[j] -= 1;
                    let sq = g.unit_square(i, j, &base);
                    if !self.nerve.square_allowed(i, j, &sq) {
                        return true;
                    }
                }
            }
            return self.point(g, p + 1);
        }
        let i = back[idx];
        let prev = p - self.strides[i];
        let (s, d) = if g.twist[i] { (g.objects[p], g.objects[prev]) } else { (g.objects[prev], g.objects[p]) };
        let cands: Vec<usize> = c.hom(s, d).iter().copied().filter(|&e| self.nerve.marking.classes[i].contains(e)).collect();
        let cands = self.shuffled(cands);
        for e in cands {
            g.edges[i][prev] = e;
            if !self.rest(g, p, co, back, idx + 1) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toys;
    use rand::SeedableRng;

    /// Commuting squares counted directly from the composition table.
    fn commuting_squares(c: &FinCat) -> usize {
        let m = c.morphism_count();
        let mut n = 0;
        for top in 0..m {
            for left in 0..m {
                if c.src(top) != c.src(left) {
                    continue;
                }
                for right in 0..m {
                    for bottom in 0..m {
                        if c.src(right) == c.dst(top)
                            && c.src(bottom) == c.dst(left)
                            && c.dst(right) == c.dst(bottom)
                            && c.compose(right, top) == c.compose(bottom, left)
                        {
                            n += 1;
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn all_tiles_give_all_commuting_squares() {
        let caps = Caps::default();
        for name in ["toy2", "kernel_pair", "square5"] {
            let c = toys::load(name).unwrap();
            let all = EdgeClass::all(&c);
            let nerve = RestrictedNerve::new(&c, Marking::new(&c, vec![all.clone(), all]).unwrap(), Tiling::all(), &[]).unwrap();
            assert_eq!(nerve.count(&[1, 1], &caps).unwrap(), commuting_squares(&c), "{name}");
            assert_eq!(nerve.count(&[0, 0], &caps).unwrap(), c.object_count());
        }
    }

    #[test]
    fn epsilon_unwinds_to_edges() {
        let caps = Caps::default();
        let c = toys::load("toy2").unwrap();
        let e1 = EdgeClass::named(&c, "E1").unwrap();
        let e2 = EdgeClass::named(&c, "E2").unwrap();
        let nerve = RestrictedNerve::cartesian(&c, vec![e1.clone(), e2.clone()], &[]).unwrap();
        let edges = nerve.epsilon_restrict(0, 1, &caps).unwrap();
        let mut got: Vec<usize> = edges.iter().map(|g| g.edges[0][0]).collect();
        got.sort();
        assert_eq!(got, e1.members());
        // composable pairs in E2 through a 3-direction nerve
        let n3 = RestrictedNerve::cartesian(&c, vec![e1.clone(), e2.clone(), e2.clone()], &[]).unwrap();
        let pairs = n3.epsilon_restrict(1, 2, &caps).unwrap();
        let expect = e2.members().iter().flat_map(|&f| e2.members().into_iter().map(move |g| (f, g)))
            .filter(|&(f, g)| c.dst(f) == c.src(g))
            .count();
        assert_eq!(pairs.len(), expect);
    }

    #[test]
    fn twist_relabels_the_same_squares() {
        // A (1,1)-simplex with one twisted direction is a commuting square of
        // C read from its common-source corner, so the C-squares agree.
        let caps = Caps::default();
        let c = toys::load("toy2").unwrap();
        let classes = vec![EdgeClass::named(&c, "E1").unwrap(), EdgeClass::named(&c, "E2").unwrap()];
        let squares = |twist: &[usize]| -> Vec<Square> {
            let nerve = RestrictedNerve::cartesian(&c, classes.clone(), twist).unwrap();
            let mut v: Vec<Square> = nerve
                .simplices(&[1, 1], &caps)
                .unwrap()
                .iter()
                .map(|g| g.unit_square(0, 1, &[0, 0]))
                .collect();
            v.sort();
            v
        };
        let plain = squares(&[]);
        assert!(!plain.is_empty());
        assert_eq!(squares(&[1]), plain);
        assert_eq!(squares(&[0]), plain);
        assert_eq!(squares(&[0, 1]), plain);
    }

    #[test]
    fn faces_stay_in_the_nerve() {
        let caps = Caps::default();
        let c = toys::load("toy2").unwrap();
        let nerve = RestrictedNerve::cartesian(
            &c,
            vec![EdgeClass::named(&c, "E1").unwrap(), EdgeClass::named(&c, "E2").unwrap()],
            &[],
        )
        .unwrap();
        for g in nerve.simplices(&[2, 2], &caps).unwrap() {
            for dir in 0..2 {
                for k in 0..=2 {
                    assert!(nerve.contains(&g.face(&c, dir, k)));
                    assert!(nerve.contains(&g.degeneracy(&c, dir, k)));
                }
            }
            assert_eq!(g.face(&c, 0, 1).degeneracy(&c, 0, 0).shape, vec![2, 2]);
        }
    }

    #[test]
    fn simplicial_identities_on_grids() {
        let caps = Caps::default();
        let c = toys::load("cube_z2").unwrap();
        let all = EdgeClass::all(&c);
        let nerve = RestrictedNerve::new(&c, Marking::new(&c, vec![all.clone(), all]).unwrap(), Tiling::all(), &[0]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let g = nerve.random(&[3, 2], &mut rng, &caps).unwrap().unwrap();
            g.validate(&c).unwrap();
            // d_i d_j = d_{j-1} d_i for i < j
            for j in 1..=3 {
                for i in 0..j {
                    assert_eq!(g.face(&c, 0, j).face(&c, 0, i), g.face(&c, 0, i).face(&c, 0, j - 1));
                }
            }
            // d_j s_j = id
            for j in 0..=2 {
                assert_eq!(g.degeneracy(&c, 1, j).face(&c, 1, j), g);
            }
        }
    }

    #[test]
    fn caps_enforced() {
        let c = toys::load("toy1").unwrap();
        let all = EdgeClass::all(&c);
        let nerve = RestrictedNerve::cartesian(&c, vec![all.clone(), all], &[]).unwrap();
        assert!(nerve.simplices(&[4, 0], &Caps::default()).unwrap_err().is_cap());
        let tight = Caps { grid_functors: 2, ..Caps::default() };
        assert!(nerve.simplices(&[1, 0], &tight).unwrap_err().is_cap());
    }
}
