use super::{
    check_distributive, enumerate_upsets, hasse_dot, FinPoset, Lattice, PosetError, UpSet,
    UpSetLattice,
};
use crate::caps::Caps;

/// `Crt^n`: nonempty up-sets of `[n] x [n]`, ordered as in `U([n] x [n])`.
///
/// Grid point `(p, q)` is element `p * (n + 1) + q` of the carrier. The
/// bottom is the whole grid and the top is `{(n, n)}`.
#[derive(Clone, Debug)]
pub struct CrtLattice {
    n: usize,
    lattice: UpSetLattice,
    sigma: Vec<u32>,
    xi: Vec<u32>,
    pi: Vec<(u8, u8)>,
    intervals: Vec<Vec<u32>>,
}

pub fn crt(n: usize, caps: &Caps) -> Result<CrtLattice, PosetError> {
    if n > caps.crt_n {
        return Err(PosetError::Cap { what: "Crt grid size", got: n, cap: caps.crt_n });
    }
    let grid = FinPoset::grid(n);
    let members: Vec<UpSet> = enumerate_upsets(&grid, usize::MAX)?
        .into_iter()
        .filter(|u| !u.is_empty())
        .collect();
    let lattice = UpSetLattice::from_members(grid, members);
    let side = n + 1;
    let at = |u: UpSet| lattice.index_of(u).expect("up-set of the grid") as u32;
    let principal = |p: usize, q: usize| UpSet::principal(lattice.carrier(), p * side + q);

    let mut sigma = vec![0; side * side];
    let mut xi = vec![0; side * side];
    for p in 0..side {
        for q in 0..side {
            sigma[p * side + q] = at(principal(p, q));
            xi[p * side + q] = at(principal(p, 0).union(principal(0, q)));
        }
    }
    let pi = lattice
        .members()
        .iter()
        .map(|u| {
            let p = u.iter().map(|g| g / side).min().unwrap();
            let q = u.iter().map(|g| g % side).min().unwrap();
            (p as u8, q as u8)
        })
        .collect();
    let mut intervals = vec![Vec::new(); side * side];
    for (x, u) in lattice.members().iter().enumerate() {
        for p in 0..side {
            for q in 0..side {
                let lo = lattice.upset(xi[p * side + q] as usize);
                let hi = lattice.upset(sigma[p * side + q] as usize);
                if lo.is_superset(*u) && u.is_superset(hi) {
                    intervals[p * side + q].push(x as u32);
                }
            }
        }
    }
    Ok(CrtLattice { n, lattice, sigma, xi, pi, intervals })
}

impl CrtLattice {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn upsets(&self) -> &UpSetLattice {
        &self.lattice
    }

    pub fn grid(&self) -> &FinPoset {
        self.lattice.carrier()
    }

    pub fn upset(&self, x: usize) -> UpSet {
        self.lattice.upset(x)
    }

    pub fn index_of(&self, u: UpSet) -> Option<usize> {
        self.lattice.index_of(u)
    }

    pub fn point(&self, p: usize, q: usize) -> usize {
        p * (self.n + 1) + q
    }

    /// Principal up-set of `(p, q)`.
    pub fn sigma(&self, p: usize, q: usize) -> usize {
        self.sigma[self.point(p, q)] as usize
    }

    /// `sigma(p, 0) ∧ sigma(0, q)`, the up-set `{(a, b) : a >= p or b >= q}`.
    pub fn xi(&self, p: usize, q: usize) -> usize {
        self.xi[self.point(p, q)] as usize
    }

    /// Coordinatewise minima.
    pub fn pi(&self, x: usize) -> (usize, usize) {
        let (p, q) = self.pi[x];
        (p as usize, q as usize)
    }

    fn check_leq(&self, x: usize, y: usize) -> Result<(), PosetError> {
        if self.leq(x, y) {
            Ok(())
        } else {
            Err(PosetError::Precondition(format!(
                "{} is not below {}",
                self.label(x),
                self.label(y)
            )))
        }
    }

    /// `sigma(pi_1(y), 0) ∨ x`, for `x <= y`.
    pub fn lambda(&self, x: usize, y: usize) -> Result<usize, PosetError> {
        self.check_leq(x, y)?;
        Ok(self.join(self.sigma(self.pi(y).0, 0), x))
    }

    /// `sigma(0, pi_2(y)) ∨ x`, for `x <= y`.
    pub fn mu(&self, x: usize, y: usize) -> Result<usize, PosetError> {
        self.check_leq(x, y)?;
        Ok(self.join(self.sigma(0, self.pi(y).1), x))
    }

    /// The interval `Crt^n_{p,q} = [xi(p, q), sigma(p, q)]`, ascending indices.
    pub fn interval_at(&self, p: usize, q: usize) -> Vec<usize> {
        self.intervals[self.point(p, q)].iter().map(|&x| x as usize).collect()
    }

    /// Bitstring of the up-set over the grid in row-major order.
    pub fn label(&self, x: usize) -> String {
        self.lattice.label(x)
    }

    pub fn is_principal(&self, x: usize) -> bool {
        let (p, q) = self.pi(x);
        self.sigma(p, q) == x
    }

    /// Element of `Crt^n` at the image of `x` under `Crt(d)` for `d: [m] -> [n]`.
    pub fn induced(&self, target: &CrtLattice, d: &[usize]) -> Result<Vec<usize>, PosetError> {
        if d.len() != self.n + 1 {
            return Err(PosetError::MapShape { expected: self.n + 1, got: d.len() });
        }
        if let Some(&bad) = d.iter().find(|&&v| v > target.n) {
            return Err(PosetError::OutOfRange(bad));
        }
        if let Some(w) = d.windows(2).position(|w| w[0] > w[1]) {
            return Err(PosetError::NotMonotone(w, w + 1));
        }
        let side = self.n + 1;
        Ok((0..self.size())
            .map(|x| {
                let image = self.upset(x).iter().fold(UpSet::EMPTY, |acc, g| {
                    acc.union(target.upset(target.sigma(d[g / side], d[g % side])))
                });
                target.index_of(image).expect("image is a nonempty up-set")
            })
            .collect())
    }

    /// `U([n] x [n] - {(n, n)})` and the bijection `x -> x - {(n, n)}` into it.
    pub fn punctured_isomorphism(&self) -> Result<(UpSetLattice, Vec<usize>), PosetError> {
        let side = self.n + 1;
        let top = side * side - 1;
        let punctured = self.grid().full_subposet(&(0..top).collect::<Vec<_>>());
        let members = enumerate_upsets(&punctured, self.size() + 1)?;
        let target = UpSetLattice::from_members(punctured, members);
        let map = (0..self.size())
            .map(|x| target.index_of(self.upset(x).without(top)).expect("punctured up-set"))
            .collect();
        Ok((target, map))
    }

    pub fn check_distributive(&self, caps: &Caps) -> Result<(), PosetError> {
        check_distributive(self, caps)
    }

    /// Hasse diagram in DOT; principal up-sets are drawn as filled points.
    pub fn to_dot(&self) -> String {
        hasse_dot(
            self,
            &format!("Crt{}", self.n),
            |x| self.label(x),
            |x| self.is_principal(x),
        )
    }
}

impl Lattice for CrtLattice {
    fn size(&self) -> usize {
        self.lattice.size()
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        self.lattice.leq(a, b)
    }
    fn meet(&self, a: usize, b: usize) -> usize {
        self.lattice.meet(a, b)
    }
    fn join(&self, a: usize, b: usize) -> usize {
        self.lattice.join(a, b)
    }
    fn bottom(&self) -> usize {
        self.sigma(0, 0)
    }
    fn top(&self) -> usize {
        self.sigma(self.n, self.n)
    }
    fn covers(&self) -> Vec<(usize, usize)> {
        self.lattice.covers()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::birkhoff;

    fn bits(l: &CrtLattice, pts: &[(usize, usize)]) -> usize {
        l.index_of(UpSet::from_iter(pts.iter().map(|&(p, q)| l.point(p, q)))).unwrap()
    }

    #[test]
    fn small_sizes() {
        let caps = Caps::default();
        assert_eq!(crt(0, &caps).unwrap().size(), 1);
        assert_eq!(crt(1, &caps).unwrap().size(), 5);
        assert_eq!(crt(2, &caps).unwrap().size(), 19);
        assert_eq!(crt(3, &caps).unwrap().size(), 69);
        assert!(crt(7, &caps).unwrap_err().is_cap());
    }

    #[test]
    fn named_elements() {
        let l = crt(1, &Caps::default()).unwrap();
        assert_eq!(l.upset(l.sigma(0, 0)), UpSet::full(4));
        assert_eq!(l.bottom(), l.sigma(0, 0));
        assert_eq!(l.xi(1, 1), bits(&l, &[(0, 1), (1, 0), (1, 1)]));
        assert_eq!(l.xi(1, 1), l.meet(l.sigma(1, 0), l.sigma(0, 1)));
        // [xi(1,1), sigma(1,1)]: {01,10,11}, {01,11}, {10,11}, {11}
        assert_eq!(l.interval_at(1, 1).len(), 4);
        assert_eq!(l.interval_at(0, 0), vec![l.sigma(0, 0)]);
        assert_eq!(l.pi(l.xi(1, 1)), (0, 0));
    }

    #[test]
    fn lambda_mu_precondition() {
        let l = crt(2, &Caps::default()).unwrap();
        let (x, y) = (l.xi(2, 2), l.sigma(1, 2));
        let lam = l.lambda(x, y).unwrap();
        let mu = l.mu(x, y).unwrap();
        let direct_lam = l.upset(l.sigma(1, 0)).intersection(l.upset(x));
        let direct_mu = l.upset(l.sigma(0, 2)).intersection(l.upset(x));
        assert_eq!(l.upset(lam), direct_lam);
        assert_eq!(l.upset(mu), direct_mu);
        assert!(l.lambda(y, x).is_err());
    }

    #[test]
    fn birkhoff_of_crt1_is_punctured_square() {
        let caps = Caps::default();
        let l = crt(1, &caps).unwrap();
        let b = birkhoff(&l, &caps).unwrap();
        assert!(b.is_isomorphism);
        assert_eq!(b.poset.len(), 3);
        assert_eq!(b.poset.minimal_elements().len(), 1);
        assert_eq!(b.poset.maximal_elements().len(), 2);
        let (u, map) = l.punctured_isomorphism().unwrap();
        assert_eq!(u.size(), 5);
        let mut seen = map.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 5);
    }

    #[test]
    fn induced_examples() {
        let caps = Caps::default();
        let c0 = crt(0, &caps).unwrap();
        let c1 = crt(1, &caps).unwrap();
        assert_eq!(c1.induced(&c1, &[0, 1]).unwrap(), (0..5).collect::<Vec<_>>());
        assert_eq!(c1.induced(&c0, &[0, 0]).unwrap(), vec![0; 5]);
        assert_eq!(c0.induced(&c1, &[0]).unwrap(), vec![c1.sigma(0, 0)]);
        assert!(c1.induced(&c1, &[1, 0]).is_err());
    }
}
