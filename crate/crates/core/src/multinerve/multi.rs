use crate::poset::monotone_maps;
use crate::simplicial::{Simplex, TruncSSet};

/// A `k`-fold simplicial set given by its cells at each multi-index.
pub trait MultiSimplicial {
    type Cell: Clone + PartialEq + std::fmt::Debug;

    fn arity(&self) -> usize;

    /// Every cell of the given shape, degenerate ones included.
    fn cells(&self, shape: &[usize]) -> Vec<Self::Cell>;

    /// Restriction along a monotone `theta` in direction `dir`.
    fn restrict(&self, cell: &Self::Cell, dir: usize, theta: &[usize]) -> Self::Cell;

    /// Degenerate in at least one direction.
    fn is_degenerate(&self, cell: &Self::Cell) -> bool;

    fn count(&self, shape: &[usize]) -> usize {
        self.cells(shape).len()
    }

    fn nondegenerate_count(&self, shape: &[usize]) -> usize {
        self.cells(shape).iter().filter(|c| !self.is_degenerate(c)).count()
    }
}

/// `Δ^{n_1, ..., n_k}`: a cell of shape `m` is a tuple of monotone maps `[m_i] -> [n_i]`.
#[derive(Clone, Debug)]
pub struct Representable {
    pub dims: Vec<usize>,
}

impl MultiSimplicial for Representable {
    type Cell = Vec<Vec<usize>>;

    fn arity(&self) -> usize {
        self.dims.len()
    }

    fn cells(&self, shape: &[usize]) -> Vec<Self::Cell> {
        assert_eq!(shape.len(), self.arity());
        let mut out: Vec<Self::Cell> = vec![Vec::new()];
        for (&m, &n) in shape.iter().zip(&self.dims) {
            let maps = monotone_maps(m, n);
            out = out
                .into_iter()
                .flat_map(|pre| {
                    maps.iter().map(move |f| {
                        let mut v = pre.clone();
                        v.push(f.clone());
                        v
                    })
                })
                .collect();
        }
        out
    }

    fn restrict(&self, cell: &Self::Cell, dir: usize, theta: &[usize]) -> Self::Cell {
        let mut out = cell.clone();
        out[dir] = theta.iter().map(|&t| cell[dir][t]).collect();
        out
    }

    fn is_degenerate(&self, cell: &Self::Cell) -> bool {
        cell.iter().any(|f| f.windows(2).any(|w| w[0] == w[1]))
    }
}

/// A simplicial set viewed as a 1-fold one.
#[derive(Clone, Debug)]
pub struct Single(pub TruncSSet);

impl MultiSimplicial for Single {
    type Cell = Simplex;

    fn arity(&self) -> usize {
        1
    }

    fn cells(&self, shape: &[usize]) -> Vec<Simplex> {
        self.0.all_simplices(shape[0])
    }

    fn restrict(&self, cell: &Simplex, _dir: usize, theta: &[usize]) -> Simplex {
        self.0.apply(cell, theta)
    }

    fn is_degenerate(&self, cell: &Simplex) -> bool {
        cell.is_degenerate()
    }
}

/// `S ⊠ S'`: cells of shape `(m, m')` are pairs of cells of shapes `m` and `m'`.
#[derive(Clone, Debug)]
pub struct BoxProduct<A, B> {
    pub left: A,
    pub right: B,
}

pub fn box_product<A: MultiSimplicial, B: MultiSimplicial>(left: A, right: B) -> BoxProduct<A, B> {
    BoxProduct { left, right }
}

impl<A: MultiSimplicial, B: MultiSimplicial> MultiSimplicial for BoxProduct<A, B> {
    type Cell = (A::Cell, B::Cell);

    fn arity(&self) -> usize {
        self.left.arity() + self.right.arity()
    }

    fn cells(&self, shape: &[usize]) -> Vec<Self::Cell> {
        let (a, b) = shape.split_at(self.left.arity());
        let right = self.right.cells(b);
        self.left
            .cells(a)
            .into_iter()
            .flat_map(|x| right.iter().map(move |y| (x.clone(), y.clone())))
            .collect()
    }

    fn restrict(&self, cell: &Self::Cell, dir: usize, theta: &[usize]) -> Self::Cell {
        let k = self.left.arity();
        if dir < k {
            (self.left.restrict(&cell.0, dir, theta), cell.1.clone())
        } else {
            (cell.0.clone(), self.right.restrict(&cell.1, dir - k, theta))
        }
    }

    fn is_degenerate(&self, cell: &Self::Cell) -> bool {
        self.left.is_degenerate(&cell.0) || self.right.is_degenerate(&cell.1)
    }
}
