use std::fmt;

use super::{Simplex, SsetError, TruncSSet};

/// A map given on nondegenerate cells; `images[d][i]` is a `d`-simplex of the target.
#[derive(Clone, Debug)]
pub struct SMap<'a> {
    pub source: &'a TruncSSet,
    pub target: &'a TruncSSet,
    pub images: Vec<Vec<Simplex>>,
}

/// First operator that fails to commute with the map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapViolation {
    pub dim: usize,
    pub cell: usize,
    /// `"d"` or `"s"`.
    pub op: &'static str,
    pub index: usize,
}

impl fmt::Display for MapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{} on cell {}:{}", self.op, self.index, self.dim, self.cell)
    }
}

impl<'a> SMap<'a> {
    pub fn identity(x: &'a TruncSSet) -> SMap<'a> {
        let images = (0..=x.max_dim())
            .map(|d| (0..x.count(d)).map(|i| Simplex::cell(d, i)).collect())
            .collect();
        SMap { source: x, target: x, images }
    }

    /// The map determined by a vertex assignment; the target must be
    /// determined by vertex lists.
    pub fn from_vertex_map(
        source: &'a TruncSSet,
        target: &'a TruncSSet,
        vertex_map: &[usize],
    ) -> Result<SMap<'a>, SsetError> {
        let mut images = Vec::new();
        for d in 0..=source.max_dim() {
            let mut level = Vec::with_capacity(source.count(d));
            for i in 0..source.count(d) {
                let vs: Vec<usize> = source.vertices(d, i).iter().map(|&v| vertex_map[v]).collect();
                level.push(target.simplex_by_vertices(&vs)?);
            }
            images.push(level);
        }
        Ok(SMap { source, target, images })
    }

    /// Image of any simplex of the source.
    pub fn image(&self, s: &Simplex) -> Simplex {
        let base = &self.images[s.k][s.core];
        let theta: Vec<usize> = s.surj.iter().map(|&t| t as usize).collect();
        self.target.apply(base, &theta)
    }
}

/// Checks `f d_i = d_i f` on every cell and `f s_j = s_j f` on every simplex
/// below the top dimension.
pub fn check_simplicial_map(f: &SMap) -> Result<(), MapViolation> {
    let (x, y) = (f.source, f.target);
    for d in 0..=x.max_dim() {
        for i in 0..x.count(d) {
            let img = &f.images[d][i];
            if img.dim() != d {
                return Err(MapViolation { dim: d, cell: i, op: "dim", index: 0 });
            }
            if d == 0 {
                continue;
            }
            let s = Simplex::cell(d, i);
            for k in 0..=d {
                if f.image(&x.face(&s, k)) != y.face(img, k) {
                    return Err(MapViolation { dim: d, cell: i, op: "d", index: k });
                }
            }
        }
    }
    for d in 0..x.max_dim() {
        for s in x.all_simplices(d) {
            for j in 0..=d {
                if f.image(&x.degeneracy(&s, j)) != y.degeneracy(&f.image(&s), j) {
                    return Err(MapViolation { dim: d, cell: s.core, op: "s", index: j });
                }
            }
        }
    }
    Ok(())
}
