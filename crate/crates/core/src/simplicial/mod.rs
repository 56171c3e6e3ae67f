//! Dimension-truncated simplicial sets.
//!
//! Only nondegenerate simplices are stored. Every simplex is a pair of a
//! nondegenerate core and a monotone surjection onto its vertices.

mod horn;
mod map;
mod nerve;
mod product;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use horn::{inner_horn_report, HornReport, HornStats, HornVerdict};
pub use map::{check_simplicial_map, MapViolation, SMap};
pub use nerve::{boundary, horn, nerve_of_category, nerve_of_poset, simplex, standard_complex, Standard};
pub use product::product;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SsetError {
    #[error("dimension {got} exceeds cap {cap}")]
    DimensionCap { got: usize, cap: usize },
    #[error("horn index {k} out of range for dimension {n}")]
    HornIndex { n: usize, k: usize },
    #[error("cell {dim}:{idx} has {got} faces, expected {expected}")]
    FaceCount { dim: usize, idx: usize, got: usize, expected: usize },
    #[error("cell {dim}:{idx} face {face} is malformed")]
    BadFace { dim: usize, idx: usize, face: usize },
    #[error("simplicial identity d_{i} d_{j} = d_{jm} d_{i} fails on cell {dim}:{idx}", jm = j - 1)]
    Identity { dim: usize, idx: usize, i: usize, j: usize },
    #[error("subcomplex is not closed: cell {dim}:{idx} has a missing face")]
    NotClosed { dim: usize, idx: usize },
    #[error("vertex list {0:?} names no simplex")]
    UnknownVertices(Vec<usize>),
    #[error("complex is not determined by vertex lists")]
    NotVertexDetermined,
    #[error("horn map count exceeds cap {cap} at dimension {dim}")]
    HornCap { dim: usize, cap: usize },
    #[error("map image of cell {dim}:{idx} has the wrong dimension")]
    ImageDimension { dim: usize, idx: usize },
    #[error("json: {0}")]
    Json(String),
}

impl SsetError {
    pub fn is_cap(&self) -> bool {
        matches!(self, SsetError::DimensionCap { .. } | SsetError::HornCap { .. })
    }
}

/// A simplex `core ∘ surj` where `core` is the `idx`-th nondegenerate
/// `k`-cell and `surj: [n] -> [k]` is a monotone surjection.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub k: usize,
    pub core: usize,
    pub surj: Vec<u8>,
}

impl Simplex {
    pub fn cell(k: usize, core: usize) -> Simplex {
        Simplex { k, core, surj: (0..=k as u8).collect() }
    }

    pub fn dim(&self) -> usize {
        self.surj.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.surj.len() != self.k + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Cell {
    faces: Vec<Simplex>,
    vertices: Vec<usize>,
}

/// A simplicial set truncated at `max_dim`.
#[derive(Clone, Debug)]
pub struct TruncSSet {
    max_dim: usize,
    labels: Vec<String>,
    cells: Vec<Vec<Cell>>,
    lossless: bool,
    by_vertices: Option<HashMap<Vec<usize>, (usize, usize)>>,
}

/// `cells[d][i]` lists the faces `d_0, ..., d_d` of the `i`-th nondegenerate `d`-cell.
pub type FaceTable = Vec<Vec<Vec<Simplex>>>;

impl TruncSSet {
    /// Builds a complex from face tables and checks the simplicial identities.
    /// `cells[0]` must have one (empty) entry per label.
    pub fn new(
        labels: Vec<String>,
        mut cells: FaceTable,
        max_dim: usize,
        lossless: bool,
    ) -> Result<TruncSSet, SsetError> {
        cells.resize(max_dim + 1, Vec::new());
        if cells[0].len() != labels.len() {
            return Err(SsetError::FaceCount {
                dim: 0,
                idx: cells[0].len(),
                got: labels.len(),
                expected: cells[0].len(),
            });
        }
        let mut x = TruncSSet {
            max_dim,
            labels,
            cells: Vec::with_capacity(max_dim + 1),
            lossless,
            by_vertices: None,
        };
        for (dim, level) in cells.into_iter().enumerate() {
            let mut built = Vec::with_capacity(level.len());
            for (idx, faces) in level.into_iter().enumerate() {
                let expected = if dim == 0 { 0 } else { dim + 1 };
                if faces.len() != expected {
                    return Err(SsetError::FaceCount { dim, idx, got: faces.len(), expected });
                }
                for (i, f) in faces.iter().enumerate() {
                    let ok = f.dim() + 1 == dim
                        && f.k < dim
                        && f.core < x.cells[f.k].len()
                        && is_surjection(&f.surj, f.k);
                    if !ok {
                        return Err(SsetError::BadFace { dim, idx, face: i });
                    }
                }
                built.push(Cell { faces, vertices: Vec::new() });
            }
            x.cells.push(built);
            for idx in 0..x.cells[dim].len() {
                let vertices = if dim == 0 {
                    vec![idx]
                } else {
                    let s = Simplex::cell(dim, idx);
                    (0..=dim).map(|j| x.apply(&s, &[j]).core).collect()
                };
                x.cells[dim][idx].vertices = vertices;
            }
        }
        x.check_identities()?;
        x.index_vertices();
        Ok(x)
    }

    fn check_identities(&self) -> Result<(), SsetError> {
        for dim in 2..=self.max_dim {
            for idx in 0..self.cells[dim].len() {
                let s = Simplex::cell(dim, idx);
                for j in 1..=dim {
                    for i in 0..j {
                        let lhs = self.face(&self.face(&s, j), i);
                        let rhs = self.face(&self.face(&s, i), j - 1);
                        if lhs != rhs {
                            return Err(SsetError::Identity { dim, idx, i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn index_vertices(&mut self) {
        let mut map = HashMap::new();
        for (dim, level) in self.cells.iter().enumerate() {
            for (idx, cell) in level.iter().enumerate() {
                if map.insert(cell.vertices.clone(), (dim, idx)).is_some() {
                    self.by_vertices = None;
                    return;
                }
            }
        }
        self.by_vertices = Some(map);
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Whether no nondegenerate simplex was cut off by the truncation.
    pub fn is_lossless(&self) -> bool {
        self.lossless
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    /// Nondegenerate `dim`-cells.
    pub fn count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..=self.max_dim).map(|d| self.count(d)).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.counts().iter().sum()
    }

    /// Highest dimension with a nondegenerate cell.
    pub fn top_dim(&self) -> usize {
        (0..=self.max_dim).rev().find(|&d| self.count(d) > 0).unwrap_or(0)
    }

    pub fn vertices(&self, dim: usize, idx: usize) -> &[usize] {
        &self.cells[dim][idx].vertices
    }

    pub fn faces(&self, dim: usize, idx: usize) -> &[Simplex] {
        &self.cells[dim][idx].faces
    }

    pub fn is_vertex_determined(&self) -> bool {
        self.by_vertices.is_some()
    }

    /// The nondegenerate cell with these vertices, if the complex is determined by vertices.
    pub fn cell_by_vertices(&self, vertices: &[usize]) -> Option<(usize, usize)> {
        self.by_vertices.as_ref()?.get(vertices).copied()
    }

    /// The simplex with the given vertex list, possibly degenerate.
    pub fn simplex_by_vertices(&self, vertices: &[usize]) -> Result<Simplex, SsetError> {
        if self.by_vertices.is_none() {
            return Err(SsetError::NotVertexDetermined);
        }
        let mut core = Vec::new();
        let mut surj = Vec::with_capacity(vertices.len());
        for &v in vertices {
            if core.last() != Some(&v) {
                core.push(v);
            }
            surj.push((core.len() - 1) as u8);
        }
        let (k, idx) = self
            .cell_by_vertices(&core)
            .ok_or_else(|| SsetError::UnknownVertices(vertices.to_vec()))?;
        Ok(Simplex { k, core: idx, surj })
    }

    /// Vertices of any simplex.
    pub fn simplex_vertices(&self, s: &Simplex) -> Vec<usize> {
        let v = self.vertices(s.k, s.core);
        s.surj.iter().map(|&t| v[t as usize]).collect()
    }

    /// `s ∘ theta` for a monotone `theta: [m] -> [dim s]`.
    pub fn apply(&self, s: &Simplex, theta: &[usize]) -> Simplex {
        let composite: Vec<usize> = theta.iter().map(|&t| s.surj[t] as usize).collect();
        let mut present = vec![false; s.k + 1];
        for &v in &composite {
            present[v] = true;
        }
        if present.iter().all(|&p| p) {
            return Simplex {
                k: s.k,
                core: s.core,
                surj: composite.iter().map(|&v| v as u8).collect(),
            };
        }
        let image: Vec<usize> = (0..=s.k).filter(|&v| present[v]).collect();
        let face = self.cell_face(s.k, s.core, &image);
        let surj = composite
            .iter()
            .map(|v| face.surj[image.binary_search(v).unwrap()])
            .collect();
        Simplex { k: face.k, core: face.core, surj }
    }

    /// Restriction of a nondegenerate cell to a strictly increasing vertex subset.
    fn cell_face(&self, k: usize, idx: usize, image: &[usize]) -> Simplex {
        if image.len() == k + 1 {
            return Simplex::cell(k, idx);
        }
        let v = (0..=k).rev().find(|v| image.binary_search(v).is_err()).unwrap();
        let shifted: Vec<usize> = image.iter().map(|&x| if x > v { x - 1 } else { x }).collect();
        self.apply(&self.cells[k][idx].faces[v], &shifted)
    }

    /// `d_i`.
    pub fn face(&self, s: &Simplex, i: usize) -> Simplex {
        let n = s.dim();
        let theta: Vec<usize> = (0..n).map(|t| if t < i { t } else { t + 1 }).collect();
        self.apply(s, &theta)
    }

    /// `s_j`.
    pub fn degeneracy(&self, s: &Simplex, j: usize) -> Simplex {
        let n = s.dim();
        let theta: Vec<usize> = (0..=n + 1).map(|t| if t <= j { t } else { t - 1 }).collect();
        self.apply(s, &theta)
    }

    /// Every `n`-simplex, degenerate ones included, cores in increasing dimension.
    pub fn all_simplices(&self, n: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for k in 0..=n.min(self.max_dim) {
            let surjs = surjections(n, k);
            for core in 0..self.count(k) {
                for s in &surjs {
                    out.push(Simplex { k, core, surj: s.clone() });
                }
            }
        }
        out
    }

    /// The subcomplex on the cells selected by `keep`, with the old-to-new index map.
    pub fn subcomplex(
        &self,
        keep: impl Fn(usize, usize) -> bool,
    ) -> Result<(TruncSSet, Vec<Vec<Option<usize>>>), SsetError> {
        let mut map: Vec<Vec<Option<usize>>> = Vec::new();
        let mut cells: FaceTable = Vec::new();
        let mut labels = Vec::new();
        for dim in 0..=self.max_dim {
            let mut level_map = vec![None; self.count(dim)];
            let mut level = Vec::new();
            for idx in 0..self.count(dim) {
                if !keep(dim, idx) {
                    continue;
                }
                let mut faces = Vec::new();
                for f in self.faces(dim, idx) {
                    match map[f.k][f.core] {
                        Some(new) => faces.push(Simplex { k: f.k, core: new, surj: f.surj.clone() }),
                        None => return Err(SsetError::NotClosed { dim, idx }),
                    }
                }
                level_map[idx] = Some(level.len());
                level.push(faces);
                if dim == 0 {
                    labels.push(self.labels[idx].clone());
                }
            }
            map.push(level_map);
            cells.push(level);
        }
        let sub = TruncSSet::new(labels, cells, self.max_dim, self.lossless)?;
        Ok((sub, map))
    }

    /// The `dim`-cells in a canonical order: lexicographic on vertex labels.
    pub fn sorted_cells(&self, dim: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.count(dim)).collect();
        idx.sort_by(|&a, &b| {
            let la: Vec<&str> = self.vertices(dim, a).iter().map(|&v| self.label(v)).collect();
            let lb: Vec<&str> = self.vertices(dim, b).iter().map(|&v| self.label(v)).collect();
            la.cmp(&lb).then(a.cmp(&b))
        });
        idx
    }

    pub fn to_doc(&self) -> ComplexDoc {
        ComplexDoc {
            labels: self.labels.clone(),
            max_dim: Some(self.max_dim),
            lossless: Some(self.lossless),
            cells: (0..=self.max_dim)
                .map(|d| {
                    (0..self.count(d))
                        .map(|i| CellDoc {
                            faces: self.faces(d, i).iter().map(FaceRef::from).collect(),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &ComplexDoc) -> Result<TruncSSet, SsetError> {
        let max_dim = doc.max_dim.unwrap_or(doc.cells.len().saturating_sub(1));
        let mut cells: FaceTable = doc
            .cells
            .iter()
            .enumerate()
            .map(|(d, level)| {
                level.iter().map(|c| c.faces.iter().map(|f| f.to_simplex(d)).collect()).collect()
            })
            .collect();
        if cells.is_empty() {
            cells.push(Vec::new());
        }
        TruncSSet::new(doc.labels.clone(), cells, max_dim, doc.lossless.unwrap_or(false))
    }

    pub fn from_json(text: &str) -> Result<TruncSSet, SsetError> {
        let doc: ComplexDoc =
            serde_json::from_str(text).map_err(|e| SsetError::Json(e.to_string()))?;
        TruncSSet::from_doc(&doc)
    }
}

fn is_surjection(surj: &[u8], k: usize) -> bool {
    surj.first() == Some(&0)
        && surj.last() == Some(&(k as u8))
        && surj.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
}

/// Monotone surjections `[n] -> [k]` in lexicographic order.
pub fn surjections(n: usize, k: usize) -> Vec<Vec<u8>> {
    fn go(n: usize, k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let last = *cur.last().unwrap() as usize;
        if cur.len() == n + 1 {
            if last == k {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = n + 1 - cur.len();
        if k - last > remaining {
            return;
        }
        cur.push(last as u8);
        go(n, k, cur, out);
        cur.pop();
        if last < k {
            cur.push(last as u8 + 1);
            go(n, k, cur, out);
            cur.pop();
        }
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(n, k, &mut vec![0], &mut out);
    out
}

/// Wire format: `cells[d]` lists the `d`-cells; each face is a cell index of
/// dimension `d - 1` or an explicit degenerate simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lossless: Option<bool>,
    pub cells: Vec<Vec<CellDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDoc {
    #[serde(default)]
    pub faces: Vec<FaceRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FaceRef {
    Cell(usize),
    Degenerate { dim: usize, cell: usize, surj: Vec<u8> },
}

impl From<&Simplex> for FaceRef {
    fn from(s: &Simplex) -> FaceRef {
        if s.is_degenerate() {
            FaceRef::Degenerate { dim: s.k, cell: s.core, surj: s.surj.clone() }
        } else {
            FaceRef::Cell(s.core)
        }
    }
}

impl FaceRef {
    fn to_simplex(&self, parent_dim: usize) -> Simplex {
        match self {
            FaceRef::Cell(i) => Simplex::cell(parent_dim.saturating_sub(1), *i),
            FaceRef::Degenerate { dim, cell, surj } => {
                Simplex { k: *dim, core: *cell, surj: surj.clone() }
            }
        }
    }
}
