//! Integral homology of truncated simplicial sets through normalized chains.

mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use snf::{elementary_divisors, smith_checked, smith_normal_form, Snf, SnfInt};

use crate::caps::Caps;
use crate::fincat::FinCat;
use crate::simplicial::{nerve_of_category, Simplex, SsetError, TruncSSet};

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error("degree {degree} exceeds the stored dimension {max_dim}")]
    Dimension { degree: usize, max_dim: usize },
    #[error("boundary of boundary is nonzero in degree {degree} at ({row}, {col})")]
    NotComplex { degree: usize, row: usize, col: usize },
    #[error("empty complex")]
    Empty,
    #[error("torsion coefficient {0} does not fit in 64 bits")]
    TorsionOverflow(String),
    #[error("cone detected at {0} but reduced homology is nonzero")]
    ConeInconsistent(String),
    #[error(transparent)]
    Simplicial(#[from] SsetError),
}

impl HomologyError {
    pub fn is_cap(&self) -> bool {
        matches!(self, HomologyError::Simplicial(e) if e.is_cap())
    }
}

/// Sparse column of a boundary matrix.
pub type Column = Vec<(usize, i64)>;

/// Normalized chains: bases are the nondegenerate cells.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    basis: Vec<usize>,
    /// `boundary[n]` maps degree `n` to degree `n - 1`; `boundary[0]` is empty.
    boundary: Vec<Vec<Column>>,
    /// Highest degree whose homology is determined by the stored data.
    exact_through: Option<usize>,
}

impl ChainComplex {
    /// Builds a complex directly from sparse boundary columns.
    pub fn from_columns(basis: Vec<usize>, boundary: Vec<Vec<Column>>, exact_through: Option<usize>) -> Result<ChainComplex, HomologyError> {
        let cc = ChainComplex { basis, boundary, exact_through };
        cc.verify()?;
        Ok(cc)
    }

    pub fn basis_sizes(&self) -> &[usize] {
        &self.basis
    }

    pub fn boundary(&self, n: usize) -> &[Column] {
        &self.boundary[n]
    }

    pub fn exact_through(&self) -> Option<usize> {
        self.exact_through
    }

    /// Matrix of `∂_n` as `rows cols` followed by `row col value` lines.
    pub fn to_triplets(&self, n: usize) -> String {
        let rows = if n == 0 { 0 } else { self.basis[n - 1] };
        let mut out = format!("{} {}\n", rows, self.basis[n]);
        for (c, col) in self.boundary[n].iter().enumerate() {
            for &(r, v) in col {
                out.push_str(&format!("{r} {c} {v}\n"));
            }
        }
        out
    }

    fn verify(&self) -> Result<(), HomologyError> {
        for n in 2..self.boundary.len() {
            for (c, col) in self.boundary[n].iter().enumerate() {
                let mut acc = vec![0i64; self.basis[n - 2]];
                for &(r, v) in col {
                    for &(r2, w) in &self.boundary[n - 1][r] {
                        acc[r2] += v * w;
                    }
                }
                if let Some(row) = acc.iter().position(|&x| x != 0) {
                    return Err(HomologyError::NotComplex { degree: n, row, col: c });
                }
            }
        }
        Ok(())
    }
}

/// Normalized chain complex of `x` through degree `d`, plus degree `d + 1`
/// when it is stored.
pub fn chain_complex(x: &TruncSSet, d: usize) -> Result<ChainComplex, HomologyError> {
    if d > x.max_dim() {
        return Err(HomologyError::Dimension { degree: d, max_dim: x.max_dim() });
    }
    let top = (d + 1).min(x.max_dim());
    let basis: Vec<usize> = (0..=top).map(|n| x.count(n)).collect();
    let mut boundary = vec![Vec::new()];
    for n in 1..=top {
        let cols = (0..x.count(n))
            .map(|i| {
                let mut col: Vec<(usize, i64)> = Vec::new();
                for j in 0..=n {
                    let f = x.face(&Simplex::cell(n, i), j);
                    if f.is_degenerate() {
                        continue;
                    }
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    match col.iter_mut().find(|e| e.0 == f.core) {
                        Some(e) => e.1 += sign,
                        None => col.push((f.core, sign)),
                    }
                }
                col.retain(|e| e.1 != 0);
                col.sort();
                col
            })
            .collect();
        boundary.push(cols);
    }
    let exact_through = if top > d || x.is_lossless() {
        Some(d)
    } else {
        d.checked_sub(1)
    };
    let cc = ChainComplex { basis, boundary, exact_through };
    cc.verify()?;
    Ok(cc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub betti: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    /// Unreduced homology, degrees `0..=exact_through`.
    pub degrees: Vec<DegreeHomology>,
    pub connected: bool,
    /// Largest `D` with reduced homology vanishing in degrees `0..=D`.
    pub acyclic_through: Option<usize>,
    pub cone: Option<String>,
    pub euler_characteristic: i64,
}

impl HomologyReport {
    pub fn reduced_betti(&self, n: usize) -> usize {
        let b = self.degrees[n].betti;
        if n == 0 {
            b.saturating_sub(1)
        } else {
            b
        }
    }

    /// Whether reduced homology is zero through degree `d`.
    pub fn is_acyclic_through(&self, d: usize) -> bool {
        self.acyclic_through.is_some_and(|a| a >= d)
    }

    pub fn is_reduced_trivial(&self) -> bool {
        (0..self.degrees.len()).all(|n| self.reduced_betti(n) == 0 && self.degrees[n].torsion.is_empty())
    }
}

pub fn homology_groups(cc: &ChainComplex) -> Result<HomologyReport, HomologyError> {
    let Some(top) = cc.exact_through else {
        return Ok(HomologyReport {
            degrees: Vec::new(),
            connected: false,
            acyclic_through: None,
            cone: None,
            euler_characteristic: 0,
        });
    };
    let stored = cc.basis.len() - 1;
    // rank and divisors of ∂_n for n = 1..=stored
    let mut ranks = vec![0usize; stored + 2];
    let mut torsion: Vec<Vec<u64>> = vec![Vec::new(); stored + 2];
    for n in 1..=stored.min(top + 1) {
        let divs = elementary_divisors(cc.basis[n - 1], &cc.boundary[n]);
        ranks[n] = divs.len();
        for dv in divs.into_iter().filter(|x| !x.is_one()) {
            torsion[n - 1].push(to_u64(&dv)?);
        }
        torsion[n - 1].sort_unstable();
    }
    let degrees: Vec<DegreeHomology> = (0..=top)
        .map(|n| DegreeHomology {
            betti: cc.basis[n] - ranks[n] - ranks[n + 1],
            torsion: torsion[n].clone(),
        })
        .collect();
    let connected = cc.basis[0] > 0 && degrees[0].betti == 1;
    let mut acyclic_through = None;
    if connected && degrees[0].torsion.is_empty() {
        acyclic_through = Some(0);
        for (n, dh) in degrees.iter().enumerate().skip(1) {
            if dh.betti != 0 || !dh.torsion.is_empty() {
                break;
            }
            acyclic_through = Some(n);
        }
    }
    let euler_characteristic = (0..=top)
        .map(|n| if n % 2 == 0 { cc.basis[n] as i64 } else { -(cc.basis[n] as i64) })
        .sum();
    Ok(HomologyReport { degrees, connected, acyclic_through, cone: None, euler_characteristic })
}

fn to_u64(x: &BigInt) -> Result<u64, HomologyError> {
    x.to_u64().ok_or_else(|| HomologyError::TorsionOverflow(x.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// An initial or terminal vertex; contractible outright.
    Cone,
    /// Connected with vanishing reduced homology through the degree; evidence only.
    Acyclic(usize),
    Inconclusive,
    /// Some reduced homology group is nonzero.
    Nontrivial,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Cone => write!(f, "CONE"),
            Verdict::Acyclic(d) => write!(f, "ACYCLIC<={d}"),
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
            Verdict::Nontrivial => write!(f, "NONTRIVIAL"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Evidence {
    #[serde(flatten)]
    pub report: HomologyReport,
    pub verdict: Verdict,
}

/// A vertex `v` such that every cell extends by `v` at the front (or at
/// the back); only defined for vertex-determined complexes.
pub fn find_cone_vertex(x: &TruncSSet) -> Option<(usize, bool)> {
    if !x.is_vertex_determined() || x.count(0) == 0 {
        return None;
    }
    for front in [true, false] {
        'v: for v in 0..x.count(0) {
            for d in 0..=x.max_dim() {
                for i in 0..x.count(d) {
                    let s = x.vertices(d, i);
                    let ok = if front {
                        s[0] == v || {
                            let mut t = vec![v];
                            t.extend_from_slice(s);
                            x.cell_by_vertices(&t).is_some()
                        }
                    } else {
                        s[s.len() - 1] == v || {
                            let mut t = s.to_vec();
                            t.push(v);
                            x.cell_by_vertices(&t).is_some()
                        }
                    };
                    if !ok {
                        continue 'v;
                    }
                }
            }
            return Some((v, front));
        }
    }
    None
}

fn classify(mut report: HomologyReport, d: usize, cone: Option<String>) -> Result<Evidence, HomologyError> {
    if let Some(c) = &cone {
        if !report.is_reduced_trivial() {
            return Err(HomologyError::ConeInconsistent(c.clone()));
        }
    }
    let verdict = if cone.is_some() {
        Verdict::Cone
    } else if !report.is_reduced_trivial() {
        Verdict::Nontrivial
    } else if report.is_acyclic_through(d) {
        Verdict::Acyclic(d)
    } else {
        Verdict::Inconclusive
    };
    report.cone = cone;
    Ok(Evidence { report, verdict })
}

/// Cone detection followed by reduced homology through degree `d`.
pub fn contractibility_evidence(x: &TruncSSet, d: usize) -> Result<Evidence, HomologyError> {
    if x.count(0) == 0 {
        return Err(HomologyError::Empty);
    }
    let report = homology_groups(&chain_complex(x, d)?)?;
    let cone = find_cone_vertex(x).map(|(v, front)| {
        format!("{} vertex {}", if front { "initial" } else { "terminal" }, x.label(v))
    });
    classify(report, d, cone)
}

/// Same as [`contractibility_evidence`] on the nerve of `c`, with cones read
/// off initial and terminal objects.
pub fn category_evidence(c: &FinCat, d: usize, caps: &Caps) -> Result<Evidence, HomologyError> {
    if c.object_count() == 0 {
        return Err(HomologyError::Empty);
    }
    let nerve = nerve_of_category(c, (d + 1).min(caps.nerve_dim), caps)?;
    let report = homology_groups(&chain_complex(&nerve, d.min(nerve.max_dim()))?)?;
    let cone = if let Some(&o) = c.initial_objects().first() {
        Some(format!("initial object {}", c.object_name(o)))
    } else {
        c.terminal_objects().first().map(|&o| format!("terminal object {}", c.object_name(o)))
    };
    classify(report, d, cone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinPoset;
    use crate::simplicial::{boundary, nerve_of_poset, simplex};

    #[test]
    fn point_and_circle() {
        let p = chain_complex(&simplex(0, 0), 0).unwrap();
        assert_eq!(p.basis_sizes(), &[1]);
        let h = homology_groups(&p).unwrap();
        assert_eq!(h.degrees, vec![DegreeHomology { betti: 1, torsion: vec![] }]);

        let circle = boundary(2, 2).unwrap();
        let cc = chain_complex(&circle, 2).unwrap();
        assert_eq!(&cc.basis_sizes()[..2], &[3, 3]);
        assert_eq!(elementary_divisors(3, cc.boundary(1)).len(), 2);
        let ev = contractibility_evidence(&circle, 2).unwrap();
        assert_eq!(ev.verdict, Verdict::Nontrivial);
        assert_eq!(ev.report.reduced_betti(1), 1);
    }

    #[test]
    fn simplices_are_cones() {
        for n in 0..4 {
            let ev = contractibility_evidence(&simplex(n, n + 1), n).unwrap();
            assert_eq!(ev.verdict, Verdict::Cone);
            assert!(ev.report.is_acyclic_through(n));
        }
    }

    #[test]
    fn ccpt2_basis_matches_chains() {
        let x = nerve_of_poset(&FinPoset::rcpt(2), 5, &Caps::default()).unwrap();
        let cc = chain_complex(&x, 5).unwrap();
        assert_eq!(cc.basis_sizes(), &[6, 14, 16, 9, 2, 0]);
    }

    #[test]
    fn projective_plane_torsion() {
        // Minimal 6-vertex triangulation of RP^2.
        let faces: [[usize; 3]; 10] = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
            [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
        ];
        let mut edges: Vec<[usize; 2]> = faces
            .iter()
            .flat_map(|f| [[f[0], f[1]], [f[0], f[2]], [f[1], f[2]]])
            .collect();
        edges.sort();
        edges.dedup();
        let e_idx = |a: usize, b: usize| edges.iter().position(|e| *e == [a, b]).unwrap();
        let b1: Vec<Column> = edges.iter().map(|e| vec![(e[0], -1), (e[1], 1)]).collect();
        let b2: Vec<Column> = faces
            .iter()
            .map(|f| {
                let mut c = vec![(e_idx(f[1], f[2]), 1), (e_idx(f[0], f[2]), -1), (e_idx(f[0], f[1]), 1)];
                c.sort();
                c
            })
            .collect();
        let cc = ChainComplex::from_columns(vec![6, edges.len(), 10], vec![vec![], b1, b2], Some(2)).unwrap();
        let h = homology_groups(&cc).unwrap();
        assert_eq!(h.degrees[1], DegreeHomology { betti: 0, torsion: vec![2] });
        assert_eq!(h.degrees[2].betti, 0);
        assert_eq!(h.euler_characteristic, 1);
    }

    #[test]
    fn broken_complex_rejected() {
        let b1: Vec<Column> = vec![vec![(0, -1), (1, 1)]];
        let b2: Vec<Column> = vec![vec![(0, 1)]];
        assert!(matches!(
            ChainComplex::from_columns(vec![2, 1, 1], vec![vec![], b1, b2], Some(1)),
            Err(HomologyError::NotComplex { degree: 2, .. })
        ));
    }
}
