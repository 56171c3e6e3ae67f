use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use serde::Serialize;

use super::{start_from_vertex_sets, verify_certificate, CertError, Certificate, Move};
use crate::caps::Caps;
use crate::poset::{crt, FinPoset, Lattice};
use crate::simplicial::{nerve_of_poset, TruncSSet};

/// A certificate built along a filtration by intervals `P_0, ..., P_s`.
#[derive(Clone, Debug)]
pub struct StagedCertificate {
    pub certificate: Certificate,
    /// Vertex sets of the intervals.
    pub intervals: Vec<Vec<usize>>,
    /// Moves per stage; stage 0 is empty.
    pub stage_moves: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageSummary {
    pub stage_moves: Vec<usize>,
    pub moves: usize,
}

impl StagedCertificate {
    /// Every move of stage `j` uses only vertices of `P_0 ∪ ... ∪ P_j`.
    pub fn respects_stages(&self) -> bool {
        let n = self.certificate.ambient.count(0);
        self.certificate.moves.iter().all(|mv| {
            let mut allowed = vec![false; n];
            for set in &self.intervals[..=mv.stage.min(self.intervals.len() - 1)] {
                for &v in set {
                    allowed[v] = true;
                }
            }
            mv.stage >= 1 && mv.vertices.iter().all(|&v| allowed[v])
        })
    }

    pub fn summary(&self) -> StageSummary {
        StageSummary { stage_moves: self.stage_moves.clone(), moves: self.certificate.len() }
    }
}

struct PlannedMove {
    dim: usize,
    j: usize,
    vertices: Vec<usize>,
    cell: (usize, usize),
    open: (usize, usize),
    k: usize,
}

/// The largest element of `a` in `(v, t]`.
fn largest_below(p: &FinPoset, in_a: &[bool], v: usize, t: usize) -> Result<usize, CertError> {
    let cands: Vec<usize> = (0..p.len()).filter(|&x| in_a[x] && p.lt(v, x) && p.leq(x, t)).collect();
    cands
        .iter()
        .copied()
        .find(|&x| cands.iter().all(|&y| p.leq(y, x)))
        .ok_or_else(|| CertError::Filtration(format!("no largest element between {} and {}", p.label(v), p.label(t))))
}

/// Chains `v < c_0 < ...` through elements of `up` that leave `a`, paired
/// by inserting the largest element of `a` below the first element outside it.
fn plan_cone(p: &FinPoset, in_a: &[bool], up: &[usize], v: usize) -> Result<Vec<(usize, Vec<usize>)>, CertError> {
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = up.iter().rev().map(|&u| vec![u]).collect();
    while let Some(c) = stack.pop() {
        let last = *c.last().unwrap();
        for &u in up.iter().rev() {
            if p.lt(last, u) {
                let mut next = c.clone();
                next.push(u);
                stack.push(next);
            }
        }
        chains.push(c);
    }
    let mut out = Vec::new();
    for tau in chains {
        let Some(j) = tau.iter().position(|&c| !in_a[c]) else { continue };
        let m = largest_below(p, in_a, v, tau[j])?;
        if j == 0 || tau[j - 1] != m {
            let mut full = vec![v];
            full.extend_from_slice(&tau[..j]);
            full.push(m);
            full.extend_from_slice(&tau[j..]);
            out.push((j, full));
        }
    }
    Ok(out)
}

/// Orders the moves of one cone step so each fills a horn whose other faces
/// are present: Kahn's algorithm with ties broken by dimension, then larger
/// `j`, then vertex list.
fn order_moves(x: &TruncSSet, present: &[Vec<bool>], planned: Vec<PlannedMove>) -> Result<Vec<PlannedMove>, CertError> {
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (n, mv) in planned.iter().enumerate() {
        for c in [mv.cell, mv.open] {
            if present[c.0][c.1] || owner.insert(c, n).is_some() {
                return Err(CertError::Filtration(format!("cell {c:?} added twice or already present")));
            }
        }
    }
    let mut indeg = vec![0usize; planned.len()];
    let mut after: Vec<Vec<usize>> = vec![Vec::new(); planned.len()];
    for (n, mv) in planned.iter().enumerate() {
        for (i, f) in x.faces(mv.cell.0, mv.cell.1).iter().enumerate() {
            if i == mv.k || present[f.k][f.core] {
                continue;
            }
            match owner.get(&(f.k, f.core)) {
                Some(&o) if o != n => {
                    after[o].push(n);
                    indeg[n] += 1;
                }
                _ => return Err(CertError::Filtration(format!("face d{i} of {:?} is never added", mv.vertices))),
            }
        }
    }
    let key = |n: usize| Reverse((planned[n].dim, Reverse(planned[n].j), planned[n].vertices.clone(), n));
    let mut heap: BinaryHeap<_> = (0..planned.len()).filter(|&n| indeg[n] == 0).map(key).collect();
    let mut order = Vec::with_capacity(planned.len());
    while let Some(Reverse((_, _, _, n))) = heap.pop() {
        order.push(n);
        for &m in &after[n] {
            indeg[m] -= 1;
            if indeg[m] == 0 {
                heap.push(key(m));
            }
        }
    }
    if order.len() != planned.len() {
        return Err(CertError::Filtration("cyclic pairing".into()));
    }
    let mut slots: Vec<Option<PlannedMove>> = planned.into_iter().map(Some).collect();
    Ok(order.into_iter().map(|n| slots[n].take().unwrap()).collect())
}

/// Certificate for `⋃ N(P_i) ⊆ N(⋃ P_i)` where the `P_i` are the vertex sets
/// `intervals` of a poset with joins, filled stage by stage and, within a
/// stage, one cone point at a time from the top of `P_0 ∪ ... ∪ P_{j-1}`
/// minus `P_j`.
pub fn lattice_filtration_certificate(
    p: &FinPoset,
    x: &TruncSSet,
    intervals: &[Vec<usize>],
) -> Result<StagedCertificate, CertError> {
    let n = p.len();
    if x.count(0) != n || !x.is_lossless() {
        return Err(CertError::Filtration("ambient must be the full nerve of the poset".into()));
    }
    let mut covered = vec![false; n];
    for set in intervals {
        for &v in set {
            covered[v] = true;
        }
    }
    if let Some(v) = covered.iter().position(|&c| !c) {
        return Err(CertError::Filtration(format!("{} lies in no interval", p.label(v))));
    }
    let start = start_from_vertex_sets(x, intervals)?;
    let mut present: Vec<Vec<bool>> = (0..=x.max_dim()).map(|d| vec![false; x.count(d)]).collect();
    for &(d, i) in &start {
        present[d][i] = true;
    }
    let mut moves = Vec::new();
    let mut stage_moves = vec![0];
    for j in 1..intervals.len() {
        let mut in_a = vec![false; n];
        for set in &intervals[..j] {
            for &v in set {
                in_a[v] = true;
            }
        }
        let mut in_pj = vec![false; n];
        for &v in &intervals[j] {
            in_pj[v] = true;
        }
        let mut remaining: Vec<bool> = (0..n).map(|v| in_a[v] && !in_pj[v]).collect();
        let before = moves.len();
        while let Some(v) = (0..n).find(|&v| remaining[v] && !(0..n).any(|u| remaining[u] && p.lt(v, u))) {
            let up: Vec<usize> = (0..n).filter(|&u| (in_a[u] || in_pj[u]) && p.lt(v, u)).collect();
            let mut planned = Vec::new();
            for (jj, full) in plan_cone(p, &in_a, &up, v)? {
                let cell = x
                    .cell_by_vertices(&full)
                    .ok_or_else(|| CertError::UnknownSimplex(format!("{full:?}")))?;
                let k = jj + 1;
                let f = &x.faces(cell.0, cell.1)[k];
                planned.push(PlannedMove { dim: cell.0, j: jj, vertices: full, cell, open: (f.k, f.core), k });
            }
            for mv in order_moves(x, &present, planned)? {
                present[mv.cell.0][mv.cell.1] = true;
                present[mv.open.0][mv.open.1] = true;
                moves.push(Move { m: mv.dim, k: mv.k, vertices: mv.vertices, stage: j });
            }
            remaining[v] = false;
        }
        stage_moves.push(moves.len() - before);
    }
    let certificate = Certificate { ambient: x.clone(), start, moves };
    let check = verify_certificate(&certificate);
    if !check.valid {
        return Err(CertError::Filtration(format!(
            "replay failed at {:?}: {}",
            check.failed_move,
            check.reason.unwrap_or_default()
        )));
    }
    Ok(StagedCertificate { certificate, intervals: intervals.to_vec(), stage_moves })
}

/// `□^n ⊆ CCpt^n`, filtered by the intervals `[(0,i), (i,n)]` of `RCpt^n`.
pub fn cert_box_in_ccpt(n: usize, caps: &Caps) -> Result<StagedCertificate, CertError> {
    if n > caps.cert_box_n {
        return Err(CertError::Cap { what: "cube certificate n", got: n, cap: caps.cert_box_n });
    }
    let p = FinPoset::rcpt(n);
    let x = nerve_of_poset(&p, p.height() - 1, caps)?;
    let at = |a: usize, b: usize| p.index_of(&format!("({a},{b})")).expect("RCpt point");
    let intervals: Vec<Vec<usize>> = (0..=n)
        .map(|i| (0..p.len()).filter(|&e| p.leq(at(0, i), e) && p.leq(e, at(i, n))).collect())
        .collect();
    lattice_filtration_certificate(&p, &x, &intervals)
}

/// `⋃_p ⊞^n_{p,n} ⊆ Cart^n`, filtered by the intervals `[ξ(i,n), ς(i,n)]` of `Crt^n`.
pub fn cert_boxplus_cover(n: usize, caps: &Caps) -> Result<StagedCertificate, CertError> {
    if n > caps.cert_cart_n {
        return Err(CertError::Cap { what: "cover certificate n", got: n, cap: caps.cert_cart_n });
    }
    let l = crt(n, caps)?;
    let p = l.order_poset((0..l.size()).map(|x| l.label(x)).collect());
    let x = nerve_of_poset(&p, p.height() - 1, caps)?;
    let intervals: Vec<Vec<usize>> = (0..=n).map(|i| l.interval(l.xi(i, n), l.sigma(i, n))).collect();
    lattice_filtration_certificate(&p, &x, &intervals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_small_cases() {
        let caps = Caps::default();
        let c0 = cert_box_in_ccpt(0, &caps).unwrap();
        assert!(c0.certificate.is_empty());
        let c1 = cert_box_in_ccpt(1, &caps).unwrap();
        let mv = &c1.certificate.moves[0];
        assert_eq!((c1.certificate.len(), mv.m, mv.k), (1, 2, 1));
        let c2 = cert_box_in_ccpt(2, &caps).unwrap();
        assert!(verify_certificate(&c2.certificate).valid);
        assert!(c2.respects_stages());
        assert_eq!(c2.certificate.ambient.counts(), vec![6, 14, 16, 9, 2]);
    }

    #[test]
    fn cover_small_cases() {
        let caps = Caps::default();
        assert!(cert_boxplus_cover(0, &caps).unwrap().certificate.is_empty());
        let c1 = cert_boxplus_cover(1, &caps).unwrap();
        assert_eq!(c1.certificate.ambient.counts(), vec![5, 9, 7, 2]);
        assert!(verify_certificate(&c1.certificate).valid);
        assert!(c1.respects_stages());
    }

    #[test]
    fn caps_refuse() {
        let caps = Caps::default();
        assert!(cert_box_in_ccpt(4, &caps).unwrap_err().is_cap());
        assert!(cert_boxplus_cover(3, &caps).unwrap_err().is_cap());
    }

    #[test]
    fn moves_differ_by_two_cells() {
        // each move adds exactly two nondegenerate simplices
        let c = cert_box_in_ccpt(2, &Caps::default()).unwrap().certificate;
        let total: usize = c.ambient.counts().iter().sum();
        assert_eq!(total - c.start.len(), 2 * c.len());
    }
}
