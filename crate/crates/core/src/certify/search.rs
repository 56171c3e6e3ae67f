use std::time::Instant;

use super::{verify_certificate, CertError, Certificate, Move};
use crate::caps::Caps;
use crate::simplicial::TruncSSet;

/// Cells whose vertices all lie in one of `sets`; for a nerve of a poset and
/// full subposets this is the union of their nerves.
pub fn start_from_vertex_sets(x: &TruncSSet, sets: &[Vec<usize>]) -> Result<Vec<(usize, usize)>, CertError> {
    let n = x.count(0);
    let masks: Vec<Vec<bool>> = sets
        .iter()
        .map(|s| {
            let mut m = vec![false; n];
            for &v in s {
                if v >= n {
                    return Err(CertError::UnknownSimplex(format!("vertex {v}")));
                }
                m[v] = true;
            }
            Ok(m)
        })
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for d in 0..=x.max_dim() {
        for i in 0..x.count(d) {
            if masks.iter().any(|m| x.vertices(d, i).iter().all(|&v| m[v])) {
                out.push((d, i));
            }
        }
    }
    Ok(out)
}

struct State<'a> {
    x: &'a TruncSSet,
    present: Vec<Vec<bool>>,
    /// Missing cells of dimension >= 2, by dimension then vertex list.
    order: Vec<(usize, usize)>,
    missing: usize,
}

impl State<'_> {
    /// Legal moves as `(dim, cell, k)`, in search order.
    fn candidates(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &(d, i) in &self.order {
            if self.present[d][i] {
                continue;
            }
            let faces = self.x.faces(d, i);
            let absent: Vec<usize> = (0..=d).filter(|&j| !self.present[faces[j].k][faces[j].core]).collect();
            if let [k] = absent[..] {
                let f = &faces[k];
                if k > 0 && k < d && !f.is_degenerate() {
                    out.push((d, i, k));
                }
            }
        }
        out
    }

    fn apply(&mut self, d: usize, i: usize, k: usize, on: bool) {
        let f = self.x.faces(d, i)[k].clone();
        self.present[d][i] = on;
        self.present[f.k][f.core] = on;
        if on {
            self.missing -= 2;
        } else {
            self.missing += 2;
        }
    }
}

/// Backtracking search for inner horn fillings growing `start` to `x`,
/// trying low dimensions first and then vertex lists in lexicographic order.
///
/// Failure does not show that the inclusion is not inner anodyne.
pub fn find_certificate(x: &TruncSSet, start: &[(usize, usize)], caps: &Caps) -> Result<Certificate, CertError> {
    if !x.is_vertex_determined() {
        return Err(CertError::NotVertexDetermined);
    }
    let mut present: Vec<Vec<bool>> = (0..=x.max_dim()).map(|d| vec![false; x.count(d)]).collect();
    for &(d, i) in start {
        present[d][i] = true;
    }
    let missing = present.iter().flatten().filter(|&&p| !p).count();
    if missing % 2 == 1 {
        return Err(CertError::NotFound(format!("{missing} simplices missing, an odd number")));
    }
    if present[0].iter().any(|&p| !p) {
        return Err(CertError::NotFound("missing vertices can never be added".into()));
    }
    let mut order: Vec<(usize, usize)> = (2..=x.max_dim()).flat_map(|d| (0..x.count(d)).map(move |i| (d, i))).collect();
    order.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| x.vertices(a.0, a.1).cmp(x.vertices(b.0, b.1))));
    let mut st = State { x, present, order, missing };
    let began = Instant::now();
    let mut attempts: u64 = 0;
    let mut placed = 0usize;
    let mut path: Vec<(usize, usize, usize)> = Vec::new();
    let mut stack: Vec<(Vec<(usize, usize, usize)>, usize)> = vec![(st.candidates(), 0)];
    while st.missing > 0 {
        if attempts >= caps.search_attempts || began.elapsed() > caps.search_time {
            return Err(CertError::Budget {
                attempts,
                elapsed_ms: began.elapsed().as_millis(),
                placed,
                remaining: st.missing,
            });
        }
        let Some((cands, pos)) = stack.last_mut() else {
            return Err(CertError::NotFound("every move order gets stuck".into()));
        };
        if *pos == cands.len() {
            stack.pop();
            if let Some((d, i, k)) = path.pop() {
                st.apply(d, i, k, false);
            }
            continue;
        }
        let (d, i, k) = cands[*pos];
        *pos += 1;
        attempts += 1;
        st.apply(d, i, k, true);
        path.push((d, i, k));
        placed = placed.max(path.len());
        stack.push((st.candidates(), 0));
    }
    let moves = path
        .iter()
        .map(|&(d, i, k)| Move { m: d, k, vertices: x.vertices(d, i).to_vec(), stage: 0 })
        .collect();
    let cert = Certificate { ambient: x.clone(), start: start.to_vec(), moves };
    debug_assert!(verify_certificate(&cert).valid);
    Ok(cert)
}
