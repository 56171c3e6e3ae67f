use std::collections::HashMap;

use serde::Serialize;

use super::{Simplex, SsetError, TruncSSet};
use crate::caps::Caps;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum HornVerdict {
    /// Every inner horn has exactly one filler.
    NerveLike,
    /// Every inner horn has at least one filler.
    InnerFibrant,
    /// Some inner horn has no filler.
    Unfillable,
}

#[derive(Clone, Debug, Serialize)]
pub struct HornStats {
    pub n: usize,
    pub k: usize,
    pub horns: usize,
    pub min_fillers: usize,
    pub max_fillers: usize,
    /// Vertex labels of the first few unfillable horns.
    pub unfillable: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HornReport {
    pub max_dim: usize,
    pub stats: Vec<HornStats>,
    pub verdict: HornVerdict,
}

/// Counts fillers of every inner horn `Λ^n_k -> X`, `2 <= n <= max_dim`.
pub fn inner_horn_report(x: &TruncSSet, max_dim: usize, caps: &Caps) -> Result<HornReport, SsetError> {
    if max_dim > x.max_dim() {
        return Err(SsetError::DimensionCap { got: max_dim, cap: x.max_dim() });
    }
    let mut stats = Vec::new();
    let mut budget = caps.horn_pairs;
    for n in 2..=max_dim {
        let lower = x.all_simplices(n - 1);
        let lower_faces: Vec<Vec<Simplex>> =
            lower.iter().map(|s| (0..n).map(|i| x.face(s, i)).collect()).collect();
        let top = x.all_simplices(n);
        for k in 1..n {
            let mut fillers: HashMap<Vec<Simplex>, usize> = HashMap::new();
            for s in &top {
                let key: Vec<Simplex> = (0..=n).filter(|&i| i != k).map(|i| x.face(s, i)).collect();
                *fillers.entry(key).or_default() += 1;
            }
            let slots: Vec<usize> = (0..=n).filter(|&i| i != k).collect();
            let mut chosen: Vec<usize> = Vec::with_capacity(n);
            let mut st = HornStats {
                n,
                k,
                horns: 0,
                min_fillers: usize::MAX,
                max_fillers: 0,
                unfillable: Vec::new(),
            };
            let mut overflow = false;
            enumerate(&slots, &lower_faces, &mut chosen, &mut |choice| {
                if budget == 0 {
                    overflow = true;
                    return false;
                }
                budget -= 1;
                let key: Vec<Simplex> = choice.iter().map(|&c| lower[c].clone()).collect();
                let count = fillers.get(&key).copied().unwrap_or(0);
                st.horns += 1;
                st.min_fillers = st.min_fillers.min(count);
                st.max_fillers = st.max_fillers.max(count);
                if count == 0 && st.unfillable.len() < 5 {
                    let mut verts = Vec::new();
                    for (slot, &c) in slots.iter().zip(choice) {
                        let v: Vec<&str> =
                            x.simplex_vertices(&lower[c]).iter().map(|&v| x.label(v)).collect();
                        verts.push(format!("d{}:{}", slot, v.join(",")));
                    }
                    st.unfillable.push(verts);
                }
                true
            });
            if overflow {
                return Err(SsetError::HornCap { dim: n, cap: caps.horn_pairs });
            }
            if st.horns == 0 {
                st.min_fillers = 0;
            }
            stats.push(st);
        }
    }
    let verdict = if stats.iter().any(|s| s.horns > 0 && s.min_fillers == 0) {
        HornVerdict::Unfillable
    } else if stats.iter().all(|s| s.horns == 0 || (s.min_fillers == 1 && s.max_fillers == 1)) {
        HornVerdict::NerveLike
    } else {
        HornVerdict::InnerFibrant
    };
    Ok(HornReport { max_dim, stats, verdict })
}

/// Compatible face families: `d_i y_j = d_{j-1} y_i` for `i < j`.
fn enumerate(
    slots: &[usize],
    faces: &[Vec<Simplex>],
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if chosen.len() == slots.len() {
        return visit(chosen);
    }
    let j = slots[chosen.len()];
    for cand in 0..faces.len() {
        let ok = chosen.iter().zip(slots).all(|(&prev, &i)| {
            faces[cand][i] == faces[prev][j - 1]
        });
        if ok {
            chosen.push(cand);
            let go_on = enumerate(slots, faces, chosen, visit);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
    }
    true
}
