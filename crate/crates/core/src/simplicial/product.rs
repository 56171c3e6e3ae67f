use std::collections::HashMap;

use super::{FaceTable, Simplex, TruncSSet};

type PairKey = (usize, usize, Vec<u8>, usize, usize, Vec<u8>);

/// Lattice paths `(0,0) -> (p,q)` with `n` steps in `{(1,0), (0,1), (1,1)}`.
fn paths(p: usize, q: usize, n: usize) -> Vec<(Vec<u8>, Vec<u8>)> {
    fn go(
        p: usize,
        q: usize,
        n: usize,
        a: &mut Vec<u8>,
        b: &mut Vec<u8>,
        out: &mut Vec<(Vec<u8>, Vec<u8>)>,
    ) {
        let (x, y) = (*a.last().unwrap() as usize, *b.last().unwrap() as usize);
        let left = n + 1 - a.len();
        if left == 0 {
            if x == p && y == q {
                out.push((a.clone(), b.clone()));
            }
            return;
        }
        if (p - x).max(q - y) > left || (p - x) + (q - y) < left {
            return;
        }
        for (dx, dy) in [(1, 0), (0, 1), (1, 1)] {
            if x + dx <= p && y + dy <= q {
                a.push((x + dx) as u8);
                b.push((y + dy) as u8);
                go(p, q, n, a, b, out);
                a.pop();
                b.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(p, q, n, &mut vec![0], &mut vec![0], &mut out);
    out
}

/// The product `X × Y`, truncated at the smaller dimension.
///
/// Vertex `(a, b)` has index `a * |Y_0| + b` and label `(la,lb)`.
pub fn product(x: &TruncSSet, y: &TruncSSet) -> TruncSSet {
    let max_dim = x.max_dim().min(y.max_dim());
    let mut keys: Vec<Vec<PairKey>> = vec![Vec::new(); max_dim + 1];
    for n in 0..=max_dim {
        for p in 0..=n.min(x.max_dim()) {
            for q in n.saturating_sub(p)..=n.min(y.max_dim()) {
                let ps = paths(p, q, n);
                if ps.is_empty() {
                    continue;
                }
                for a in 0..x.count(p) {
                    for b in 0..y.count(q) {
                        for (eta, zeta) in &ps {
                            keys[n].push((p, a, eta.clone(), q, b, zeta.clone()));
                        }
                    }
                }
            }
        }
    }
    let index: Vec<HashMap<&PairKey, usize>> = keys
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, k)| (k, i)).collect())
        .collect();
    let ny = y.count(0);
    let labels: Vec<String> = (0..x.count(0))
        .flat_map(|a| (0..ny).map(move |b| (a, b)))
        .map(|(a, b)| format!("({},{})", x.label(a), y.label(b)))
        .collect();
    let mut cells: FaceTable = vec![vec![Vec::new(); labels.len()]];
    for n in 1..=max_dim {
        let mut level = Vec::with_capacity(keys[n].len());
        for (p, a, eta, q, b, zeta) in &keys[n] {
            let sx = Simplex { k: *p, core: *a, surj: eta.clone() };
            let sy = Simplex { k: *q, core: *b, surj: zeta.clone() };
            let faces = (0..=n)
                .map(|i| {
                    let fx = x.face(&sx, i);
                    let fy = y.face(&sy, i);
                    normalize_pair(&fx, &fy, &index, ny)
                })
                .collect();
            level.push(faces);
        }
        cells.push(level);
    }
    let top = x.top_dim() + y.top_dim();
    let lossless = x.is_lossless() && y.is_lossless() && top <= max_dim;
    TruncSSet::new(labels, cells, max_dim, lossless).expect("product of simplicial sets")
}

/// Splits off the collapses shared by both components.
fn normalize_pair(
    fx: &Simplex,
    fy: &Simplex,
    index: &[HashMap<&PairKey, usize>],
    ny: usize,
) -> Simplex {
    let m = fx.dim();
    let mut rho = vec![0u8];
    let mut eta = vec![fx.surj[0]];
    let mut zeta = vec![fy.surj[0]];
    for t in 1..=m {
        if fx.surj[t] == fx.surj[t - 1] && fy.surj[t] == fy.surj[t - 1] {
            rho.push(*rho.last().unwrap());
        } else {
            rho.push(rho.last().unwrap() + 1);
            eta.push(fx.surj[t]);
            zeta.push(fy.surj[t]);
        }
    }
    let r = *rho.last().unwrap() as usize;
    if r == 0 {
        return Simplex { k: 0, core: fx.core * ny + fy.core, surj: rho };
    }
    let key: PairKey = (fx.k, fx.core, eta, fy.k, fy.core, zeta);
    Simplex { k: r, core: index[r][&key], surj: rho }
}
