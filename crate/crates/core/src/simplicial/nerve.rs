use std::collections::HashMap;

use super::{FaceTable, Simplex, SsetError, TruncSSet};
use crate::caps::Caps;
use crate::fincat::FinCat;
use crate::poset::FinPoset;

fn check_dim(max_dim: usize, caps: &Caps) -> Result<(), SsetError> {
    if max_dim > caps.nerve_dim {
        Err(SsetError::DimensionCap { got: max_dim, cap: caps.nerve_dim })
    } else {
        Ok(())
    }
}

/// Strictly increasing chains of `p` with at most `max_dim + 1` elements.
pub fn nerve_of_poset(p: &FinPoset, max_dim: usize, caps: &Caps) -> Result<TruncSSet, SsetError> {
    check_dim(max_dim, caps)?;
    let n = p.len();
    let up: Vec<Vec<usize>> = (0..n).map(|a| (0..n).filter(|&b| p.lt(a, b)).collect()).collect();
    let mut chains: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_dim + 1];
    let mut stack: Vec<Vec<usize>> = (0..n).rev().map(|a| vec![a]).collect();
    while let Some(chain) = stack.pop() {
        let d = chain.len() - 1;
        if d < max_dim {
            for &b in up[*chain.last().unwrap()].iter().rev() {
                let mut next = chain.clone();
                next.push(b);
                stack.push(next);
            }
        }
        chains[d].push(chain);
    }
    for level in chains.iter_mut() {
        level.sort();
    }
    let lossless = p.height() <= max_dim + 1;
    build_from_chains(p.labels().to_vec(), chains, max_dim, lossless)
}

/// Builds a vertex-determined complex from vertex lists closed under deletion.
fn build_from_chains(
    labels: Vec<String>,
    chains: Vec<Vec<Vec<usize>>>,
    max_dim: usize,
    lossless: bool,
) -> Result<TruncSSet, SsetError> {
    let index: Vec<HashMap<&[usize], usize>> = chains
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect())
        .collect();
    let mut cells: FaceTable = vec![vec![Vec::new(); labels.len()]];
    for d in 1..=max_dim {
        let mut level = Vec::with_capacity(chains[d].len());
        for chain in &chains[d] {
            let faces = (0..=d)
                .map(|i| {
                    let mut f = chain.clone();
                    f.remove(i);
                    index[d - 1]
                        .get(f.as_slice())
                        .map(|&j| Simplex::cell(d - 1, j))
                        .ok_or(SsetError::UnknownVertices(f))
                })
                .collect::<Result<Vec<_>, _>>()?;
            level.push(faces);
        }
        cells.push(level);
    }
    TruncSSet::new(labels, cells, max_dim, lossless)
}

/// Chains of composable non-identity morphisms of length at most `max_dim`.
///
/// A face that composes to an identity is stored as a degenerate simplex.
pub fn nerve_of_category(c: &FinCat, max_dim: usize, caps: &Caps) -> Result<TruncSSet, SsetError> {
    check_dim(max_dim, caps)?;
    let non_id: Vec<Vec<usize>> = (0..c.object_count())
        .map(|o| {
            (0..c.morphism_count())
                .filter(|&f| c.src(f) == o && !c.is_identity(f))
                .collect()
        })
        .collect();
    // chains[d] for d >= 1 holds morphism lists; 0-cells are the objects.
    let mut chains: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_dim + 2];
    chains[0] = (0..c.object_count()).map(|o| vec![o]).collect();
    for d in 1..=max_dim + 1 {
        let mut next = Vec::new();
        if d == 1 {
            for f in 0..c.morphism_count() {
                if !c.is_identity(f) {
                    next.push(vec![f]);
                }
            }
        } else {
            for chain in &chains[d - 1] {
                for &g in &non_id[c.dst(*chain.last().unwrap())] {
                    let mut ext = chain.clone();
                    ext.push(g);
                    next.push(ext);
                }
            }
        }
        chains[d] = next;
        if d == max_dim + 1 {
            break;
        }
    }
    let lossless = chains[max_dim + 1].is_empty();
    chains.truncate(max_dim + 1);
    let index: Vec<HashMap<&[usize], usize>> = chains
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, ch)| (ch.as_slice(), i)).collect())
        .collect();
    // Normal form of a chain that may contain identities.
    let normalize = |mors: Vec<usize>, start: usize| -> Simplex {
        let mut core = Vec::new();
        let mut surj = vec![0u8];
        for &f in &mors {
            if c.is_identity(f) {
                surj.push(*surj.last().unwrap());
            } else {
                core.push(f);
                surj.push(surj.last().unwrap() + 1);
            }
        }
        if core.is_empty() {
            Simplex { k: 0, core: start, surj }
        } else {
            Simplex { k: core.len(), core: index[core.len()][core.as_slice()], surj }
        }
    };
    let mut cells: FaceTable = vec![vec![Vec::new(); c.object_count()]];
    for d in 1..=max_dim {
        let mut level = Vec::with_capacity(chains[d].len());
        for chain in &chains[d] {
            let mut faces = Vec::with_capacity(d + 1);
            for i in 0..=d {
                let face = if d == 1 {
                    let o = if i == 0 { c.dst(chain[0]) } else { c.src(chain[0]) };
                    Simplex::cell(0, o)
                } else if i == 0 {
                    normalize(chain[1..].to_vec(), c.src(chain[1]))
                } else if i == d {
                    normalize(chain[..d - 1].to_vec(), c.src(chain[0]))
                } else {
                    let mut m = chain[..i - 1].to_vec();
                    m.push(c.compose(chain[i], chain[i - 1]).unwrap());
                    m.extend_from_slice(&chain[i + 1..]);
                    normalize(m, c.src(chain[0]))
                };
                faces.push(face);
            }
            level.push(faces);
        }
        cells.push(level);
    }
    TruncSSet::new(c.objects().to_vec(), cells, max_dim, lossless)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Standard {
    Simplex,
    Boundary,
    /// Horn missing the face opposite vertex `k`.
    Horn(usize),
}

pub fn standard_complex(kind: Standard, n: usize, max_dim: usize) -> Result<TruncSSet, SsetError> {
    match kind {
        Standard::Simplex => Ok(simplex(n, max_dim)),
        Standard::Boundary => boundary(n, max_dim),
        Standard::Horn(k) => horn(n, k, max_dim),
    }
}

/// `Δ^n`, vertices labelled `0..n`.
pub fn simplex(n: usize, max_dim: usize) -> TruncSSet {
    let caps = Caps { nerve_dim: max_dim, ..Caps::default() };
    nerve_of_poset(&FinPoset::chain(n), max_dim, &caps).expect("standard simplex")
}

/// `∂Δ^n`: every face except the top cell.
pub fn boundary(n: usize, max_dim: usize) -> Result<TruncSSet, SsetError> {
    let full = simplex(n, max_dim);
    let (sub, _) = full.subcomplex(|d, _| d < n)?;
    Ok(TruncSSet { lossless: true, ..sub })
}

/// `Λ^n_k`: `∂Δ^n` without the face opposite vertex `k`.
pub fn horn(n: usize, k: usize, max_dim: usize) -> Result<TruncSSet, SsetError> {
    if k > n || n == 0 {
        return Err(SsetError::HornIndex { n, k });
    }
    let full = simplex(n, max_dim);
    let (sub, _) = full.subcomplex(|d, i| {
        d + 1 < n || (d + 1 == n && full.vertices(d, i).contains(&k))
    })?;
    Ok(TruncSSet { lossless: true, ..sub })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCat;

    #[test]
    fn chain_nerves() {
        let caps = Caps::default();
        let x = nerve_of_poset(&FinPoset::chain(2), 3, &caps).unwrap();
        assert_eq!(x.counts(), vec![3, 3, 1, 0]);
        assert!(x.is_lossless());
        let r1 = nerve_of_poset(&FinPoset::rcpt(1), 3, &caps).unwrap();
        assert_eq!(r1.counts(), vec![3, 3, 1, 0]);
        let r3 = nerve_of_poset(&FinPoset::rcpt(3), 7, &caps).unwrap();
        assert_eq!(r3.top_dim(), 6);
        assert!(nerve_of_poset(&FinPoset::chain(2), 9, &caps).unwrap_err().is_cap());
    }

    #[test]
    fn standard_complexes() {
        assert_eq!(simplex(0, 2).counts(), vec![1, 0, 0]);
        assert_eq!(boundary(2, 2).unwrap().counts(), vec![3, 3, 0]);
        let h = horn(2, 1, 2).unwrap();
        assert_eq!(h.counts(), vec![3, 2, 0]);
        assert!(h.cell_by_vertices(&[0, 2]).is_none());
        assert!(h.cell_by_vertices(&[0, 1]).is_some());
        assert!(horn(2, 3, 2).is_err());
    }

    #[test]
    fn category_nerve_with_isomorphism() {
        // Two objects and an isomorphism pair: the face d_1 of (f, g) is an identity.
        let c = FinCat::from_json(
            r#"{"objects":["a","b"],
                "morphisms":[{"id":"f","src":"a","dst":"b"},{"id":"g","src":"b","dst":"a"}],
                "compose":[["g","f","id_a"],["f","g","id_b"]]}"#,
        )
        .unwrap();
        let x = nerve_of_category(&c, 3, &Caps::default()).unwrap();
        assert_eq!(x.counts(), vec![2, 2, 2, 2]);
        assert!(!x.is_lossless());
        let gf = Simplex::cell(2, 0);
        assert!(x.face(&gf, 1).is_degenerate());
    }

    #[test]
    fn poset_category_nerve_matches_poset_nerve() {
        let p = FinPoset::grid(1);
        let caps = Caps::default();
        let a = nerve_of_poset(&p, 4, &caps).unwrap();
        let b = nerve_of_category(&FinCat::from_poset(&p), 4, &caps).unwrap();
        assert_eq!(a.counts(), b.counts());
        assert!(b.is_lossless());
    }
}
