use serde::Serialize;

use super::Certificate;
use crate::simplicial::{Simplex, TruncSSet};

/// Outcome of a replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub valid: bool,
    /// Index of the first illegal move.
    pub failed_move: Option<usize>,
    pub reason: Option<String>,
    pub moves: usize,
}

impl Verification {
    fn fail(moves: usize, at: Option<usize>, reason: String) -> Verification {
        Verification { valid: false, failed_move: at, reason: Some(reason), moves }
    }
}

fn describe(x: &TruncSSet, d: usize, i: usize) -> String {
    let vs: Vec<&str> = x.vertices(d, i).iter().map(|&v| x.label(v)).collect();
    format!("[{}]", vs.join(","))
}

/// Replays the moves from the start complex; valid iff every move fills an
/// inner horn whose other faces are present and the result is the whole
/// ambient complex.
pub fn verify_certificate(cert: &Certificate) -> Verification {
    let x = &cert.ambient;
    let total = cert.moves.len();
    let mut present: Vec<Vec<bool>> = (0..=x.max_dim()).map(|d| vec![false; x.count(d)]).collect();
    for &(d, i) in &cert.start {
        if d > x.max_dim() || i >= x.count(d) {
            return Verification::fail(total, None, format!("start cell {d}:{i} out of range"));
        }
        present[d][i] = true;
    }
    let has = |p: &Vec<Vec<bool>>, s: &Simplex| p[s.k][s.core];
    for d in 1..=x.max_dim() {
        for i in 0..x.count(d) {
            if present[d][i] {
                if let Some(f) = x.faces(d, i).iter().find(|f| !has(&present, f)) {
                    return Verification::fail(
                        total,
                        None,
                        format!("start is not face-closed: {} lacks {}", describe(x, d, i), describe(x, f.k, f.core)),
                    );
                }
            }
        }
    }
    for (n, mv) in cert.moves.iter().enumerate() {
        let Some((d, i)) = x.cell_by_vertices(&mv.vertices) else {
            return Verification::fail(total, Some(n), format!("{:?} is not a simplex", mv.vertices));
        };
        if d != mv.m || mv.m < 2 {
            return Verification::fail(total, Some(n), format!("dimension {} declared, simplex has {d}", mv.m));
        }
        if mv.k == 0 || mv.k >= mv.m {
            return Verification::fail(total, Some(n), format!("horn index {} is not inner in dimension {}", mv.k, mv.m));
        }
        if present[d][i] {
            return Verification::fail(total, Some(n), format!("{} already present", describe(x, d, i)));
        }
        let faces = x.faces(d, i);
        let open = &faces[mv.k];
        if open.is_degenerate() || present[open.k][open.core] {
            return Verification::fail(total, Some(n), format!("face {} is degenerate or present", mv.k));
        }
        for (j, f) in faces.iter().enumerate() {
            if j != mv.k && !has(&present, f) {
                return Verification::fail(total, Some(n), format!("missing face d{j} = {}", describe(x, f.k, f.core)));
            }
        }
        present[d][i] = true;
        present[open.k][open.core] = true;
    }
    for d in 0..=x.max_dim() {
        if let Some(i) = present[d].iter().position(|&p| !p) {
            return Verification::fail(total, None, format!("{} never added", describe(x, d, i)));
        }
    }
    Verification { valid: true, failed_move: None, reason: None, moves: total }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{start_from_vertex_sets, Move};
    use crate::simplicial::simplex;

    fn horn21() -> Certificate {
        let x = simplex(2, 2);
        let start = start_from_vertex_sets(&x, &[vec![0, 1], vec![1, 2]]).unwrap();
        Certificate { ambient: x, start, moves: Vec::new() }
    }

    #[test]
    fn trivial_and_single_move() {
        let x = simplex(2, 2);
        let all = start_from_vertex_sets(&x, &[vec![0, 1, 2]]).unwrap();
        assert!(verify_certificate(&Certificate { ambient: x, start: all, moves: vec![] }).valid);
        let mut c = horn21();
        c.moves.push(Move { m: 2, k: 1, vertices: vec![0, 1, 2], stage: 0 });
        assert!(verify_certificate(&c).valid);
    }

    #[test]
    fn outer_horn_rejected() {
        let mut c = horn21();
        c.moves.push(Move { m: 2, k: 0, vertices: vec![0, 1, 2], stage: 0 });
        let v = verify_certificate(&c);
        assert!(!v.valid);
        assert_eq!(v.failed_move, Some(0));
    }

    #[test]
    fn incomplete_and_missing_face() {
        let c = horn21();
        assert!(!verify_certificate(&c).valid);
        let x = simplex(2, 2);
        let start = start_from_vertex_sets(&x, &[vec![0, 1], vec![2]]).unwrap();
        let c = Certificate { ambient: x, start, moves: vec![Move { m: 2, k: 1, vertices: vec![0, 1, 2], stage: 0 }] };
        let v = verify_certificate(&c);
        assert!(v.reason.unwrap().contains("missing face d0"));
    }
}
