use std::collections::HashSet;

use serde::Serialize;

use super::grid::{GridFunctor, RestrictedNerve};
use super::NerveError;
use crate::caps::Caps;
use crate::fincat::FinCat;

/// The partial diagonal of a grid functor in its first two directions:
/// `F'(t, rest) = F(t, t, rest)`.
///
/// The new first-direction edge at `t` is `p ∘ q` with `q` the second-direction
/// edge at `(t, t)` and `p` the first-direction edge at `(t, t + 1)`.
pub fn gluing_map(c: &FinCat, sigma: &GridFunctor) -> Result<GridFunctor, NerveError> {
    if sigma.arity() < 2 {
        return Err(NerveError::Shape(format!("gluing needs 2 directions, got {}", sigma.arity())));
    }
    if sigma.twist[0] || sigma.twist[1] {
        return Err(NerveError::Twist("the first two directions must be untwisted".into()));
    }
    if sigma.shape[0] != sigma.shape[1] {
        return Err(NerveError::Shape(format!("first two directions differ: {:?}", sigma.shape)));
    }
    let mut shape = vec![sigma.shape[0]];
    shape.extend_from_slice(&sigma.shape[2..]);
    let mut twist = vec![false];
    twist.extend_from_slice(&sigma.twist[2..]);
    let k = shape.len();
    let mut out = GridFunctor { shape, twist, objects: Vec::new(), edges: Vec::new() };
    let total = out.num_points();
    out.edges = vec![vec![usize::MAX; total]; k];
    for p in 0..total {
        let co = out.coords(p);
        let t = co[0];
        let mut src = vec![t, t];
        src.extend_from_slice(&co[1..]);
        out.objects.push(sigma.object_at(&src));
        if t < out.shape[0] {
            let q = sigma.edge(1, &src);
            let mut up = src.clone();
            up[1] += 1;
            let e = sigma.edge(0, &up);
            out.edges[0][p] = c
                .compose(e, q)
                .ok_or_else(|| NerveError::NotAFunctor(format!("edges at {src:?} do not compose")))?;
        }
        for i in 1..k {
            if co[i] < out.shape[i] {
                out.edges[i][p] = sigma.edge(i + 1, &src);
            }
        }
    }
    Ok(out)
}

/// Outcome of [`check_gluing_map`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct GluingReport {
    /// Source simplices per diagonal dimension.
    pub checked: Vec<usize>,
    /// Operator identities tested.
    pub operators: usize,
    pub vertex_bijection: bool,
    pub lands_in_target: bool,
    pub commutes: bool,
    pub first_violation: Option<String>,
}

impl GluingReport {
    pub fn pass(&self) -> bool {
        self.vertex_bijection && self.lands_in_target && self.commutes
    }
}

/// Checks that the gluing map sends diagonal simplices of `source` to
/// simplices of `target`, commutes with every face and degeneracy through
/// dimension `n_max`, and is bijective on vertices.
pub fn check_gluing_map(
    source: &RestrictedNerve,
    target: &RestrictedNerve,
    n_max: usize,
    caps: &Caps,
) -> Result<GluingReport, NerveError> {
    let c = source.category;
    if target.arity() + 1 != source.arity() {
        return Err(NerveError::Shape(format!(
            "target has {} directions, source {}",
            target.arity(),
            source.arity()
        )));
    }
    let mut report = GluingReport { lands_in_target: true, commutes: true, ..GluingReport::default() };
    let note = |r: &mut GluingReport, msg: String| {
        if r.first_violation.is_none() {
            r.first_violation = Some(msg);
        }
    };
    for n in 0..=n_max {
        let simplices = source.diagonal_simplices(n, caps)?;
        report.checked.push(simplices.len());
        if n == 0 {
            let images: HashSet<GridFunctor> =
                simplices.iter().map(|s| gluing_map(c, s)).collect::<Result<_, _>>()?;
            let vertices: HashSet<GridFunctor> = target.diagonal_simplices(0, caps)?.into_iter().collect();
            report.vertex_bijection = images.len() == simplices.len() && images == vertices;
            if !report.vertex_bijection {
                note(&mut report, "not bijective on vertices".into());
            }
        }
        for s in &simplices {
            let g = gluing_map(c, s)?;
            if !target.contains(&g) {
                report.lands_in_target = false;
                note(&mut report, format!("image of {} is not in the target", s.describe(c)));
            }
            for (op, theta) in operators(n) {
                report.operators += 1;
                let lhs = gluing_map(c, &s.restrict_diagonal(c, &theta))?;
                let rhs = g.restrict_diagonal(c, &theta);
                if lhs != rhs {
                    report.commutes = false;
                    note(&mut report, format!("{op} on {}", s.describe(c)));
                }
            }
        }
    }
    Ok(report)
}

/// Faces `d_i` (for `n > 0`) and degeneracies `s_j` as monotone maps.
fn operators(n: usize) -> Vec<(String, Vec<usize>)> {
    let mut out = Vec::new();
    if n > 0 {
        for i in 0..=n {
            out.push((format!("d{i}"), (0..n).map(|t| if t < i { t } else { t + 1 }).collect()));
        }
    }
    for j in 0..=n {
        out.push((format!("s{j}"), (0..=n + 1).map(|t| if t <= j { t } else { t - 1 }).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::EdgeClass;
    use crate::toys;

    #[test]
    fn square_goes_to_its_diagonal() {
        let c = toys::load("cube_z2").unwrap();
        let all = EdgeClass::all(&c);
        let nerve = RestrictedNerve::cartesian(&c, vec![all.clone(), all], &[]).unwrap();
        let squares = nerve.diagonal_simplices(1, &Caps::default()).unwrap();
        let mut proper = 0;
        for s in &squares {
            let sq = s.unit_square(0, 1, &[0, 0]);
            let d = gluing_map(&c, s).unwrap().edges[0][0];
            assert_eq!(Some(d), c.compose(sq.right, sq.top));
            proper += usize::from(!c.is_identity(sq.top) && !c.is_identity(sq.right));
        }
        assert!(proper > 0);
    }

    #[test]
    fn toy_gluing_is_simplicial() {
        let c = toys::load("toy2").unwrap();
        let e0 = EdgeClass::named(&c, "E0").unwrap();
        let e1 = EdgeClass::named(&c, "E1").unwrap();
        let e2 = EdgeClass::named(&c, "E2").unwrap();
        let src = RestrictedNerve::cartesian(&c, vec![e1, e2], &[]).unwrap();
        let tgt = RestrictedNerve::cartesian(&c, vec![e0], &[]).unwrap();
        let r = check_gluing_map(&src, &tgt, 2, &Caps::default()).unwrap();
        assert!(r.pass(), "{:?}", r.first_violation);
        assert_eq!(r.checked[0], c.object_count());
    }

    #[test]
    fn third_direction_is_carried() {
        let c = toys::load("cube_z2").unwrap();
        let all = EdgeClass::all(&c);
        let src = RestrictedNerve::cartesian(&c, vec![all.clone(), all.clone(), all.clone()], &[2]).unwrap();
        let tgt = RestrictedNerve::cartesian(&c, vec![all.clone(), all], &[1]).unwrap();
        let s = src.diagonal_simplices(1, &Caps::default()).unwrap();
        let g = gluing_map(&c, &s[s.len() / 2]).unwrap();
        assert!(tgt.contains(&g));
        assert_eq!(g.edges[1][0], s[s.len() / 2].edges[2][0]);
    }

    #[test]
    fn rejects_twisted_first_directions() {
        let c = toys::load("toy1").unwrap();
        let g = GridFunctor { shape: vec![0, 0], twist: vec![true, false], objects: vec![0], edges: vec![vec![usize::MAX]; 2] };
        assert!(matches!(gluing_map(&c, &g), Err(NerveError::Twist(_))));
    }
}
