use std::collections::HashMap;

use serde::Serialize;

use super::NerveError;
use crate::caps::Caps;
use crate::fincat::{composition_witness, identity_witness, EdgeClass, FinCat, Morphism, NONE};

/// An `n`-simplex of the nerve: objects `x_0, ..., x_n` and maps `x_i -> x_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl Chain {
    pub fn object(o: usize) -> Chain {
        Chain { objects: vec![o], morphisms: Vec::new() }
    }

    pub fn from_morphisms(c: &FinCat, morphisms: &[usize]) -> Result<Chain, NerveError> {
        let Some(&first) = morphisms.first() else {
            return Err(NerveError::Shape("empty chain".into()));
        };
        let mut objects = vec![c.src(first)];
        for &f in morphisms {
            if c.src(f) != *objects.last().unwrap() {
                return Err(NerveError::Shape(format!("{} does not continue the chain", c.name_of(f))));
            }
            objects.push(c.dst(f));
        }
        Ok(Chain { objects, morphisms: morphisms.to_vec() })
    }

    /// Comma-separated morphism names, or a single object name.
    pub fn parse(c: &FinCat, spec: &str) -> Result<Chain, NerveError> {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        if parts.len() == 1 {
            if let Some(o) = c.object_index(parts[0]) {
                return Ok(Chain::object(o));
            }
        }
        let ids = parts.iter().map(|p| c.lookup(p)).collect::<Result<Vec<_>, _>>()?;
        Chain::from_morphisms(c, &ids)
    }

    pub fn n(&self) -> usize {
        self.morphisms.len()
    }
}

/// Points `(i, j)`, `0 <= i <= j <= n`, listed row by row.
#[derive(Clone, Debug)]
pub struct RcptPoints {
    pub n: usize,
    pub points: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl RcptPoints {
    pub fn new(n: usize) -> RcptPoints {
        let points: Vec<(usize, usize)> = (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
        let index = points.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        RcptPoints { n, points, index }
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        self.index[&(i, j)]
    }
}

/// A functor `RCpt^n -> C` by its unit edges. `vertical[k]` runs
/// `(i, j) -> (i + 1, j)` and `horizontal[k]` runs `(i, j) -> (i, j + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RcptFunctor {
    pub objects: Vec<usize>,
    pub vertical: Vec<usize>,
    pub horizontal: Vec<usize>,
}

/// The category `Komp^α(σ)` of a nerve.
///
/// A morphism `F -> F'` has components `F(i, j) -> F'(i, j)` in `E_α` and
/// identities on the diagonal.
#[derive(Clone, Debug)]
pub struct KompCat {
    pub sigma: Chain,
    pub alpha: usize,
    pub points: RcptPoints,
    pub functors: Vec<RcptFunctor>,
    /// Components of each morphism of `category`, by point.
    pub components: Vec<Vec<usize>>,
    pub category: FinCat,
}

pub const KOMP_ORIENTATION: &str =
    "objects: RCpt^n -> C, (i,j)->(i+1,j) in E1, (i,j)->(i,j+1) in E2; morphisms: components F(i,j) -> F'(i,j) in E_alpha, identities on the diagonal";

pub fn komp_category(
    c: &FinCat,
    e1: &EdgeClass,
    e2: &EdgeClass,
    sigma: &Chain,
    alpha: usize,
    caps: &Caps,
) -> Result<KompCat, NerveError> {
    for e in [e1, e2] {
        if let Some(w) = identity_witness(c, e) {
            return Err(NerveError::Marking(format!("{} misses identity {w}", e.name())));
        }
    }
    let ea = match alpha {
        1 => e1,
        2 => e2,
        _ => return Err(NerveError::Shape(format!("alpha must be 1 or 2, got {alpha}"))),
    };
    if let Some(w) = composition_witness(c, ea) {
        return Err(NerveError::NotCompositionStable { class: ea.name().to_string(), witness: w });
    }
    let n = sigma.n();
    let pts = RcptPoints::new(n);
    let functors = enumerate_functors(c, e1, e2, sigma, &pts, caps)?;
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut ends: Vec<(usize, usize)> = Vec::new();
    let mut identity = vec![0; functors.len()];
    for (a, fa) in functors.iter().enumerate() {
        for (b, fb) in functors.iter().enumerate() {
            for comp in transformations(c, ea, fa, fb, &pts) {
                if a == b && comp.iter().all(|&x| c.is_identity(x)) {
                    identity[a] = components.len();
                }
                components.push(comp);
                ends.push((a, b));
            }
        }
    }
    // components alone do not fix the edges of the endpoints
    let lookup: HashMap<(usize, usize, &[usize]), usize> =
        components.iter().enumerate().map(|(k, v)| ((ends[k].0, ends[k].1, v.as_slice()), k)).collect();
    let m = components.len();
    let mut table = vec![NONE; m * m];
    for g in 0..m {
        for f in 0..m {
            if ends[f].1 != ends[g].0 {
                continue;
            }
            let comp: Vec<usize> = components[g]
                .iter()
                .zip(&components[f])
                .map(|(&y, &x)| c.compose(y, x).expect("components compose"))
                .collect();
            let gf = *lookup.get(&(ends[f].0, ends[g].1, comp.as_slice())).ok_or_else(|| {
                NerveError::NotCompositionStable { class: ea.name().to_string(), witness: "composite transformation".into() }
            })?;
            table[g * m + f] = gf as u32;
        }
    }
    let objects: Vec<String> = (0..functors.len()).map(|a| format!("F{a}")).collect();
    let morphisms: Vec<Morphism> = (0..m)
        .map(|k| {
            let (a, b) = ends[k];
            let name = if identity[a] == k && a == b {
                format!("id_F{a}")
            } else {
                let parts: Vec<&str> = components[k].iter().map(|&x| c.name_of(x)).collect();
                format!("F{a}->F{b}[{}]", parts.join(","))
            };
            Morphism { name, src: a, dst: b }
        })
        .collect();
    let category = FinCat::from_parts(format!("Komp{alpha}"), objects, morphisms, identity, table)?;
    Ok(KompCat { sigma: sigma.clone(), alpha, points: pts, functors, components, category })
}

fn enumerate_functors(
    c: &FinCat,
    e1: &EdgeClass,
    e2: &EdgeClass,
    sigma: &Chain,
    pts: &RcptPoints,
    caps: &Caps,
) -> Result<Vec<RcptFunctor>, NerveError> {
    let size = pts.points.len();
    let mut f = RcptFunctor { objects: vec![NONE as usize; size], vertical: vec![NONE as usize; size], horizontal: vec![NONE as usize; size] };
    let mut out = Vec::new();
    let mut over = false;
    walk(c, e1, e2, sigma, pts, 0, &mut f, &mut |g| {
        if out.len() == caps.komp_objects {
            over = true;
            return false;
        }
        out.push(g.clone());
        true
    });
    if over {
        return Err(NerveError::Cap { what: "Komp objects", got: caps.komp_objects + 1, cap: caps.komp_objects });
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    c: &FinCat,
    e1: &EdgeClass,
    e2: &EdgeClass,
    sigma: &Chain,
    pts: &RcptPoints,
    k: usize,
    f: &mut RcptFunctor,
    visit: &mut dyn FnMut(&RcptFunctor) -> bool,
) -> bool {
    if k == pts.points.len() {
        return visit(f);
    }
    let (i, j) = pts.points[k];
    if i == j {
        f.objects[k] = sigma.objects[i];
        if i == 0 {
            return walk(c, e1, e2, sigma, pts, k + 1, f, visit);
        }
        // (i-1,i-1) -> (i-1,i) -> (i,i) composes to σ_{i-1}
        let up = pts.index(i - 1, i);
        let q = f.horizontal[pts.index(i - 1, i - 1)];
        for &p in c.hom(f.objects[up], f.objects[k]) {
            if e1.contains(p) && c.compose(p, q) == Some(sigma.morphisms[i - 1]) {
                f.vertical[up] = p;
                if !walk(c, e1, e2, sigma, pts, k + 1, f, visit) {
                    return false;
                }
            }
        }
        return true;
    }
    let left = pts.index(i, j - 1);
    let from = f.objects[left];
    for h in e2.members() {
        if c.src(h) != from {
            continue;
        }
        f.horizontal[left] = h;
        f.objects[k] = c.dst(h);
        if i == 0 {
            if !walk(c, e1, e2, sigma, pts, k + 1, f, visit) {
                return false;
            }
            continue;
        }
        let up = pts.index(i - 1, j);
        let corner = pts.index(i - 1, j - 1);
        let top = f.horizontal[corner];
        let lft = f.vertical[corner];
        let path = c.compose(h, lft);
        for &v in c.hom(f.objects[up], f.objects[k]) {
            if e1.contains(v) && c.compose(v, top) == path {
                f.vertical[up] = v;
                if !walk(c, e1, e2, sigma, pts, k + 1, f, visit) {
                    return false;
                }
            }
        }
    }
    true
}

/// Natural transformations `fa -> fb` with components in `ea`, identities on
/// the diagonal.
fn transformations(c: &FinCat, ea: &EdgeClass, fa: &RcptFunctor, fb: &RcptFunctor, pts: &RcptPoints) -> Vec<Vec<usize>> {
    let size = pts.points.len();
    let mut out = Vec::new();
    let mut comp = vec![0usize; size];
    fn go(
        c: &FinCat,
        ea: &EdgeClass,
        fa: &RcptFunctor,
        fb: &RcptFunctor,
        pts: &RcptPoints,
        k: usize,
        comp: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == pts.points.len() {
            out.push(comp.clone());
            return;
        }
        let (i, j) = pts.points[k];
        let cands: Vec<usize> = if i == j {
            if fa.objects[k] != fb.objects[k] {
                return;
            }
            vec![c.identity(fa.objects[k])]
        } else {
            c.hom(fa.objects[k], fb.objects[k]).iter().copied().filter(|&x| ea.contains(x)).collect()
        };
        for eta in cands {
            // naturality on edges into (i, j)
            let mut ok = true;
            if j > i {
                let l = pts.index(i, j - 1);
                ok &= c.compose(eta, fa.horizontal[l]) == c.compose(fb.horizontal[l], comp[l]);
            }
            if i > 0 {
                let u = pts.index(i - 1, j);
                ok &= c.compose(eta, fa.vertical[u]) == c.compose(fb.vertical[u], comp[u]);
            }
            if ok {
                comp[k] = eta;
                go(c, ea, fa, fb, pts, k + 1, comp, out);
            }
        }
    }
    go(c, ea, fa, fb, pts, 0, &mut comp, &mut out);
    out
}
