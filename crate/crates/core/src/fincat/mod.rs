//! Finite categories given by a total composition table.

mod classes;
mod filtered;
mod limits;

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::FinPoset;

pub use classes::{
    class_properties, factorization_check, ClassReport, EdgeClass, FactorizationReport,
};
pub(crate) use classes::{composition_witness, identity_witness, pullback_witness};
pub use filtered::{is_filtered, FilteredReport};
pub use limits::{ConeFactorization, PullbackCone, Square};

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("duplicate object {0}")]
    DuplicateObject(String),
    #[error("duplicate morphism {0}")]
    DuplicateMorphism(String),
    #[error("morphism {0} has unknown source {1}")]
    DanglingSource(String, String),
    #[error("morphism {0} has unknown target {1}")]
    DanglingTarget(String, String),
    #[error("{0} is declared as an identity but is not an endomorphism")]
    BadIdentity(String),
    #[error("unknown morphism {0}")]
    UnknownMorphism(String),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown class {0}")]
    UnknownClass(String),
    #[error("({0}, {1}) is not composable")]
    NotComposable(String, String),
    #[error("composite {0}∘{1} = {2} has the wrong endpoints")]
    CompositeEndpoints(String, String, String),
    #[error("conflicting composites for ({0}, {1}): {2} and {3}")]
    ConflictingComposite(String, String, String, String),
    #[error("missing composite for ({0}, {1})")]
    MissingComposite(String, String),
    #[error("identity law fails for {0}")]
    IdentityLaw(String),
    #[error("associativity violated for ({0}, {1}, {2}): {0}∘({1}∘{2}) = {3} but ({0}∘{1})∘{2} = {4}")]
    Associativity(String, String, String, String, String),
    #[error("square does not commute: {0}")]
    NotCommuting(String),
    #[error("no pullback of ({0}, {1}): {2}")]
    NoPullback(String, String, String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// Wire format of a category.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    #[serde(default)]
    pub classes: BTreeMap<String, Vec<String>>,
    /// Optional nested chain `E'_0 ⊆ ... ⊆ E'_m` used by the gluing checker.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// A validated finite category. Identities are named `id_<object>`.
#[derive(Debug)]
pub struct FinCat {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identity: Vec<usize>,
    compose: Vec<u32>,
    hom: Vec<Vec<usize>>,
    classes: BTreeMap<String, Vec<usize>>,
    chain: Option<Vec<Vec<usize>>>,
    pullbacks: OnceLock<Vec<OnceLock<Result<PullbackCone, CatError>>>>,
    all_pullbacks: OnceLock<Option<(usize, usize)>>,
}

impl Clone for FinCat {
    fn clone(&self) -> FinCat {
        FinCat {
            name: self.name.clone(),
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            identity: self.identity.clone(),
            compose: self.compose.clone(),
            hom: self.hom.clone(),
            classes: self.classes.clone(),
            chain: self.chain.clone(),
            pullbacks: OnceLock::new(),
            all_pullbacks: OnceLock::new(),
        }
    }
}

fn identity_name(object: &str) -> String {
    format!("id_{object}")
}

/// Parses and validates a category document.
pub fn validate_category(doc: &CategoryDoc) -> Result<FinCat, CatError> {
    let mut obj_index = HashMap::new();
    for (i, o) in doc.objects.iter().enumerate() {
        if obj_index.insert(o.as_str(), i).is_some() {
            return Err(CatError::DuplicateObject(o.clone()));
        }
    }
    let mut morphisms: Vec<Morphism> = Vec::new();
    let mut identity = vec![usize::MAX; doc.objects.len()];
    let mut mor_index: HashMap<String, usize> = HashMap::new();
    for m in &doc.morphisms {
        let src = *obj_index
            .get(m.src.as_str())
            .ok_or_else(|| CatError::DanglingSource(m.id.clone(), m.src.clone()))?;
        let dst = *obj_index
            .get(m.dst.as_str())
            .ok_or_else(|| CatError::DanglingTarget(m.id.clone(), m.dst.clone()))?;
        if mor_index.insert(m.id.clone(), morphisms.len()).is_some() {
            return Err(CatError::DuplicateMorphism(m.id.clone()));
        }
        if let Some(o) = m.id.strip_prefix("id_").and_then(|o| obj_index.get(o)) {
            if src != *o || dst != *o {
                return Err(CatError::BadIdentity(m.id.clone()));
            }
            identity[*o] = morphisms.len();
        }
        morphisms.push(Morphism { name: m.id.clone(), src, dst });
    }
    for (o, name) in doc.objects.iter().enumerate() {
        if identity[o] == usize::MAX {
            let id = identity_name(name);
            if mor_index.contains_key(&id) {
                return Err(CatError::DuplicateMorphism(id));
            }
            identity[o] = morphisms.len();
            mor_index.insert(id.clone(), morphisms.len());
            morphisms.push(Morphism { name: id, src: o, dst: o });
        }
    }
    let m = morphisms.len();
    let lookup = |name: &str| {
        mor_index
            .get(name)
            .copied()
            .ok_or_else(|| CatError::UnknownMorphism(name.to_string()))
    };
    let mut compose = vec![NONE; m * m];
    let is_id = |x: usize| identity[morphisms[x].src] == x;
    for x in 0..m {
        compose[identity[morphisms[x].dst] * m + x] = x as u32;
        compose[x * m + identity[morphisms[x].src]] = x as u32;
    }
    for [g, f, gf] in &doc.compose {
        let (gi, fi, ci) = (lookup(g)?, lookup(f)?, lookup(gf)?);
        if morphisms[gi].src != morphisms[fi].dst {
            return Err(CatError::NotComposable(g.clone(), f.clone()));
        }
        if morphisms[ci].src != morphisms[fi].src || morphisms[ci].dst != morphisms[gi].dst {
            return Err(CatError::CompositeEndpoints(g.clone(), f.clone(), gf.clone()));
        }
        let slot = &mut compose[gi * m + fi];
        if *slot != NONE && *slot as usize != ci {
            return Err(CatError::ConflictingComposite(
                g.clone(),
                f.clone(),
                morphisms[*slot as usize].name.clone(),
                gf.clone(),
            ));
        }
        *slot = ci as u32;
    }
    for g in 0..m {
        for f in 0..m {
            if morphisms[g].src == morphisms[f].dst
                && compose[g * m + f] == NONE
                && !is_id(g)
                && !is_id(f)
            {
                return Err(CatError::MissingComposite(
                    morphisms[g].name.clone(),
                    morphisms[f].name.clone(),
                ));
            }
        }
    }
    let mut cat = FinCat::from_parts(
        doc.name.clone().unwrap_or_else(|| "C".to_string()),
        doc.objects.clone(),
        morphisms,
        identity,
        compose,
    )?;
    for (name, members) in &doc.classes {
        let ids = members.iter().map(|x| lookup(x)).collect::<Result<Vec<_>, _>>()?;
        cat.classes.insert(name.clone(), ids);
    }
    if let Some(chain) = &doc.chain {
        let mut out = Vec::new();
        for level in chain {
            out.push(level.iter().map(|x| lookup(x)).collect::<Result<Vec<_>, _>>()?);
        }
        cat.chain = Some(out);
    }
    Ok(cat)
}

impl FinCat {
    /// Checks unit laws and associativity of a total table.
    pub fn from_parts(
        name: String,
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<usize>,
        compose: Vec<u32>,
    ) -> Result<FinCat, CatError> {
        let m = morphisms.len();
        let mut hom = vec![Vec::new(); objects.len() * objects.len()];
        for (i, mor) in morphisms.iter().enumerate() {
            hom[mor.src * objects.len() + mor.dst].push(i);
        }
        let cat = FinCat {
            name,
            objects,
            morphisms,
            identity,
            compose,
            hom,
            classes: BTreeMap::new(),
            chain: None,
            pullbacks: OnceLock::new(),
            all_pullbacks: OnceLock::new(),
        };
        let nm = |x: usize| cat.morphisms[x].name.clone();
        for x in 0..m {
            let (s, d) = (cat.morphisms[x].src, cat.morphisms[x].dst);
            if cat.compose(cat.identity[d], x) != Some(x) || cat.compose(x, cat.identity[s]) != Some(x) {
                return Err(CatError::IdentityLaw(nm(x)));
            }
        }
        for g in 0..m {
            for f in 0..m {
                if cat.morphisms[g].src != cat.morphisms[f].dst {
                    continue;
                }
                let gf = match cat.compose(g, f) {
                    Some(gf) => gf,
                    None => return Err(CatError::MissingComposite(nm(g), nm(f))),
                };
                if cat.morphisms[gf].src != cat.morphisms[f].src
                    || cat.morphisms[gf].dst != cat.morphisms[g].dst
                {
                    return Err(CatError::CompositeEndpoints(nm(g), nm(f), nm(gf)));
                }
            }
        }
        let mut into = vec![Vec::new(); cat.objects.len()];
        for x in 0..m {
            into[cat.morphisms[x].dst].push(x);
        }
        for g in 0..m {
            for f in 0..m {
                let Some(gf) = cat.compose(g, f) else { continue };
                for &h in &into[cat.morphisms[f].src] {
                    let left = cat.compose(g, cat.compose(f, h).unwrap()).unwrap();
                    let right = cat.compose(gf, h).unwrap();
                    if left != right {
                        return Err(CatError::Associativity(
                            nm(g),
                            nm(f),
                            nm(h),
                            nm(left),
                            nm(right),
                        ));
                    }
                }
            }
        }
        Ok(cat)
    }

    /// A poset as a thin category; `a <= b` gives the morphism `a->b`.
    pub fn from_poset(p: &FinPoset) -> FinCat {
        let n = p.len();
        let mut morphisms = Vec::new();
        let mut index = vec![usize::MAX; n * n];
        let mut identity = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if p.leq(a, b) {
                    index[a * n + b] = morphisms.len();
                    let name = if a == b {
                        identity[a] = morphisms.len();
                        identity_name(p.label(a))
                    } else {
                        format!("{}->{}", p.label(a), p.label(b))
                    };
                    morphisms.push(Morphism { name, src: a, dst: b });
                }
            }
        }
        let m = morphisms.len();
        let mut compose = vec![NONE; m * m];
        for g in 0..m {
            for f in 0..m {
                if morphisms[g].src == morphisms[f].dst {
                    compose[g * m + f] = index[morphisms[f].src * n + morphisms[g].dst] as u32;
                }
            }
        }
        FinCat::from_parts("poset".into(), p.labels().to_vec(), morphisms, identity, compose)
            .expect("posets are categories")
    }

    /// Same objects, reversed morphisms; classes and chain carry over.
    pub fn opposite(&self) -> FinCat {
        let m = self.morphisms.len();
        let morphisms = self
            .morphisms
            .iter()
            .map(|x| Morphism { name: x.name.clone(), src: x.dst, dst: x.src })
            .collect();
        let mut compose = vec![NONE; m * m];
        for g in 0..m {
            for f in 0..m {
                compose[g * m + f] = self.compose[f * m + g];
            }
        }
        let mut op = FinCat::from_parts(
            format!("{}^op", self.name),
            self.objects.clone(),
            morphisms,
            self.identity.clone(),
            compose,
        )
        .expect("opposite of a category");
        op.classes = self.classes.clone();
        op.chain = self.chain.clone();
        op
    }

    pub fn to_doc(&self) -> CategoryDoc {
        let nm = |x: usize| self.morphisms[x].name.clone();
        let mut compose = Vec::new();
        for g in 0..self.morphisms.len() {
            for f in 0..self.morphisms.len() {
                if let Some(gf) = self.compose(g, f) {
                    if !self.is_identity(g) && !self.is_identity(f) {
                        compose.push([nm(g), nm(f), nm(gf)]);
                    }
                }
            }
        }
        CategoryDoc {
            name: Some(self.name.clone()),
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .filter(|x| self.identity[x.src] != self.index_of(&x.name).unwrap())
                .map(|x| MorphismDoc {
                    id: x.name.clone(),
                    src: self.objects[x.src].clone(),
                    dst: self.objects[x.dst].clone(),
                })
                .collect(),
            compose,
            classes: self
                .classes
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(|&x| nm(x)).collect()))
                .collect(),
            chain: self
                .chain
                .as_ref()
                .map(|c| c.iter().map(|l| l.iter().map(|&x| nm(x)).collect()).collect()),
        }
    }

    pub fn from_json(text: &str) -> Result<FinCat, CatError> {
        let doc: CategoryDoc =
            serde_json::from_str(text).map_err(|e| CatError::Json(e.to_string()))?;
        validate_category(&doc)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism(&self, x: usize) -> &Morphism {
        &self.morphisms[x]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn name_of(&self, x: usize) -> &str {
        &self.morphisms[x].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn lookup(&self, name: &str) -> Result<usize, CatError> {
        self.index_of(name).ok_or_else(|| CatError::UnknownMorphism(name.to_string()))
    }

    #[inline]
    pub fn src(&self, x: usize) -> usize {
        self.morphisms[x].src
    }

    #[inline]
    pub fn dst(&self, x: usize) -> usize {
        self.morphisms[x].dst
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    pub fn is_identity(&self, x: usize) -> bool {
        self.identity[self.src(x)] == x
    }

    /// `g ∘ f`, when `dst(f) = src(g)`.
    #[inline]
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        match self.compose[g * self.morphisms.len() + f] {
            NONE => None,
            c => Some(c as usize),
        }
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.hom[a * self.objects.len() + b]
    }

    pub fn inverse(&self, x: usize) -> Option<usize> {
        self.hom(self.dst(x), self.src(x)).iter().copied().find(|&y| {
            self.compose(y, x) == Some(self.identity(self.src(x)))
                && self.compose(x, y) == Some(self.identity(self.dst(x)))
        })
    }

    pub fn is_iso(&self, x: usize) -> bool {
        self.inverse(x).is_some()
    }

    /// Left-cancellable: `x∘a = x∘b` forces `a = b`.
    pub fn is_mono(&self, x: usize) -> bool {
        (0..self.objects.len()).all(|w| {
            let maps = self.hom(w, self.src(x));
            maps.iter().enumerate().all(|(i, &a)| {
                maps[i + 1..].iter().all(|&b| self.compose(x, a) != self.compose(x, b))
            })
        })
    }

    pub fn declared_class(&self, name: &str) -> Option<&[usize]> {
        self.classes.get(name).map(|v| v.as_slice())
    }

    pub fn class_names(&self) -> Vec<&str> {
        self.classes.keys().map(|k| k.as_str()).collect()
    }

    pub fn declared_chain(&self) -> Option<&[Vec<usize>]> {
        self.chain.as_deref()
    }

    /// Objects with exactly one morphism to every object.
    pub fn initial_objects(&self) -> Vec<usize> {
        (0..self.objects.len())
            .filter(|&a| (0..self.objects.len()).all(|b| self.hom(a, b).len() == 1))
            .collect()
    }

    pub fn terminal_objects(&self) -> Vec<usize> {
        (0..self.objects.len())
            .filter(|&b| (0..self.objects.len()).all(|a| self.hom(a, b).len() == 1))
            .collect()
    }
}
