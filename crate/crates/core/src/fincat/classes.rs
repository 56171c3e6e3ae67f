use serde::Serialize;

use super::{CatError, FinCat};
use crate::report::Check;

/// A set of morphisms of a fixed category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    name: String,
    members: Vec<bool>,
}

impl EdgeClass {
    /// Exactly the given morphisms, without adding identities.
    pub fn from_raw(name: impl Into<String>, c: &FinCat, members: &[usize]) -> EdgeClass {
        let mut bits = vec![false; c.morphism_count()];
        for &x in members {
            bits[x] = true;
        }
        EdgeClass { name: name.into(), members: bits }
    }

    /// The given morphisms together with every identity.
    pub fn from_indices(name: impl Into<String>, c: &FinCat, members: &[usize]) -> EdgeClass {
        let mut class = EdgeClass::from_raw(name, c, members);
        for o in 0..c.object_count() {
            class.members[c.identity(o)] = true;
        }
        class
    }

    pub fn from_names(name: impl Into<String>, c: &FinCat, names: &[&str]) -> Result<EdgeClass, CatError> {
        let ids = names.iter().map(|n| c.lookup(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(EdgeClass::from_indices(name, c, &ids))
    }

    pub fn from_predicate(name: impl Into<String>, c: &FinCat, keep: impl Fn(usize) -> bool) -> EdgeClass {
        EdgeClass {
            name: name.into(),
            members: (0..c.morphism_count()).map(keep).collect(),
        }
    }

    /// A class declared in the category document, plus identities.
    ///
    /// `ALL`, `ISO` and `ID` name the obvious classes.
    pub fn named(c: &FinCat, name: &str) -> Result<EdgeClass, CatError> {
        match name {
            "ALL" => Ok(EdgeClass::all(c)),
            "ISO" => Ok(EdgeClass::isos(c)),
            "ID" => Ok(EdgeClass::identities(c)),
            _ => {
                let ids = c
                    .declared_class(name)
                    .ok_or_else(|| CatError::UnknownClass(name.to_string()))?;
                Ok(EdgeClass::from_indices(name, c, ids))
            }
        }
    }

    pub fn all(c: &FinCat) -> EdgeClass {
        EdgeClass::from_predicate("ALL", c, |_| true)
    }

    pub fn isos(c: &FinCat) -> EdgeClass {
        EdgeClass::from_predicate("ISO", c, |x| c.is_iso(x))
    }

    pub fn identities(c: &FinCat) -> EdgeClass {
        EdgeClass::from_predicate("ID", c, |x| c.is_identity(x))
    }

    pub fn monos(c: &FinCat) -> EdgeClass {
        EdgeClass::from_predicate("MONO", c, |x| c.is_mono(x))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of morphisms of the ambient category.
    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn renamed(mut self, name: impl Into<String>) -> EdgeClass {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.members[x]
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&x| self.members[x]).collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn intersection(&self, other: &EdgeClass) -> EdgeClass {
        EdgeClass {
            name: format!("{}∩{}", self.name, other.name),
            members: self.members.iter().zip(&other.members).map(|(a, b)| *a && *b).collect(),
        }
    }

    pub fn union(&self, other: &EdgeClass) -> EdgeClass {
        EdgeClass {
            name: format!("{}∪{}", self.name, other.name),
            members: self.members.iter().zip(&other.members).map(|(a, b)| *a || *b).collect(),
        }
    }

    /// A member of `self` missing from `other`.
    pub fn not_subset_witness(&self, other: &EdgeClass) -> Option<usize> {
        (0..self.members.len()).find(|&x| self.members[x] && !other.members[x])
    }

    pub fn names(&self, c: &FinCat) -> Vec<String> {
        self.members().into_iter().map(|x| c.name_of(x).to_string()).collect()
    }
}

pub(crate) fn identity_witness(c: &FinCat, e: &EdgeClass) -> Option<String> {
    (0..c.object_count())
        .map(|o| c.identity(o))
        .find(|&id| !e.contains(id))
        .map(|id| c.name_of(id).to_string())
}

/// A composable pair `(g, f)` of members whose composite is not a member.
pub(crate) fn composition_witness(c: &FinCat, e: &EdgeClass) -> Option<String> {
    for g in e.members() {
        for f in e.members() {
            if let Some(gf) = c.compose(g, f) {
                if !e.contains(gf) {
                    return Some(format!("({}, {})", c.name_of(g), c.name_of(f)));
                }
            }
        }
    }
    None
}

/// A Cartesian square with `e ∈ E` on the right and `f ∈ F` at the bottom
/// whose left edge is not in `E`.
pub(crate) fn pullback_witness(c: &FinCat, e: &EdgeClass, by: &EdgeClass) -> Option<String> {
    for x in e.members() {
        for f in by.members() {
            if c.dst(f) != c.dst(x) {
                continue;
            }
            for sq in c.cartesian_squares_over(x, f) {
                if !e.contains(sq.left) {
                    return Some(format!(
                        "e={}, f={}, e'={}",
                        c.name_of(x),
                        c.name_of(f),
                        c.name_of(sq.left)
                    ));
                }
            }
        }
    }
    None
}

/// `(p, q)` with `p ∈ E` where exactly one of `q`, `p∘q` is in `E`.
pub(crate) fn cancellation_witness(c: &FinCat, e: &EdgeClass) -> Option<String> {
    for p in e.members() {
        for q in 0..c.morphism_count() {
            if let Some(pq) = c.compose(p, q) {
                if e.contains(pq) != e.contains(q) {
                    return Some(format!("({}, {})", c.name_of(p), c.name_of(q)));
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub class: String,
    pub checks: Vec<Check>,
    /// Identities, pullback stability and cancellation.
    pub admissible: bool,
}

impl ClassReport {
    pub fn check(&self, suffix: &str) -> Option<&Check> {
        let key = format!("{}.{}", self.class, suffix);
        self.checks.iter().find(|c| c.condition == key)
    }
}

pub fn class_properties(c: &FinCat, e: &EdgeClass, others: &[&EdgeClass]) -> ClassReport {
    let key = |s: &str| format!("{}.{}", e.name(), s);
    let all = EdgeClass::all(c);
    let mut checks = vec![
        Check::from_witness(key("contains_identities"), identity_witness(c, e)),
        Check::from_witness(key("composition_stable"), composition_witness(c, e)),
        Check::from_witness(key("pullback_stable"), pullback_witness(c, e, &all)),
    ];
    for f in others {
        checks.push(Check::from_witness(
            key(&format!("pullback_stable_by_{}", f.name())),
            pullback_witness(c, e, f),
        ));
    }
    checks.push(Check::from_witness(key("cancellation"), cancellation_witness(c, e)));
    let admissible = checks[0].pass && checks[2].pass && checks.last().unwrap().pass;
    ClassReport { class: e.name().to_string(), checks, admissible }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    /// For each morphism in scope, every `(p, q)` with `f = p∘q`, `p ∈ E1`, `q ∈ E2`.
    pub factorizations: Vec<(usize, Vec<(usize, usize)>)>,
    pub pass: bool,
    /// First morphism without a factorization.
    pub witness: Option<usize>,
}

/// Factorizations of every morphism of `scope` (all morphisms when `None`).
pub fn factorization_check(
    c: &FinCat,
    e1: &EdgeClass,
    e2: &EdgeClass,
    scope: Option<&EdgeClass>,
) -> FactorizationReport {
    let mut factorizations = Vec::new();
    let mut witness = None;
    for f in 0..c.morphism_count() {
        if scope.is_some_and(|s| !s.contains(f)) {
            continue;
        }
        let mut found = Vec::new();
        for w in 0..c.object_count() {
            for &q in c.hom(c.src(f), w) {
                if !e2.contains(q) {
                    continue;
                }
                for &p in c.hom(w, c.dst(f)) {
                    if e1.contains(p) && c.compose(p, q) == Some(f) {
                        found.push((p, q));
                    }
                }
            }
        }
        if found.is_empty() && witness.is_none() {
            witness = Some(f);
        }
        factorizations.push((f, found));
    }
    FactorizationReport { factorizations, pass: witness.is_none(), witness }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinPoset;

    #[test]
    fn all_and_isos_admissible() {
        let c = FinCat::from_poset(&FinPoset::grid(1));
        assert!(c.admits_pullbacks());
        for e in [EdgeClass::all(&c), EdgeClass::isos(&c)] {
            let r = class_properties(&c, &e, &[]);
            assert!(r.admissible, "{r:?}");
            assert!(r.checks.iter().all(|k| k.pass));
        }
    }

    #[test]
    fn pullback_failure_has_square_witness() {
        // In [1]x[1], the class {(0,1)->(1,1)} pulled back along (1,0)->(1,1)
        // gives (0,0)->(1,0), which is not a member.
        let c = FinCat::from_poset(&FinPoset::grid(1));
        let e = EdgeClass::from_names("E", &c, &["(0,1)->(1,1)"]).unwrap();
        let r = class_properties(&c, &e, &[]);
        let k = r.check("pullback_stable").unwrap();
        assert!(!k.pass);
        assert_eq!(k.witness.as_deref(), Some("e=(0,1)->(1,1), f=(1,0)->(1,1), e'=(0,0)->(1,0)"));
        assert!(!r.admissible);
    }

    #[test]
    fn factorization_examples() {
        let c = FinCat::from_poset(&FinPoset::chain(2));
        let all = EdgeClass::all(&c);
        let r = factorization_check(&c, &all, &all, None);
        assert!(r.pass);
        let isos = EdgeClass::isos(&c);
        let r = factorization_check(&c, &isos, &isos, None);
        assert!(!r.pass);
        assert_eq!(c.name_of(r.witness.unwrap()), "0->1");
    }
}
