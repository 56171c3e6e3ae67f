use serde::Serialize;

use super::NerveError;
use crate::fincat::{
    class_properties, composition_witness, factorization_check, pullback_witness, EdgeClass, FinCat,
};
use crate::report::{all_pass, first_failure, Check};

/// Named conditions with witnesses.
#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub mode: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl HypothesisReport {
    fn new(mode: &str, checks: Vec<Check>) -> HypothesisReport {
        HypothesisReport { mode: mode.to_string(), pass: all_pass(&checks), checks }
    }

    pub fn check(&self, condition: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.condition == condition)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        first_failure(&self.checks)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn subset(c: &FinCat, a: &EdgeClass, b: &EdgeClass) -> Check {
    Check::from_witness(
        format!("{}_subset_{}", a.name(), b.name()),
        a.not_subset_witness(b).map(|x| c.name_of(x).to_string()),
    )
}

fn pullbacks_exist(c: &FinCat) -> Check {
    Check::from_witness(
        "pullbacks_exist",
        c.missing_pullback().map(|(f, g)| format!("({}, {})", c.name_of(f), c.name_of(g))),
    )
}

fn stable(c: &FinCat, e: &EdgeClass, by: &EdgeClass, by_name: &str) -> Check {
    Check::from_witness(format!("{}.pullback_stable_by_{by_name}", e.name()), pullback_witness(c, e, by))
}

/// A cospan in `E` whose pullback inside `C_E` is missing or differs from the
/// one in `C`.
fn subcategory_pullback_witness(c: &FinCat, e: &EdgeClass) -> Option<String> {
    let keep = |x: usize| e.contains(x);
    for f in e.members() {
        for g in e.members() {
            if c.dst(f) != c.dst(g) {
                continue;
            }
            let pair = || format!("({}, {})", c.name_of(f), c.name_of(g));
            let Ok(sub) = c.pullback_in(&keep, f, g) else {
                return Some(pair());
            };
            let Ok(full) = c.pullback(f, g) else {
                return Some(pair());
            };
            let via = full.factorization(sub.leg1, sub.leg2);
            if !via.is_some_and(|u| c.is_iso(u)) {
                return Some(pair());
            }
        }
    }
    None
}

/// Inclusions into `E0`, composition, factorization over `E0`, pullback
/// stability against the extra classes and pullbacks in `C_{E1}`.
pub fn check_descent_hypotheses(
    c: &FinCat,
    e0: &EdgeClass,
    e1: &EdgeClass,
    e2: &EdgeClass,
    extra: &[EdgeClass],
) -> HypothesisReport {
    HypothesisReport::new("descent", descent_checks(c, e0, e1, e2, extra, Some(e0)))
}

fn descent_checks(
    c: &FinCat,
    e0: &EdgeClass,
    e1: &EdgeClass,
    e2: &EdgeClass,
    extra: &[EdgeClass],
    scope: Option<&EdgeClass>,
) -> Vec<Check> {
    let mut checks = vec![
        subset(c, e1, e0),
        subset(c, e2, e0),
        Check::from_witness(format!("{}.composition_stable", e0.name()), composition_witness(c, e0)),
    ];
    let f = factorization_check(c, e1, e2, scope);
    checks.push(Check::from_witness("factorization", f.witness.map(|x| c.name_of(x).to_string())));
    for ek in extra {
        checks.push(stable(c, e1, ek, ek.name()));
        checks.push(stable(c, e2, ek, ek.name()));
        checks.push(stable(c, ek, e1, e1.name()));
    }
    checks.push(Check::from_witness(
        format!("{}.pullbacks_in_subcategory", e1.name()),
        subcategory_pullback_witness(c, e1),
    ));
    checks.push(pullbacks_exist(c));
    checks
}

/// Pullbacks, stability of `E1`, `E2` under composition and pullback along
/// each other, and the truncation chain ending at `E1 ∩ E2`.
pub fn check_gluing_hypotheses(
    c: &FinCat,
    e1: &EdgeClass,
    e2: &EdgeClass,
    chain: &[EdgeClass],
    extra: &[EdgeClass],
) -> HypothesisReport {
    let mut checks = vec![pullbacks_exist(c)];
    if !checks[0].pass {
        return HypothesisReport::new("gluing", checks);
    }
    for e in [e1, e2] {
        checks.push(Check::from_witness(format!("{}.composition_stable", e.name()), composition_witness(c, e)));
    }
    checks.push(stable(c, e1, e2, e2.name()));
    checks.push(stable(c, e2, e1, e1.name()));
    let base = e1.union(e2);
    checks.extend(chain_checks(c, e1, e2, chain, &base, &format!("{}∪{}", e1.name(), e2.name())));
    let name = format!("{}_or_{}", e1.name(), e2.name());
    for ek in extra {
        checks.push(stable(c, ek, &base, &name));
    }
    HypothesisReport::new("gluing", checks)
}

/// Descent conditions, admissibility of `E1` and `E2`, factorization of every
/// morphism and the truncation chain measured against `E0`.
pub fn check_combine_hypotheses(
    c: &FinCat,
    e0: &EdgeClass,
    e1: &EdgeClass,
    e2: &EdgeClass,
    chain: &[EdgeClass],
    extra: &[EdgeClass],
) -> HypothesisReport {
    let pb = pullbacks_exist(c);
    if !pb.pass {
        return HypothesisReport::new("combine", vec![pb]);
    }
    let mut checks = descent_checks(c, e0, e1, e2, extra, None);
    for e in [e1, e2] {
        let r = class_properties(c, e, &[]);
        let bad = r.checks.iter().find(|k| !k.pass && !k.condition.ends_with("composition_stable"));
        checks.push(Check::from_witness(
            format!("{}.admissible", e.name()),
            if r.admissible { None } else { bad.map(|k| format!("{}: {}", k.condition, k.witness.clone().unwrap_or_default())) },
        ));
    }
    checks.extend(chain_checks(c, e1, e2, chain, e0, e0.name()));
    HypothesisReport::new("combine", checks)
}

fn chain_checks(
    c: &FinCat,
    e1: &EdgeClass,
    e2: &EdgeClass,
    chain: &[EdgeClass],
    base: &EdgeClass,
    base_name: &str,
) -> Vec<Check> {
    let mut checks = Vec::new();
    let Some(first) = chain.first() else {
        checks.push(Check::fail("chain.nonempty", "no levels"));
        return checks;
    };
    let nested = chain.windows(2).enumerate().find_map(|(i, w)| {
        w[0].not_subset_witness(&w[1]).map(|x| format!("{} in level {i} but not {}", c.name_of(x), i + 1))
    });
    checks.push(Check::from_witness("chain.nested", nested));
    let isos = EdgeClass::isos(c);
    let start = first
        .not_subset_witness(&isos)
        .or_else(|| isos.not_subset_witness(first))
        .map(|x| c.name_of(x).to_string());
    checks.push(Check::from_witness("chain.starts_at_isos", start));
    let meet = e1.intersection(e2);
    let last = chain.last().unwrap();
    let end = last
        .not_subset_witness(&meet)
        .or_else(|| meet.not_subset_witness(last))
        .map(|x| c.name_of(x).to_string());
    checks.push(Check::from_witness(format!("chain.ends_at_{}∩{}", e1.name(), e2.name()), end));
    for i in 1..chain.len() {
        let e = &chain[i];
        checks.push(Check::from_witness(format!("chain[{i}].composition_stable"), composition_witness(c, e)));
        checks.push(Check::from_witness(
            format!("chain[{i}].pullback_stable_by_{base_name}"),
            pullback_witness(c, e, base),
        ));
        let diag = e.members().into_iter().find_map(|f| match c.diagonal_of(f) {
            Ok(d) if chain[i - 1].contains(d) => None,
            Ok(d) => Some(format!("{} has diagonal {}", c.name_of(f), c.name_of(d))),
            Err(_) => Some(format!("{} has no kernel pair", c.name_of(f))),
        });
        checks.push(Check::from_witness(format!("chain[{i}].diagonals_in_chain[{}]", i - 1), diag));
    }
    checks
}

/// The chain declared in the category document, each level with identities.
pub fn declared_chain_classes(c: &FinCat) -> Option<Vec<EdgeClass>> {
    let levels = c.declared_chain()?;
    Some(levels.iter().enumerate().map(|(i, l)| EdgeClass::from_indices(format!("E'{i}"), c, l)).collect())
}

/// The chain `E'_0 = isos`, `E'_i = E'_0 ∪ {f ∈ E : diag f ∈ E'_{i-1}}`,
/// grown until it reaches `E`.
pub fn build_truncation_chain(c: &FinCat, e: &EdgeClass) -> Result<Vec<EdgeClass>, NerveError> {
    let isos = EdgeClass::isos(c).renamed("E'0");
    if let Some(x) = isos.not_subset_witness(e) {
        return Err(NerveError::Chain(format!("isomorphism {} is not in {}", c.name_of(x), e.name())));
    }
    let mut diag = vec![None; c.morphism_count()];
    for f in e.members() {
        diag[f] = Some(c.diagonal_of(f).map_err(|_| {
            NerveError::MissingLimit(format!("kernel pair of {}", c.name_of(f)))
        })?);
    }
    let mut chain = vec![isos.clone()];
    while chain.last().unwrap() != e && chain.last().unwrap().members() != e.members() {
        let prev = chain.last().unwrap();
        let i = chain.len();
        let next = EdgeClass::from_predicate(format!("E'{i}"), c, |f| {
            isos.contains(f) || (e.contains(f) && diag[f].is_some_and(|d| prev.contains(d)))
        });
        if next.members() == prev.members() {
            return Err(NerveError::Chain(format!(
                "stabilizes at level {} before reaching {}",
                i - 1,
                e.name()
            )));
        }
        chain.push(next);
    }
    Ok(chain)
}
