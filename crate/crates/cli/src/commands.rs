use std::path::Path;

use serde_json::{json, Value};

use nervelab::certify::{cert_box_in_ccpt, cert_boxplus_cover, verify_certificate, StagedCertificate};
use nervelab::fincat::{is_filtered, EdgeClass, FinCat};
use nervelab::homology::{category_evidence, contractibility_evidence, Evidence, Verdict};
use nervelab::multinerve::{
    build_truncation_chain, check_combine_hypotheses, check_descent_hypotheses, check_gluing_hypotheses,
    check_gluing_map, declared_chain_classes, komp_category, Chain, HypothesisReport, RestrictedNerve,
    KOMP_ORIENTATION,
};
use nervelab::poset::{check_distributive, crt, FinPoset, Lattice, PosetDoc};
use nervelab::simplicial::{nerve_of_category, nerve_of_poset, TruncSSet};
use nervelab::{toys, Caps, Check};

use crate::report::Report;
use crate::{GlueArgs, HomologyArgs, HypArgs, KompArgs};

/// A run that could not complete.
pub struct Fail {
    pub cap: bool,
    pub message: String,
}

impl Fail {
    fn input(message: impl Into<String>) -> Fail {
        Fail { cap: false, message: message.into() }
    }
}

macro_rules! from_lib_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Fail {
            fn from(e: $t) -> Fail {
                let e = nervelab::Error::from(e);
                Fail { cap: e.is_cap(), message: e.to_string() }
            }
        }
    )*};
}

from_lib_error!(
    nervelab::Error,
    nervelab::poset::PosetError,
    nervelab::fincat::CatError,
    nervelab::simplicial::SsetError,
    nervelab::multinerve::NerveError,
    nervelab::certify::CertError,
    nervelab::homology::HomologyError,
    serde_json::Error,
    std::io::Error
);

type Run = Result<(), Fail>;

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

/// A file path, or the name of a bundled category with or without `.json`.
fn load_category(spec: &str) -> Result<FinCat, Fail> {
    let path = Path::new(spec);
    if path.exists() {
        return Ok(FinCat::from_json(&std::fs::read_to_string(path)?)?);
    }
    let name = spec.trim_end_matches(".json");
    match toys::json(name) {
        Some(text) => Ok(FinCat::from_json(text)?),
        None => Err(Fail::input(format!("no such file or bundled category: {spec}"))),
    }
}

fn class_list(c: &FinCat, spec: &str) -> Result<Vec<EdgeClass>, Fail> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|n| EdgeClass::named(c, n).map_err(Fail::from))
        .collect()
}

fn push_checks(report: &mut Report, checks: &[Check]) {
    for k in checks {
        report.check(&k.condition, k.pass, k.witness.clone(), json!({}));
    }
}

pub fn lattice_crt(report: &mut Report, n: usize, dot: Option<&Path>, caps: &Caps) -> Run {
    let l = crt(n, caps)?;
    let expected = binomial(2 * n as u64 + 2, n as u64 + 1) - 1;
    report.check(
        "crt.size",
        l.size() as u64 == expected,
        None,
        json!({ "n": n, "size": l.size(), "expected": expected, "covers": l.covers().len() }),
    );
    let distributive = check_distributive(&l, caps);
    let witness = distributive.as_ref().err().map(|e| e.to_string());
    report.check("crt.distributive", distributive.is_ok(), witness, json!({}));
    if let Some(path) = dot {
        std::fs::write(path, l.to_dot())?;
        report.info("dot", json!({ "path": path.display().to_string() }));
    }
    Ok(())
}

fn certificate_lines(report: &mut Report, n: usize, c: &StagedCertificate, out: Option<&Path>) -> Run {
    let v = verify_certificate(&c.certificate);
    report.check(
        "certificate.replay",
        v.valid,
        v.reason.clone(),
        json!({
            "n": n,
            "moves": c.certificate.len(),
            "stage_moves": c.stage_moves,
            "ambient_counts": c.certificate.ambient.counts(),
            "start_cells": c.certificate.start.len(),
        }),
    );
    report.check("certificate.stages", c.respects_stages(), None, json!({}));
    if let Some(path) = out {
        std::fs::write(path, c.certificate.to_json())?;
        report.info("certificate", json!({ "path": path.display().to_string() }));
    }
    Ok(())
}

pub fn cpt_inner(report: &mut Report, n: usize, out: Option<&Path>, caps: &Caps) -> Run {
    let c = cert_box_in_ccpt(n, caps)?;
    certificate_lines(report, n, &c, out)
}

pub fn cart_cover(report: &mut Report, n: usize, out: Option<&Path>, caps: &Caps) -> Run {
    let c = cert_boxplus_cover(n, caps)?;
    certificate_lines(report, n, &c, out)
}

pub fn crt_counts(report: &mut Report, max: usize, caps: &Caps) -> Run {
    for n in 0..=max {
        let size = crt(n, caps)?.size();
        let expected = binomial(2 * n as u64 + 2, n as u64 + 1) - 1;
        report.check(&format!("crt.count[{n}]"), size as u64 == expected, None, json!({ "n": n, "size": size, "expected": expected }));
    }
    Ok(())
}

fn evidence_json(ev: &Evidence) -> Value {
    json!({
        "degrees": ev.report.degrees,
        "verdict": ev.verdict.to_string(),
        "cone": ev.report.cone,
        "euler_characteristic": ev.report.euler_characteristic,
    })
}

pub fn komp(report: &mut Report, a: &KompArgs, caps: &Caps) -> Run {
    let c = load_category(&a.cat)?;
    let classes = class_list(&c, &a.classes)?;
    let [e1, e2] = <[EdgeClass; 2]>::try_from(classes).map_err(|_| Fail::input("--classes needs exactly two classes"))?;
    let sigma = Chain::parse(&c, &a.sigma)?;
    let k = komp_category(&c, &e1, &e2, &sigma, a.alpha, caps)?;
    let op = k.category.opposite();
    report.info(
        "komp",
        json!({
            "objects": op.object_count(),
            "morphisms": op.morphism_count(),
            "n": sigma.n(),
            "alpha": a.alpha,
            "orientation": KOMP_ORIENTATION,
        }),
    );
    for check in a.checks.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match check {
            "filtered" => {
                let r = is_filtered(&op);
                let bad = r.checks.iter().find(|k| !k.pass);
                let witness = bad.map(|k| format!("{}: {}", k.condition, k.witness.clone().unwrap_or_default()));
                report.check("filtered", r.filtered, witness, json!({ "filtered": r.filtered }));
            }
            "homology" => {
                let ev = category_evidence(&op, a.max_dim, caps)?;
                let ok = ev.verdict == Verdict::Cone || ev.verdict == Verdict::Acyclic(a.max_dim);
                report.check("homology", ok, None, evidence_json(&ev));
            }
            other => return Err(Fail::input(format!("unknown check {other}; expected filtered or homology"))),
        }
    }
    Ok(())
}

fn parse_list(spec: &str) -> Result<Vec<usize>, Fail> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Fail::input(format!("not a direction: {s}"))))
        .collect()
}

pub fn glue(report: &mut Report, a: &GlueArgs, caps: &Caps) -> Run {
    let c = load_category(&a.cat)?;
    let classes = class_list(&c, &a.classes)?;
    if classes.len() < 2 {
        return Err(Fail::input("--classes needs at least E1,E2"));
    }
    let twist = a.twist.as_deref().map(parse_list).transpose()?.unwrap_or_default();
    if twist.iter().any(|&d| d < 2) {
        return Err(Fail::input("directions 0 and 1 are glued and cannot be twisted"));
    }
    let mut target_classes = vec![EdgeClass::named(&c, &a.target)?];
    target_classes.extend(classes[2..].iter().cloned());
    let target_twist: Vec<usize> = twist.iter().map(|&d| d - 1).collect();
    let src = RestrictedNerve::cartesian(&c, classes, &twist)?;
    let tgt = RestrictedNerve::cartesian(&c, target_classes, &target_twist)?;
    let r = check_gluing_map(&src, &tgt, a.max_dim, caps)?;
    report.info("glue", json!({ "checked": r.checked, "operators": r.operators }));
    let witness = || r.first_violation.clone();
    report.check("gluing.vertex_bijection", r.vertex_bijection, (!r.vertex_bijection).then(witness).flatten(), json!({}));
    report.check("gluing.lands_in_target", r.lands_in_target, (!r.lands_in_target).then(witness).flatten(), json!({}));
    report.check("gluing.commutes", r.commutes, (!r.commutes).then(witness).flatten(), json!({}));
    Ok(())
}

fn hypothesis_chain(report: &mut Report, c: &FinCat, e1: &EdgeClass, e2: &EdgeClass) -> Option<Vec<EdgeClass>> {
    if let Some(chain) = declared_chain_classes(c) {
        return Some(chain);
    }
    match build_truncation_chain(c, &e1.intersection(e2)) {
        Ok(chain) => Some(chain),
        Err(e) => {
            report.check("chain.build", false, Some(e.to_string()), json!({}));
            None
        }
    }
}

pub fn hypotheses(report: &mut Report, a: &HypArgs) -> Run {
    let c = load_category(&a.cat)?;
    let classes = class_list(&c, &a.classes)?;
    let [e0, e1, e2] = <[EdgeClass; 3]>::try_from(classes).map_err(|_| Fail::input("--classes needs E0,E1,E2"))?;
    let extra = match &a.extra {
        Some(s) => class_list(&c, s)?,
        None => Vec::new(),
    };
    let r: HypothesisReport = match a.mode.as_str() {
        "descent" => check_descent_hypotheses(&c, &e0, &e1, &e2, &extra),
        "gluing" => {
            let Some(chain) = hypothesis_chain(report, &c, &e1, &e2) else { return Ok(()) };
            check_gluing_hypotheses(&c, &e1, &e2, &chain, &extra)
        }
        _ => {
            let Some(chain) = hypothesis_chain(report, &c, &e1, &e2) else { return Ok(()) };
            check_combine_hypotheses(&c, &e0, &e1, &e2, &chain, &extra)
        }
    };
    push_checks(report, &r.checks);
    Ok(())
}

/// A simplicial complex document, a poset (`elements`, `leq_pairs`) or a category.
fn load_complex(path: &Path, max_dim: usize, caps: &Caps) -> Result<TruncSSet, Fail> {
    let text = std::fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)?;
    if value.get("cells").is_some() {
        Ok(TruncSSet::from_json(&text)?)
    } else if value.get("elements").is_some() {
        let doc: PosetDoc = serde_json::from_value(value)?;
        let p = FinPoset::from_doc(&doc)?;
        Ok(nerve_of_poset(&p, (max_dim + 1).min(p.height().saturating_sub(1)), caps)?)
    } else if value.get("morphisms").is_some() {
        let c = FinCat::from_json(&text)?;
        Ok(nerve_of_category(&c, max_dim + 1, caps)?)
    } else {
        Err(Fail::input("expected a complex (cells), poset (elements) or category (morphisms)"))
    }
}

pub fn homology(report: &mut Report, a: &HomologyArgs, caps: &Caps) -> Run {
    let x = load_complex(&a.complex, a.max_dim, caps)?;
    let d = a.max_dim.min(x.max_dim());
    let ev = contractibility_evidence(&x, d)?;
    report.check("homology", true, None, evidence_json(&ev));
    Ok(())
}
