//! Acceptance run: one PASS/FAIL line per criterion, each against its time limit.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nervelab::certify::{cert_box_in_ccpt, cert_boxplus_cover, verify_certificate};
use nervelab::fincat::{is_filtered, EdgeClass, FinCat};
use nervelab::homology::{category_evidence, chain_complex, contractibility_evidence, homology_groups, Verdict};
use nervelab::multinerve::{
    build_truncation_chain, cartesianize, check_descent_hypotheses, check_gluing_hypotheses, check_gluing_map,
    declared_chain_classes, komp_category, Chain, HypothesisReport, Marking, RestrictedNerve, Tiling,
};
use nervelab::poset::{crt, monotone_maps, parse_hasse_dot, FinPoset, Lattice};
use nervelab::simplicial::{boundary, nerve_of_poset};
use nervelab::{toys, Caps};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn lattice_counts() -> Outcome {
    let caps = Caps::default();
    let printed = [1usize, 5, 19, 69, 251, 923, 3431];
    let mut got = Vec::new();
    for n in 0..=6usize {
        let size = crt(n, &caps).map_err(|e| e.to_string())?.size();
        let formula = binomial(2 * n as u64 + 2, n as u64 + 1) - 1;
        ensure(size as u64 == formula && size == printed[n], || {
            format!("n={n}: {size} elements, formula {formula}, printed {}", printed[n])
        })?;
        got.push(size.to_string());
    }
    Ok(format!("|Crt^n| = {}", got.join(", ")))
}

/// Edge lists read off the two Hasse figures, as undirected pairs.
const FIGURE_1: &[(&str, &str)] = &[("0000", "00"), ("00", "01"), ("01", "11"), ("11", "10"), ("10", "00")];

const FIGURE_2: &[(&str, &str)] = &[
    ("000000", "0000"),
    ("0000", "0001"),
    ("0001", "0101"),
    ("0010", "0011"),
    ("0011", "0111"),
    ("1010", "1011"),
    ("1011", "1111"),
    ("00", "01"),
    ("01", "02"),
    ("10", "11"),
    ("11", "12"),
    ("20", "21"),
    ("21", "22"),
    ("00", "10"),
    ("10", "20"),
    ("01", "11"),
    ("11", "21"),
    ("02", "12"),
    ("12", "22"),
    ("0000", "0010"),
    ("0010", "1010"),
    ("0001", "0011"),
    ("0011", "1011"),
    ("1011", "10"),
    ("0101", "0111"),
    ("0111", "1111"),
    ("1111", "11"),
    ("0011", "00"),
    ("0111", "01"),
];

/// (in, out) degree multiset of a graded figure, edges pointing away from `root`.
fn figure_degrees(edges: &[(&str, &str)], root: &str) -> (usize, BTreeMap<(usize, usize), usize>) {
    let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut dist: BTreeMap<&str, usize> = BTreeMap::from([(root, 0)]);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !dist.contains_key(w) {
                dist.insert(w, dist[v] + 1);
                queue.push_back(w);
            }
        }
    }
    let mut deg: BTreeMap<&str, (usize, usize)> = adj.keys().map(|&v| (v, (0, 0))).collect();
    for &(a, b) in edges {
        let (lo, hi) = if dist[a] < dist[b] { (a, b) } else { (b, a) };
        deg.get_mut(lo).unwrap().1 += 1;
        deg.get_mut(hi).unwrap().0 += 1;
    }
    let mut multiset = BTreeMap::new();
    for d in deg.values() {
        *multiset.entry(*d).or_insert(0) += 1;
    }
    (adj.len(), multiset)
}

fn hasse_shape() -> Outcome {
    let caps = Caps::default();
    let mut notes = Vec::new();
    for (n, figure, root) in [(1, FIGURE_1, "0000"), (2, FIGURE_2, "000000")] {
        let dot = crt(n, &caps).map_err(|e| e.to_string())?.to_dot();
        let (nodes, edges) = parse_hasse_dot(&dot);
        let mut deg = vec![(0usize, 0usize); nodes];
        for &(a, b) in &edges {
            deg[a].1 += 1;
            deg[b].0 += 1;
        }
        let mut got = BTreeMap::new();
        for d in deg {
            *got.entry(d).or_insert(0) += 1;
        }
        let (fig_nodes, want) = figure_degrees(figure, root);
        ensure(nodes == fig_nodes && got == want, || {
            format!("Crt^{n}: {nodes} nodes {got:?}, figure {fig_nodes} nodes {want:?}")
        })?;
        notes.push(format!("Crt^{n}: {nodes} nodes, {} edges", edges.len()));
    }
    Ok(notes.join("; "))
}

fn structure_maps() -> Outcome {
    let caps = Caps::default();
    let mut checked = 0usize;
    for n in 0..=4 {
        let l = crt(n, &caps).map_err(|e| e.to_string())?;
        for p in 0..=n {
            for q in 0..=n {
                ensure(l.pi(l.sigma(p, q)) == (p, q), || format!("n={n}: pi(sigma({p},{q}))"))?;
                ensure(l.sigma(p, q) == l.join(l.sigma(p, 0), l.sigma(0, q)), || format!("n={n}: sigma({p},{q}) join"))?;
                checked += 2;
            }
        }
        for x in 0..l.size() {
            for y in 0..l.size() {
                if !l.leq(x, y) {
                    continue;
                }
                let lhs = l.meet(l.lambda(x, y).unwrap(), l.mu(x, y).unwrap());
                let (a, b) = l.pi(y);
                let rhs = l.join(l.xi(a, b), x);
                ensure(lhs == rhs, || format!("n={n}: lambda/mu at ({}, {})", l.label(x), l.label(y)))?;
                checked += 1;
            }
        }
    }
    let lattices: Vec<_> = (0..=3).map(|n| crt(n, &caps).unwrap()).collect();
    for m in 0..=3 {
        for n in 0..=3 {
            for d in monotone_maps(m, n) {
                let image = lattices[m].induced(&lattices[n], &d).map_err(|e| e.to_string())?;
                for (x, &fx) in image.iter().enumerate() {
                    let (p, q) = lattices[m].pi(x);
                    ensure(lattices[n].pi(fx) == (d[p], d[q]), || format!("d={d:?} at {}", lattices[m].label(x)))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} identities, 0 violations"))
}

fn cube_certificates() -> Outcome {
    let caps = Caps::default();
    let mut notes = Vec::new();
    for n in 0..=3 {
        let t = Instant::now();
        let c = cert_box_in_ccpt(n, &caps).map_err(|e| format!("n={n}: {e}"))?;
        let v = verify_certificate(&c.certificate);
        ensure(v.valid && c.respects_stages(), || format!("n={n}: replay {:?}", v.reason))?;
        if n == 3 {
            ensure(t.elapsed() < Duration::from_secs(60), || format!("n=3 took {:?}", t.elapsed()))?;
        }
        notes.push(format!("n={n}: {} moves", c.certificate.len()));
    }
    Ok(notes.join(", "))
}

fn cover_certificates() -> Outcome {
    let caps = Caps::default();
    let mut notes = Vec::new();
    for n in 0..=2 {
        let c = cert_boxplus_cover(n, &caps).map_err(|e| format!("n={n}: {e}"))?;
        let v = verify_certificate(&c.certificate);
        ensure(v.valid && c.respects_stages(), || format!("n={n}: replay {:?}", v.reason))?;
        notes.push(format!("n={n}: {} moves", c.certificate.len()));
    }
    Ok(notes.join(", "))
}

fn classes(c: &FinCat) -> (EdgeClass, EdgeClass, EdgeClass) {
    let get = |n: &str| EdgeClass::named(c, n).unwrap();
    (get("E0"), get("E1"), get("E2"))
}

fn compactifications() -> Outcome {
    let caps = Caps::default();
    let mut notes = Vec::new();
    for name in ["toy1", "toy2"] {
        let c = toys::load(name).map_err(|e| e.to_string())?;
        let (e0, e1, e2) = classes(&c);
        let mut seen = 0;
        for f in e0.members().into_iter().filter(|&f| !c.is_identity(f)) {
            let sigma = Chain::from_morphisms(&c, &[f]).map_err(|e| e.to_string())?;
            let k = komp_category(&c, &e1, &e2, &sigma, 1, &caps).map_err(|e| e.to_string())?;
            let op = k.category.opposite();
            let filtered = is_filtered(&op);
            let ev = category_evidence(&op, 4, &caps).map_err(|e| e.to_string())?;
            let ok_verdict = matches!(ev.verdict, Verdict::Cone) || ev.verdict == Verdict::Acyclic(4);
            ensure(filtered.filtered && ok_verdict, || {
                format!("{name}, sigma={}: filtered={} verdict={}", c.name_of(f), filtered.filtered, ev.verdict)
            })?;
            seen += 1;
        }
        notes.push(format!("{name}: {seen} simplices"));
    }
    Ok(notes.join(", "))
}

fn cartesianization() -> Outcome {
    let caps = Caps::default();
    let c = toys::load("cube_z2").map_err(|e| e.to_string())?;
    ensure(c.object_count() == 8, || "cube_z2 should have 8 objects".into())?;
    let all = EdgeClass::all(&c);
    let nerve = RestrictedNerve::new(&c, Marking::new(&c, vec![all.clone(), all]).unwrap(), Tiling::all(), &[])
        .map_err(|e| e.to_string())?;
    let mut squares = 0;
    for seed in 0..20u64 {
        let n = (seed % 3) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = nerve
            .random(&[n, n], &mut rng, &caps)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("seed {seed}: no grid"))?;
        let k = cartesianize(&c, &sigma, &caps).map_err(|e| format!("seed {seed}: {e}"))?;
        if let Some(m) = k.restriction_mismatch(&c, &sigma) {
            return Err(format!("seed {seed}: restriction differs at {m}"));
        }
        let bad = k.non_cartesian_squares(&c);
        ensure(bad.is_empty(), || format!("seed {seed}: {} non-pullback squares", bad.len()))?;
        let size = k.lattice.size();
        squares += size * (size - 1) / 2;
    }
    Ok(format!("20 grids, {squares} squares, 0 violations"))
}

fn gluing_chain(c: &FinCat, e1: &EdgeClass, e2: &EdgeClass) -> Result<Vec<EdgeClass>, String> {
    match declared_chain_classes(c) {
        Some(chain) => Ok(chain),
        None => build_truncation_chain(c, &e1.intersection(e2)).map_err(|e| e.to_string()),
    }
}

fn gluing() -> Outcome {
    let caps = Caps::default();
    let mut notes = Vec::new();
    // cube_z2 has over a million (3, 3)-grids, so it stops at n = 2
    for (name, n_max) in [("toy1", 3), ("toy2", 3), ("cube_z2", 2)] {
        let c = toys::load(name).map_err(|e| e.to_string())?;
        let (e0, e1, e2) = classes(&c);
        let chain = gluing_chain(&c, &e1, &e2)?;
        let h = check_gluing_hypotheses(&c, &e1, &e2, &chain, &[]);
        ensure(h.pass, || format!("{name}: hypotheses fail {:?}", h.first_failure()))?;
        let src = RestrictedNerve::cartesian(&c, vec![e1.clone(), e2.clone()], &[]).map_err(|e| e.to_string())?;
        let tgt = RestrictedNerve::cartesian(&c, vec![e0.clone()], &[]).map_err(|e| e.to_string())?;
        let r = check_gluing_map(&src, &tgt, n_max, &caps).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.pass(), || format!("{name}: {:?}", r.first_violation))?;
        for f in e0.members() {
            let sigma = Chain::from_morphisms(&c, &[f]).map_err(|e| e.to_string())?;
            let k = komp_category(&c, &e1, &e2, &sigma, 1, &caps).map_err(|e| format!("{name}: {e}"))?;
            ensure(!k.functors.is_empty(), || format!("{name}: Komp over {} is empty", c.name_of(f)))?;
        }
        notes.push(format!("{name}: {:?} simplices", r.checked));
    }
    Ok(notes.join("; "))
}

fn expect_witness(name: &str, r: &HypothesisReport, condition: &str, witness: &str) -> Result<(), String> {
    let first = r.first_failure().ok_or_else(|| format!("{name}: passed"))?;
    ensure(first.condition == condition && first.witness.as_deref() == Some(witness), || {
        format!("{name}: first failure {} / {:?}, expected {condition} / {witness}", first.condition, first.witness)
    })
}

fn hypotheses() -> Outcome {
    for name in ["toy1", "toy2", "cube_z2"] {
        let c = toys::load(name).map_err(|e| e.to_string())?;
        let (e0, e1, e2) = classes(&c);
        let d = check_descent_hypotheses(&c, &e0, &e1, &e2, &[]);
        ensure(d.pass, || format!("{name}: descent {:?}", d.first_failure()))?;
        let g = check_gluing_hypotheses(&c, &e1, &e2, &gluing_chain(&c, &e1, &e2)?, &[]);
        ensure(g.pass, || format!("{name}: gluing {:?}", g.first_failure()))?;
    }
    let descent = |name: &str| -> Result<HypothesisReport, String> {
        let c = toys::load(name).map_err(|e| e.to_string())?;
        let (e0, e1, e2) = classes(&c);
        let extra: Vec<EdgeClass> = EdgeClass::named(&c, "E3").into_iter().collect();
        Ok(check_descent_hypotheses(&c, &e0, &e1, &e2, &extra))
    };
    let pb = "e=(0,1)->(1,1), f=(1,0)->(1,1), e'=(0,0)->(1,0)";
    expect_witness("neg_subset", &descent("neg_subset")?, "E1_subset_E0", "0->1")?;
    expect_witness("neg_composition", &descent("neg_composition")?, "E0.composition_stable", "(1->2, 0->1)")?;
    expect_witness("neg_factorization", &descent("neg_factorization")?, "factorization", "0->1")?;
    expect_witness("neg_pullback_by_ek", &descent("neg_pullback_by_ek")?, "E3.pullback_stable_by_E1", pb)?;
    expect_witness(
        "neg_e1_pullbacks",
        &descent("neg_e1_pullbacks")?,
        "E1.pullbacks_in_subcategory",
        "((1,0)->(1,1), (0,1)->(1,1))",
    )?;
    let c = toys::load("neg_chain").map_err(|e| e.to_string())?;
    let (_, e1, e2) = classes(&c);
    let chain = declared_chain_classes(&c).ok_or("neg_chain declares no chain")?;
    expect_witness("neg_chain", &check_gluing_hypotheses(&c, &e1, &e2, &chain, &[]), "chain[1].pullback_stable_by_E1∪E2", pb)?;
    Ok("3 positive models pass, 6 negative controls name their witness".into())
}

fn homology() -> Outcome {
    for n in 1..=5 {
        let x = boundary(n, n - 1).map_err(|e| e.to_string())?;
        let h = homology_groups(&chain_complex(&x, n - 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        for k in 0..n {
            let want = usize::from(k == n - 1);
            ensure(h.reduced_betti(k) == want && h.degrees[k].torsion.is_empty(), || {
                format!("boundary of Delta^{n}: degree {k} has rank {}", h.reduced_betti(k))
            })?;
        }
    }
    let caps = Caps::default();
    for n in 0..=3 {
        let p = FinPoset::rcpt(n);
        let top = p.height() - 1;
        let x = nerve_of_poset(&p, top, &caps).map_err(|e| e.to_string())?;
        let ev = contractibility_evidence(&x, top).map_err(|e| e.to_string())?;
        ensure(ev.verdict == Verdict::Cone && ev.report.is_reduced_trivial(), || {
            format!("CCpt^{n}: verdict {}", ev.verdict)
        })?;
    }
    Ok("spheres n<=5 and CCpt^n n<=3 (cone) as expected".into())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("lattice counts", 5, lattice_counts),
        ("Hasse shape", 1, hasse_shape),
        ("structure-map identities", 30, structure_maps),
        ("cube inclusion certificates", 60, cube_certificates),
        ("cover certificates", 120, cover_certificates),
        ("compactification categories", 10, compactifications),
        ("Cartesianization", 30, cartesianization),
        ("gluing map", 30, gluing),
        ("hypothesis checkers", 10, hypotheses),
        ("homology engine", 20, homology),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        let (verdict, detail) = match outcome {
            Ok(d) if secs < *limit as f64 => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {limit} s limit")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("{verdict} [{:>2}] {name} ({secs:.2} s / {limit} s): {detail}", i + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
