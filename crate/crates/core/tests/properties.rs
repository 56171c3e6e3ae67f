use proptest::prelude::*;

use nervelab::certify::{cert_box_in_ccpt, verify_certificate, Certificate};
use nervelab::homology::{chain_complex, contractibility_evidence, homology_groups, smith_normal_form, Verdict};
use nervelab::poset::{check_distributive, crt, upset_lattice, CrtLattice, FinPoset, Lattice};
use nervelab::simplicial::nerve_of_poset;
use nervelab::Caps;

/// A poset on `n` points, `i < j` kept for each chosen pair with `i < j`.
fn poset(n: usize, bits: &[bool]) -> FinPoset {
    let mut pairs = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if bits[k] {
                pairs.push((i, j));
            }
            k += 1;
        }
    }
    FinPoset::from_covers((0..n).map(|i| i.to_string()).collect(), &pairs).unwrap()
}

fn arb_poset(max: usize) -> impl Strategy<Value = FinPoset> {
    (1..=max).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |b| poset(n, &b)))
}

fn arb_monotone(m: usize, n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..=n, m + 1).prop_map(|mut v| {
        v.sort();
        v
    })
}

fn lattice(n: usize) -> CrtLattice {
    crt(n, &Caps::default()).unwrap()
}

/// Rank over the rationals by fraction-free elimination.
fn rank(a: &[Vec<i64>], cols: usize) -> usize {
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            let (a, b) = (m[r][c], m[i][c]);
            for k in 0..cols {
                m[i][k] = m[i][k] * a - m[r][k] * b;
            }
            let g = m[i].iter().fold(0i128, |g, &x| num_gcd(g, x));
            if g > 1 {
                m[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        r += 1;
    }
    r
}

fn num_gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

fn det(a: &[Vec<i64>]) -> i128 {
    // Laplace expansion; matrices here are at most 4 x 4
    let n = a.len();
    if n == 1 {
        return a[0][0] as i128;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                a[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * a[0][j] as i128 * det(&minor)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn upsets_match_brute_force(p in arb_poset(7)) {
        let l = upset_lattice(&p, &Caps::default()).unwrap();
        let n = p.len();
        let brute = (0u32..1 << n)
            .filter(|&s| (0..n).all(|a| s >> a & 1 == 0 || (0..n).all(|b| !p.leq(a, b) || s >> b & 1 == 1)))
            .count();
        prop_assert_eq!(l.members().len(), brute);
        prop_assert!(check_distributive(&l.to_fin_lattice(), &Caps::default()).is_ok());
    }

    #[test]
    fn nerve_counts_strict_chains(p in arb_poset(7)) {
        let x = nerve_of_poset(&p, 3, &Caps::default()).unwrap();
        let n = p.len();
        for d in 0..=3 {
            let chains = (0u32..1 << n)
                .filter(|s| s.count_ones() as usize == d + 1)
                .filter(|&s| {
                    let v: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
                    v.iter().all(|&a| v.iter().all(|&b| p.leq(a, b) || p.leq(b, a)))
                })
                .count();
            prop_assert_eq!(x.count(d), chains);
        }
    }

    #[test]
    fn simplicial_identities(p in arb_poset(5)) {
        let x = nerve_of_poset(&p, 3, &Caps::default()).unwrap();
        for n in 2..=3 {
            for s in x.all_simplices(n) {
                for j in 0..=n {
                    for i in 0..j {
                        prop_assert_eq!(x.face(&x.face(&s, j), i), x.face(&x.face(&s, i), j - 1));
                    }
                    prop_assert_eq!(x.face(&x.degeneracy(&s, j.min(n)), j), s.clone());
                }
            }
        }
    }

    #[test]
    fn euler_characteristic_agrees(p in arb_poset(6)) {
        let top = p.height() - 1;
        let x = nerve_of_poset(&p, top, &Caps::default()).unwrap();
        let h = homology_groups(&chain_complex(&x, top).unwrap()).unwrap();
        let cells: i64 = x.counts().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
        let betti: i64 = h.degrees.iter().enumerate().map(|(d, g)| if d % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) }).sum();
        prop_assert_eq!(cells, betti);
        prop_assert_eq!(h.euler_characteristic, cells);
    }

    #[test]
    fn poset_with_a_top_is_a_cone(p in arb_poset(6)) {
        let n = p.len();
        let mut pairs: Vec<(usize, usize)> = p.covers();
        pairs.extend((0..n).map(|a| (a, n)));
        let q = FinPoset::from_covers((0..=n).map(|i| i.to_string()).collect(), &pairs).unwrap();
        let top = q.height() - 1;
        let ev = contractibility_evidence(&nerve_of_poset(&q, top, &Caps::default()).unwrap(), top).unwrap();
        prop_assert_eq!(ev.verdict, Verdict::Cone);
        prop_assert!(ev.report.is_reduced_trivial());
    }

    #[test]
    fn smith_form_rank_and_divisibility(
        a in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 4), 1..=4)
    ) {
        let snf = smith_normal_form(&a, 4);
        let divs = snf.divisors();
        prop_assert_eq!(divs.len(), rank(&a, 4));
        for w in divs.windows(2) {
            prop_assert!((&w[1] % &w[0]) == 0.into());
        }
        if a.len() == 4 {
            let prod = divs.iter().fold(num_bigint::BigInt::from(1), |acc, d| acc * d);
            let d = det(&a).abs();
            if d != 0 {
                prop_assert_eq!(prod, num_bigint::BigInt::from(d));
            }
        }
    }

    #[test]
    fn crt_maps_are_lattice_maps(d in (0usize..=3, 0usize..=3).prop_flat_map(|(m, n)| (Just(m), Just(n), arb_monotone(m, n)))) {
        let (m, n, d) = d;
        let (src, dst) = (lattice(m), lattice(n));
        let f = src.induced(&dst, &d).unwrap();
        for x in 0..src.size() {
            for y in 0..src.size() {
                prop_assert_eq!(f[src.meet(x, y)], dst.meet(f[x], f[y]));
                prop_assert_eq!(f[src.join(x, y)], dst.join(f[x], f[y]));
            }
        }
        for p in 0..=m {
            for q in 0..=m {
                prop_assert_eq!(f[src.sigma(p, q)], dst.sigma(d[p], d[q]));
            }
        }
    }

    #[test]
    fn crt_is_functorial(
        maps in (0usize..=3, 0usize..=3, 0usize..=3)
            .prop_flat_map(|(k, m, n)| (Just(k), Just(m), Just(n), arb_monotone(k, m), arb_monotone(m, n)))
    ) {
        let (k, m, n, e, d) = maps;
        let (a, b, c) = (lattice(k), lattice(m), lattice(n));
        let de: Vec<usize> = e.iter().map(|&i| d[i]).collect();
        let fe = a.induced(&b, &e).unwrap();
        let fd = b.induced(&c, &d).unwrap();
        let composite: Vec<usize> = fe.iter().map(|&x| fd[x]).collect();
        prop_assert_eq!(a.induced(&c, &de).unwrap(), composite);
    }

    #[test]
    fn dropping_a_move_breaks_the_certificate(i in 0usize..14) {
        let c = cert_box_in_ccpt(2, &Caps::default()).unwrap().certificate;
        prop_assert!(verify_certificate(&c).valid);
        let mut moves = c.moves.clone();
        moves.remove(i % moves.len());
        let broken = Certificate { ambient: c.ambient.clone(), start: c.start.clone(), moves };
        prop_assert!(!verify_certificate(&broken).valid);
        let back = Certificate::from_json(c.ambient.clone(), &c.to_json()).unwrap();
        prop_assert_eq!(back.moves, c.moves);
    }
}
