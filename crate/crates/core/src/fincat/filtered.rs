use serde::Serialize;

use super::FinCat;
use crate::report::Check;

#[derive(Clone, Debug, Serialize)]
pub struct FilteredReport {
    pub filtered: bool,
    pub checks: Vec<Check>,
}

/// Nonempty, every pair of objects has a cocone, every parallel pair is
/// equalized by some further morphism.
pub fn is_filtered(d: &FinCat) -> FilteredReport {
    let n = d.object_count();
    let nonempty = if n == 0 {
        Check::fail("nonempty", "no objects")
    } else {
        Check::pass("nonempty")
    };

    let mut cocone_witness = None;
    'pairs: for a in 0..n {
        for b in a + 1..n {
            let ok = (0..n).any(|c| !d.hom(a, c).is_empty() && !d.hom(b, c).is_empty());
            if !ok {
                cocone_witness = Some(format!("({}, {})", d.object_name(a), d.object_name(b)));
                break 'pairs;
            }
        }
    }

    let mut equalize_witness = None;
    'parallel: for x in 0..n {
        for y in 0..n {
            let maps = d.hom(x, y);
            for (i, &f) in maps.iter().enumerate() {
                for &g in &maps[i + 1..] {
                    let ok = (0..n).any(|z| {
                        d.hom(y, z).iter().any(|&h| d.compose(h, f) == d.compose(h, g))
                    });
                    if !ok {
                        equalize_witness = Some(format!("({}, {})", d.name_of(f), d.name_of(g)));
                        break 'parallel;
                    }
                }
            }
        }
    }

    let checks = vec![
        nonempty,
        Check::from_witness("cocones", cocone_witness),
        Check::from_witness("parallel_pairs", equalize_witness),
    ];
    FilteredReport { filtered: checks.iter().all(|c| c.pass), checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinPoset;

    #[test]
    fn posets() {
        assert!(is_filtered(&FinCat::from_poset(&FinPoset::grid(2))).filtered);
        let r = is_filtered(&FinCat::from_poset(&FinPoset::antichain(2)));
        assert!(!r.filtered);
        assert_eq!(r.checks[1].witness.as_deref(), Some("(0, 1)"));
        assert!(!is_filtered(&FinCat::from_poset(&FinPoset::antichain(0))).filtered);
    }

    #[test]
    fn parallel_pair_without_coequalizer() {
        let c = FinCat::from_json(
            r#"{"objects":["a","b"],
                "morphisms":[{"id":"f","src":"a","dst":"b"},{"id":"g","src":"a","dst":"b"}]}"#,
        )
        .unwrap();
        let r = is_filtered(&c);
        assert!(!r.filtered);
        assert_eq!(r.checks[2].witness.as_deref(), Some("(f, g)"));
    }
}
