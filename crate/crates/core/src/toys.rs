//! Small categories shipped with the crate.

use crate::fincat::{CatError, FinCat};

/// `(file name, JSON text)` for every bundled category.
pub const BUNDLED: &[(&str, &str)] = &[
    ("toy1", include_str!("../data/toy1.json")),
    ("toy2", include_str!("../data/toy2.json")),
    ("cube_z2", include_str!("../data/cube_z2.json")),
    ("square5", include_str!("../data/square5.json")),
    ("kernel_pair", include_str!("../data/kernel_pair.json")),
    ("neg_subset", include_str!("../data/neg_subset.json")),
    ("neg_composition", include_str!("../data/neg_composition.json")),
    ("neg_factorization", include_str!("../data/neg_factorization.json")),
    ("neg_pullback_by_ek", include_str!("../data/neg_pullback_by_ek.json")),
    ("neg_e1_pullbacks", include_str!("../data/neg_e1_pullbacks.json")),
    ("neg_chain", include_str!("../data/neg_chain.json")),
];

pub fn json(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, j)| *j)
}

/// Loads a bundled category by name.
///
/// # Panics
/// If `name` is not bundled.
pub fn load(name: &str) -> Result<FinCat, CatError> {
    let text = json(name).unwrap_or_else(|| panic!("no bundled category {name}"));
    FinCat::from_json(text)
}
