//! Multisimplicial nerves of finite categories with marked edge classes.

mod glue;
mod grid;
mod hypotheses;
mod kart;
mod komp;
mod multi;

use thiserror::Error;

use crate::fincat::CatError;
use crate::poset::PosetError;

pub use glue::{check_gluing_map, gluing_map, GluingReport};
pub use grid::{GridFunctor, Marking, RestrictedNerve, Tile, Tiling};
pub use hypotheses::{
    build_truncation_chain, check_combine_hypotheses, check_descent_hypotheses, check_gluing_hypotheses, declared_chain_classes,
    HypothesisReport,
};
pub use kart::{
    alpha_beta_sections, cartesianize, square_decomposition, KartDiagram, Sections, SquareDecomposition,
};
pub use komp::{komp_category, Chain, KompCat, RcptFunctor, RcptPoints, KOMP_ORIENTATION};
pub use multi::{box_product, BoxProduct, MultiSimplicial, Representable, Single};

#[derive(Debug, Error)]
pub enum NerveError {
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("bad marking: {0}")]
    Marking(String),
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("size cap exceeded: {what} {got} > cap {cap}")]
    Cap { what: &'static str, got: usize, cap: usize },
    #[error("missing limit: {0}")]
    MissingLimit(String),
    #[error("not monotone: {0}")]
    NotMonotone(String),
    #[error("{class} is not closed under composition: {witness}")]
    NotCompositionStable { class: String, witness: String },
    #[error("bad twist: {0}")]
    Twist(String),
    #[error("truncation chain: {0}")]
    Chain(String),
    #[error(transparent)]
    Category(#[from] CatError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

impl NerveError {
    pub fn is_cap(&self) -> bool {
        match self {
            NerveError::Cap { .. } => true,
            NerveError::Poset(e) => e.is_cap(),
            _ => false,
        }
    }
}
