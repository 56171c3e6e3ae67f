use thiserror::Error;

use crate::certify::CertError;
use crate::fincat::CatError;
use crate::homology::HomologyError;
use crate::multinerve::NerveError;
use crate::poset::PosetError;
use crate::simplicial::SsetError;

/// Umbrella error for callers that touch several modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Category(#[from] CatError),
    #[error(transparent)]
    Simplicial(#[from] SsetError),
    #[error(transparent)]
    Nerve(#[from] NerveError),
    #[error(transparent)]
    Certificate(#[from] CertError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("invalid caps: {0}")]
    Caps(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors raised by a resource cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        match self {
            Error::Poset(e) => e.is_cap(),
            Error::Simplicial(e) => e.is_cap(),
            Error::Nerve(e) => e.is_cap(),
            Error::Certificate(e) => e.is_cap(),
            _ => false,
        }
    }
}
