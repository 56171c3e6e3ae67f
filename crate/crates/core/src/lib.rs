//! Finite models of compactification categories.
//!
//! The crate enumerates up-set lattices and the lattices `Crt^n`, builds
//! truncated nerves of finite posets and categories, restricted multisimplicial
//! nerves, searches and verifies inner-anodyne certificates, and computes
//! integral homology of the resulting complexes.

pub mod caps;
pub mod certify;
pub mod error;
pub mod fincat;
pub mod homology;
pub mod multinerve;
pub mod poset;
pub mod report;
pub mod simplicial;
pub mod toys;

pub use caps::Caps;
pub use error::Error;
pub use report::Check;
