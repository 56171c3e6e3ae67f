//! Inner-anodyne certificates: sequences of inner horn fillings with a
//! replay verifier.

mod search;
mod staged;
mod verify;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::poset::PosetError;
use crate::simplicial::{SsetError, TruncSSet};

pub use search::{find_certificate, start_from_vertex_sets};
pub use staged::{cert_box_in_ccpt, cert_boxplus_cover, lattice_filtration_certificate, StagedCertificate};
pub use verify::{verify_certificate, Verification};

#[derive(Debug, Error)]
pub enum CertError {
    #[error("size cap exceeded: {what} {got} > cap {cap}")]
    Cap { what: &'static str, got: usize, cap: usize },
    #[error("search budget exhausted after {attempts} attempts ({elapsed_ms} ms): {placed} moves placed, {remaining} simplices missing")]
    Budget { attempts: u64, elapsed_ms: u128, placed: usize, remaining: usize },
    #[error("no certificate found: {0}")]
    NotFound(String),
    #[error("ambient complex is not determined by vertex lists")]
    NotVertexDetermined,
    #[error("unknown simplex {0}")]
    UnknownSimplex(String),
    #[error("start complex is not closed under faces: {0}")]
    NotFaceClosed(String),
    #[error("ambient hash mismatch: certificate has {expected}, ambient is {got}")]
    HashMismatch { expected: String, got: String },
    #[error("bad filtration: {0}")]
    Filtration(String),
    #[error(transparent)]
    Simplicial(#[from] SsetError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

impl CertError {
    pub fn is_cap(&self) -> bool {
        match self {
            CertError::Cap { .. } | CertError::Budget { .. } => true,
            CertError::Simplicial(e) => e.is_cap(),
            CertError::Poset(e) => e.is_cap(),
            _ => false,
        }
    }
}

/// Fill the horn `Λ^m_k` of the `m`-simplex with these vertices, adding the
/// simplex and its `k`-th face.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub m: usize,
    pub k: usize,
    pub vertices: Vec<usize>,
    /// Filtration stage the move belongs to; 0 outside staged searches.
    #[serde(default)]
    pub stage: usize,
}

/// A start sub-complex of `ambient` and the moves growing it to all of `ambient`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub ambient: TruncSSet,
    /// Nondegenerate cells `(dim, index)` of the start complex.
    pub start: Vec<(usize, usize)>,
    pub moves: Vec<Move>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveDoc {
    pub m: usize,
    pub k: usize,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub stage: usize,
}

/// Wire format; vertices are given by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub ambient_hash: String,
    pub start: Vec<Vec<String>>,
    pub moves: Vec<MoveDoc>,
}

/// SHA-256 of the sorted vertex-label lists of every nondegenerate cell.
pub fn ambient_hash(x: &TruncSSet) -> String {
    let mut lines: Vec<String> = Vec::new();
    for d in 0..=x.max_dim() {
        for i in 0..x.count(d) {
            let labels: Vec<&str> = x.vertices(d, i).iter().map(|&v| x.label(v)).collect();
            lines.push(format!("{d}:{}", labels.join(",")));
        }
    }
    lines.sort();
    let mut h = Sha256::new();
    for l in &lines {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

impl Certificate {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn to_doc(&self) -> CertificateDoc {
        let x = &self.ambient;
        let names = |vs: &[usize]| vs.iter().map(|&v| x.label(v).to_string()).collect::<Vec<_>>();
        CertificateDoc {
            ambient_hash: ambient_hash(x),
            start: self.start.iter().map(|&(d, i)| names(x.vertices(d, i))).collect(),
            moves: self
                .moves
                .iter()
                .map(|mv| MoveDoc { m: mv.m, k: mv.k, vertices: names(&mv.vertices), stage: mv.stage })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("certificate serializes")
    }

    /// Rebuilds a certificate over `ambient`, refusing a foreign hash.
    pub fn from_doc(ambient: TruncSSet, doc: &CertificateDoc) -> Result<Certificate, CertError> {
        let got = ambient_hash(&ambient);
        if got != doc.ambient_hash {
            return Err(CertError::HashMismatch { expected: doc.ambient_hash.clone(), got });
        }
        let index = ambient.label_index_owned();
        let resolve = |names: &[String]| -> Result<Vec<usize>, CertError> {
            names
                .iter()
                .map(|n| index.get(n.as_str()).copied().ok_or_else(|| CertError::UnknownSimplex(n.clone())))
                .collect()
        };
        let mut start = Vec::with_capacity(doc.start.len());
        for vs in &doc.start {
            let ids = resolve(vs)?;
            let cell = ambient
                .cell_by_vertices(&ids)
                .ok_or_else(|| CertError::UnknownSimplex(vs.join(",")))?;
            start.push(cell);
        }
        let mut moves = Vec::with_capacity(doc.moves.len());
        for mv in &doc.moves {
            moves.push(Move { m: mv.m, k: mv.k, vertices: resolve(&mv.vertices)?, stage: mv.stage });
        }
        Ok(Certificate { ambient, start, moves })
    }

    pub fn from_json(ambient: TruncSSet, text: &str) -> Result<Certificate, CertError> {
        let doc: CertificateDoc =
            serde_json::from_str(text).map_err(|e| CertError::UnknownSimplex(format!("json: {e}")))?;
        Certificate::from_doc(ambient, &doc)
    }
}

trait LabelIndex {
    fn label_index_owned(&self) -> std::collections::HashMap<String, usize>;
}

impl LabelIndex for TruncSSet {
    fn label_index_owned(&self) -> std::collections::HashMap<String, usize> {
        self.labels().iter().enumerate().map(|(i, l)| (l.clone(), i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::simplex;

    #[test]
    fn json_round_trip_and_tamper() {
        let x = simplex(2, 2);
        let start = start_from_vertex_sets(&x, &[vec![0, 1], vec![1, 2]]).unwrap();
        let cert = Certificate { ambient: x.clone(), start, moves: vec![Move { m: 2, k: 1, vertices: vec![0, 1, 2], stage: 0 }] };
        let text = cert.to_json();
        let back = Certificate::from_json(x.clone(), &text).unwrap();
        assert_eq!(back.moves, cert.moves);
        assert!(verify_certificate(&back).valid);
        let other = simplex(3, 3);
        assert!(matches!(Certificate::from_json(other, &text), Err(CertError::HashMismatch { .. })));
    }
}
