//! JSON schemas for matrices, Kraus sets and generic reports.
//!
//! Complex matrices are flat row-major lists of `[re, im]` pairs:
//!
//! ```json
//! {"kind": "kraus", "dim": 4, "kraus": [[[0.5, 0.0], ...16 pairs...], ...]}
//! {"kind": "chi", "dim": 16, "matrix": [[re, im], ...]}
//! ```
//!
//! `kind` is one of `kraus`, `chi`, `superoperator`, `unitary`. Floats are
//! written with shortest round-trip formatting, so values survive a
//! write/read cycle bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

pub type ComplexPair = [f64; 2];

pub fn matrix_to_pairs(m: &CMatrix) -> Vec<ComplexPair> {
    m.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

/// Square matrix from a flat pair list; the dimension is inferred when `dim` is `None`.
pub fn pairs_to_matrix(pairs: &[ComplexPair], dim: Option<usize>) -> Result<CMatrix> {
    let n = match dim {
        Some(d) => d,
        None => {
            let d = (pairs.len() as f64).sqrt().round() as usize;
            if d * d != pairs.len() {
                return Err(Error::Data(format!(
                    "{} entries do not form a square matrix",
                    pairs.len()
                )));
            }
            d
        }
    };
    if n == 0 || pairs.len() != n * n {
        return Err(Error::Data(format!(
            "expected {} entries for a {n}x{n} matrix, found {}",
            n * n,
            pairs.len()
        )));
    }
    if let Some(bad) = pairs.iter().flatten().find(|v| !v.is_finite()) {
        return Err(Error::Data(format!("non-finite matrix entry {bad}")));
    }
    Ok(CMatrix::from_vec(
        n,
        n,
        pairs.iter().map(|p| C64::new(p[0], p[1])).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub kraus: Vec<Vec<ComplexPair>>,
}

impl KrausFile {
    pub fn from_operators(ops: &[CMatrix]) -> Self {
        KrausFile {
            kind: Some("kraus".into()),
            dim: ops.first().map_or(0, |a| a.rows()),
            source: None,
            kraus: ops.iter().map(matrix_to_pairs).collect(),
        }
    }

    pub fn operators(&self) -> Result<Vec<CMatrix>> {
        if let Some(kind) = &self.kind {
            if kind != "kraus" {
                return Err(Error::Data(format!("expected kind 'kraus', found '{kind}'")));
            }
        }
        if self.kraus.is_empty() {
            return Err(Error::Data("Kraus file lists no operators".into()));
        }
        self.kraus
            .iter()
            .map(|p| pairs_to_matrix(p, Some(self.dim)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub kind: String,
    pub dim: usize,
    pub matrix: Vec<ComplexPair>,
}

impl MatrixFile {
    pub fn new(kind: &str, m: &CMatrix) -> Self {
        MatrixFile {
            kind: kind.into(),
            dim: m.rows(),
            matrix: matrix_to_pairs(m),
        }
    }

    pub fn to_matrix(&self, expected_kind: &str) -> Result<CMatrix> {
        if self.kind != expected_kind {
            return Err(Error::Data(format!(
                "expected kind '{expected_kind}', found '{}'",
                self.kind
            )));
        }
        pairs_to_matrix(&self.matrix, Some(self.dim))
    }
}

pub fn kraus_from_json(text: &str) -> Result<Vec<CMatrix>> {
    serde_json::from_str::<KrausFile>(text)?.operators()
}

pub fn kraus_to_json(ops: &[CMatrix]) -> String {
    to_json_string(&KrausFile::from_operators(ops))
}

pub fn read_kraus_file(path: &Path) -> Result<Vec<CMatrix>> {
    kraus_from_json(&fs::read_to_string(path)?)
}

pub fn read_matrix_file(path: &Path, expected_kind: &str) -> Result<CMatrix> {
    let f: MatrixFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    f.to_matrix(expected_kind)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, to_json_string(value))?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// `#[serde(with = ...)]` adapter for lists of square matrices.
pub mod matrix_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ms: &[CMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<ComplexPair>> = ms.iter().map(matrix_to_pairs).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<CMatrix>, D::Error> {
        let v = Vec::<Vec<ComplexPair>>::deserialize(d)?;
        v.iter()
            .map(|p| pairs_to_matrix(p, None).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `#[serde(with = ...)]` adapter for a single square matrix.
pub mod matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_pairs(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
        let v = Vec::<ComplexPair>::deserialize(d)?;
        pairs_to_matrix(&v, None).map_err(serde::de::Error::custom)
    }
}
