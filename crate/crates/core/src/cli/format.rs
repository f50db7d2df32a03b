//! Matrix files and run reports.
//!
//! A matrix file is a JSON object with exactly two keys:
//!
//! ```text
//! {
//!   "dim": 2,
//!   "entries": [
//!     [0.5, 0.0],
//!     [0.0, 0.0],
//!     [0.0, 0.0],
//!     [0.5, 0.0]
//!   ]
//! }
//! ```
//!
//! `entries` lists the `dim²` matrix entries in row-major order, each as a
//! `[re, im]` pair of finite JSON numbers. The parser accepts any JSON
//! whitespace and key order; [`serialize_matrix`] always writes the layout
//! above, with the shortest decimal that round-trips each `f64`, and a
//! trailing newline.

use std::fmt::Write as _;

use faer::c64;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

fn parse_error(e: &serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses matrix-file bytes.
pub fn parse_matrix(text: &[u8]) -> Result<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_slice(text).map_err(|e| parse_error(&e))?;
    if file.dim == 0 {
        return Err(Error::Dimension("dim must be positive".into()));
    }
    let expected = file
        .dim
        .checked_mul(file.dim)
        .ok_or_else(|| Error::Dimension(format!("dim {} is too large", file.dim)))?;
    if file.entries.len() != expected {
        return Err(Error::Dimension(format!(
            "dim {} needs {expected} entries, found {}",
            file.dim,
            file.entries.len()
        )));
    }
    if let Some(k) = file
        .entries
        .iter()
        .position(|[re, im]| !re.is_finite() || !im.is_finite())
    {
        return Err(Error::Parse {
            line: 0,
            column: 0,
            message: format!("entry {k} is not finite"),
        });
    }
    let entries = file
        .entries
        .into_iter()
        .map(|[re, im]| c64::new(re, im))
        .collect();
    ComplexMatrix::from_row_major(file.dim, entries)
}

/// Canonical matrix-file bytes for `a`.
pub fn serialize_matrix(a: &ComplexMatrix) -> Vec<u8> {
    let n = a.dim();
    let mut out = String::with_capacity(32 + n * n * 48);
    let _ = write!(out, "{{\n  \"dim\": {n},\n  \"entries\": [\n");
    let entries = a.row_major();
    for (k, z) in entries.iter().enumerate() {
        let sep = if k + 1 == entries.len() { "" } else { "," };
        let _ = writeln!(out, "    [{:?}, {:?}]{sep}", z.re, z.im);
    }
    out.push_str("  ]\n}\n");
    out.into_bytes()
}

/// Lowercase hex SHA-256 of `bytes`.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Pretty JSON with a trailing newline. Key order follows field order.
pub fn to_report_json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("report types serialize");
    bytes.push(b'\n');
    bytes
}
