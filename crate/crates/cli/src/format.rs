//! The `.qst` state file: one JSON document with the subsystem dimensions,
//! the real and imaginary parts of the matrix as row arrays, and optional
//! string metadata.
//!
//! ```text
//! {
//!   "dims": [2],
//!   "matrix_re": [
//!     [5.0000000000000000e-1, 0.0000000000000000e0],
//!     [0.0000000000000000e0, 5.0000000000000000e-1]
//!   ],
//!   "matrix_im": [
//!     [0.0000000000000000e0, 0.0000000000000000e0],
//!     [0.0000000000000000e0, 0.0000000000000000e0]
//!   ]
//! }
//! ```
//!
//! [`serialize_state`] writes the canonical form: fixed key order, 17
//! significant digits per entry, `-0` written as `0`, a trailing newline.

use std::collections::BTreeMap;

use discord_core::qstate::{ComplexMatrix, DensityMatrix};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

/// Validation tolerance applied when reading a state file.
pub const PARSE_TOL: f64 = 1e-8;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: Option<Vec<usize>>,
    matrix_re: Vec<Vec<f64>>,
    matrix_im: Vec<Vec<f64>>,
    #[serde(default)]
    #[allow(dead_code)]
    metadata: BTreeMap<String, String>,
}

fn parse_document(text: &str) -> Result<StateFile, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::Input(format!(
            "syntax error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn assemble(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<ComplexMatrix, CliError> {
    let n = re.len();
    if im.len() != n {
        return Err(CliError::Input(format!(
            "dimension mismatch: matrix_re has {n} rows, matrix_im has {}",
            im.len()
        )));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, (r, m)) in re.iter().zip(im).enumerate() {
        if r.len() != n || m.len() != n {
            return Err(CliError::Input(format!(
                "dimension mismatch: row {i} has {} real and {} imaginary entries, expected {n}",
                r.len(),
                m.len()
            )));
        }
        entries.extend(r.iter().zip(m).map(|(&a, &b)| Complex64::new(a, b)));
    }
    ComplexMatrix::from_row_major(n, n, entries).map_err(CliError::from)
}

/// Reads a state file and validates it as a density matrix at [`PARSE_TOL`].
pub fn parse_state(text: &str) -> Result<DensityMatrix, CliError> {
    let doc = parse_document(text)?;
    let matrix = assemble(&doc.matrix_re, &doc.matrix_im)?;
    let dims = doc
        .dims
        .ok_or_else(|| CliError::Input("missing field `dims`".into()))?;
    DensityMatrix::new(matrix, dims, PARSE_TOL)
        .map_err(|e| CliError::Input(format!("invalid state: {e}")))
}

/// Reads a square matrix (for example a measurement basis) in the same
/// format; `dims` is optional and ignored.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, CliError> {
    let doc = parse_document(text)?;
    assemble(&doc.matrix_re, &doc.matrix_im)
}

fn number(x: f64) -> String {
    // adding +0.0 turns -0.0 into 0.0
    format!("{:.16e}", x + 0.0)
}

fn rows(m: &ComplexMatrix, part: impl Fn(Complex64) -> f64) -> String {
    let lines: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols()).map(|j| number(part(m[(i, j)]))).collect();
            format!("    [{}]", cells.join(", "))
        })
        .collect();
    format!("[\n{}\n  ]", lines.join(",\n"))
}

/// Canonical text of a matrix with optional dims and metadata.
pub fn serialize_matrix(m: &ComplexMatrix, dims: Option<&[usize]>, metadata: &BTreeMap<String, String>) -> String {
    let mut fields = Vec::new();
    if let Some(dims) = dims {
        let d: Vec<String> = dims.iter().map(ToString::to_string).collect();
        fields.push(format!("  \"dims\": [{}]", d.join(", ")));
    }
    fields.push(format!("  \"matrix_re\": {}", rows(m, |z| z.re)));
    fields.push(format!("  \"matrix_im\": {}", rows(m, |z| z.im)));
    if !metadata.is_empty() {
        let entries: Vec<String> = metadata
            .iter()
            .map(|(k, v)| {
                format!(
                    "    {}: {}",
                    serde_json::to_string(k).expect("string keys serialize"),
                    serde_json::to_string(v).expect("string values serialize")
                )
            })
            .collect();
        fields.push(format!("  \"metadata\": {{\n{}\n  }}", entries.join(",\n")));
    }
    format!("{{\n{}\n}}\n", fields.join(",\n"))
}

/// Canonical text of a state.
pub fn serialize_state(rho: &DensityMatrix) -> String {
    serialize_state_with_metadata(rho, &BTreeMap::new())
}

pub fn serialize_state_with_metadata(rho: &DensityMatrix, metadata: &BTreeMap<String, String>) -> String {
    serialize_matrix(rho.matrix(), Some(rho.dims()), metadata)
}
