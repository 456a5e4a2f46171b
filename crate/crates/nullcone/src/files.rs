//! On-disk system format: a small JSON document holding the symmetric
//! matrix of `H` and optionally the symplectic matrix (defaulting to the
//! standard one for `(q, p)` ordering).
//!
//! ```json
//! {
//!   "dim": 4,
//!   "S": [[0.0, 0.0, 0.5, 0.0], ...],
//!   "Omega": [[...]],
//!   "metadata": {"name": "...", "description": "..."}
//! }
//! ```
//!
//! `S` must be symmetric and `Omega` skew to within `1e-12` relative;
//! both are cleaned up exactly on load. Matrices are row-major nested
//! arrays of decimal literals (JSON cannot carry NaN or infinities, so
//! finiteness comes with parsing).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{check_symplectic, LinalgError, QuadraticForm, RealMatrix, SymplecticStructure};

/// Symmetry/skewness slack accepted from input files.
pub const INPUT_DEFECT_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Invalid { field: &'static str, message: String },
    #[error("field `{field}`: {source}")]
    Linalg {
        field: &'static str,
        #[source]
        source: LinalgError,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

/// Raw file representation (exactly what is serialized).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub dim: usize,
    #[serde(rename = "S")]
    pub s: Vec<Vec<f64>>,
    #[serde(rename = "Omega", default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

/// A validated system ready for analysis.
#[derive(Debug, Clone)]
pub struct ParsedSystem {
    pub q: QuadraticForm,
    pub w: SymplecticStructure,
    pub metadata: Metadata,
}

fn matrix_from_rows(
    rows: &[Vec<f64>],
    dim: usize,
    field: &'static str,
) -> Result<RealMatrix, FileError> {
    if rows.len() != dim {
        return Err(FileError::Invalid {
            field,
            message: format!("expected {dim} rows, found {}", rows.len()),
        });
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(FileError::Invalid {
                field,
                message: format!("row {i} has {} entries, expected {dim}", row.len()),
            });
        }
    }
    let m = RealMatrix::from_nested(rows)
        .map_err(|source| FileError::Linalg { field, source })?;
    if !m.is_finite() {
        return Err(FileError::Invalid { field, message: "entries must be finite".into() });
    }
    Ok(m)
}

pub fn parse_system_file(text: &str) -> Result<ParsedSystem, FileError> {
    let file: SystemFile = serde_json::from_str(text).map_err(|e| FileError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate(&file)
}

pub fn validate(file: &SystemFile) -> Result<ParsedSystem, FileError> {
    if file.dim == 0 || file.dim % 2 != 0 {
        return Err(FileError::Invalid {
            field: "dim",
            message: format!("dimension must be even and positive, found {}", file.dim),
        });
    }
    let s = matrix_from_rows(&file.s, file.dim, "S")?;
    let defect = s.symmetry_defect();
    if defect > INPUT_DEFECT_TOL {
        return Err(FileError::Invalid {
            field: "S",
            message: format!("matrix is not symmetric (relative defect {defect:.3e})"),
        });
    }
    let q = QuadraticForm::new(s).map_err(|source| FileError::Linalg { field: "S", source })?;

    let w = match &file.omega {
        None => SymplecticStructure::standard(file.dim),
        Some(rows) => {
            let omega = matrix_from_rows(rows, file.dim, "Omega")?;
            let defect = omega.skew_defect();
            if defect > INPUT_DEFECT_TOL {
                return Err(FileError::Invalid {
                    field: "Omega",
                    message: format!("matrix is not skew-symmetric (relative defect {defect:.3e})"),
                });
            }
            check_symplectic(&omega, INPUT_DEFECT_TOL.max(1e-12))
                .map_err(|source| FileError::Linalg { field: "Omega", source })?
        }
    };
    if w.dim() != q.dim() {
        return Err(FileError::Invalid {
            field: "Omega",
            message: format!("dimension {} does not match S ({})", w.dim(), q.dim()),
        });
    }
    Ok(ParsedSystem { q, w, metadata: file.metadata.clone().unwrap_or_default() })
}

/// Build the serializable file for a form (with the standard structure
/// left implicit).
pub fn system_file(q: &QuadraticForm, metadata: Option<Metadata>) -> SystemFile {
    SystemFile {
        dim: q.dim(),
        s: q.matrix().to_nested(),
        omega: None,
        metadata,
    }
}

pub fn to_json_string(file: &SystemFile) -> String {
    let mut text = serde_json::to_string_pretty(file).expect("system files are serializable");
    text.push('\n');
    text
}
