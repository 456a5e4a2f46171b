//! Small dense real linear algebra substrate.
//!
//! Everything here targets desk-scale matrices (dimension ≤ 16): cyclic
//! Jacobi for symmetric eigenproblems, one-sided Jacobi SVD, partially
//! pivoted LU, a complex Hessenberg-QR eigensolver for general real
//! matrices, and symplectic utilities (validation, random symplectic
//! conjugations). Tolerances are relative to the max-abs matrix norm.

mod eig;
mod forms;
mod jacobi;
mod lu;
mod matrix;
mod svd;
mod symplectic;

pub use eig::eigenvalues;
pub use forms::{congruence_diagonalize, inertia, Inertia, QuadraticForm, SymplecticStructure};
pub use forms::check_symplectic;
pub use jacobi::sym_eigen;
pub use lu::{det, LuDecomp};
pub use matrix::{orthonormalize, principal_angle_sin, RealMatrix};
pub use svd::Svd;
pub use symplectic::{matrix_exp, random_orthogonal, random_symplectic};

use thiserror::Error;

/// Errors produced by the linear-algebra substrate.
#[derive(Debug, Clone, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {context}")]
    ShapeMismatch { context: String },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("dimension {0} is not even")]
    OddDimension(usize),
    #[error("matrix is not skew-symmetric (defect {defect:.3e} relative)")]
    NotSkew { defect: f64 },
    #[error("skew form is degenerate (smallest singular value {sigma_min:.3e} relative)")]
    DegenerateOmega { sigma_min: f64 },
    #[error("quadratic form is degenerate: inertia ({}, {}, {})", .inertia.n_plus, .inertia.n_minus, .inertia.n_zero)]
    DegenerateForm { inertia: Inertia },
    #[error("matrix is numerically singular")]
    SingularMatrix,
    #[error("eigenvalue iteration failed to converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("columns are numerically dependent; cannot orthonormalize")]
    RankDeficient,
}
