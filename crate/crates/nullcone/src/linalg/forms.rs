use serde::{Deserialize, Serialize};

use super::jacobi::sym_eigen;
use super::matrix::RealMatrix;
use super::svd::Svd;
use super::LinalgError;

/// Eigenvalue sign counts of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    /// The index of a nondegenerate form: min(n₊, n₋).
    pub fn index(&self) -> usize {
        self.n_plus.min(self.n_minus)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.n_zero == 0
    }

    /// Balanced inertia (n₊ = n₋, no kernel), the only case whose
    /// null-cone contains half-dimensional subspaces.
    pub fn is_signature_zero(&self) -> bool {
        self.n_zero == 0 && self.n_plus == self.n_minus
    }
}

/// Quadratic Hamiltonian `H(x) = xᵀSx`, stored exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    dim: usize,
    s: RealMatrix,
}

impl QuadraticForm {
    /// Symmetrizes the input; rejects non-square, odd-dimensional or
    /// non-finite matrices.
    pub fn new(m: RealMatrix) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        if m.rows() % 2 != 0 || m.rows() == 0 {
            return Err(LinalgError::OddDimension(m.rows()));
        }
        if !m.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { dim: m.rows(), s: m.symmetrized() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.s
    }

    /// `H(x) = xᵀSx`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.s.quad(x)
    }

    /// Polarized pairing `xᵀSy`.
    pub fn pairing(&self, x: &[f64], y: &[f64]) -> f64 {
        self.s.bilin(x, y)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { dim: self.dim, s: self.s.scale(c) }
    }

    /// Congruence transform `PᵀSP` as a new form.
    pub fn congruence(&self, p: &RealMatrix) -> Result<Self, LinalgError> {
        Self::new(p.t().matmul(&self.s).matmul(p))
    }
}

/// Nondegenerate skew pairing `ω(x, y) = xᵀΩy`, stored exactly skew.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticStructure {
    dim: usize,
    omega: RealMatrix,
}

impl SymplecticStructure {
    /// The standard structure for coordinates `(q₁..q_n, p₁..p_n)`:
    /// `Ω = [[0, -I],[I, 0]]`, so `ω(e_{p_i}, e_{q_i}) = +1`.
    pub fn standard(dim: usize) -> Self {
        assert!(dim % 2 == 0 && dim > 0, "dimension must be even and positive");
        let n = dim / 2;
        let mut omega = RealMatrix::zeros(dim, dim);
        for i in 0..n {
            omega[(i, n + i)] = -1.0;
            omega[(n + i, i)] = 1.0;
        }
        Self { dim, omega }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.omega
    }

    /// `ω(x, y) = xᵀΩy`.
    pub fn pairing(&self, x: &[f64], y: &[f64]) -> f64 {
        self.omega.bilin(x, y)
    }
}

/// Validate a candidate symplectic matrix: square, even-dimensional,
/// skew within `tol` (then antisymmetrized exactly) and nondegenerate.
pub fn check_symplectic(omega: &RealMatrix, tol: f64) -> Result<SymplecticStructure, LinalgError> {
    if !omega.is_square() {
        return Err(LinalgError::NotSquare { rows: omega.rows(), cols: omega.cols() });
    }
    if omega.rows() % 2 != 0 || omega.rows() == 0 {
        return Err(LinalgError::OddDimension(omega.rows()));
    }
    if !omega.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let defect = omega.skew_defect();
    if defect > tol {
        return Err(LinalgError::NotSkew { defect });
    }
    let clean = omega.antisymmetrized();
    let svd = Svd::compute(&clean);
    let scale = clean.norm_max().max(f64::MIN_POSITIVE);
    let sigma_min = svd.smallest() / scale;
    if sigma_min <= tol {
        return Err(LinalgError::DegenerateOmega { sigma_min });
    }
    Ok(SymplecticStructure { dim: clean.rows(), omega: clean })
}

/// Count eigenvalues of `S` above `+tol·‖S‖`, below `-tol·‖S‖`, and in
/// the band between. A nonzero `n_zero` is reported, not an error.
pub fn inertia(q: &QuadraticForm, tol: f64) -> Inertia {
    let (eigs, _) = sym_eigen(q.matrix()).expect("symmetric eigensolver on validated form");
    let scale = q.matrix().norm_max();
    let band = tol * scale;
    let mut counts = Inertia { n_plus: 0, n_minus: 0, n_zero: 0 };
    for &e in &eigs {
        if e > band {
            counts.n_plus += 1;
        } else if e < -band {
            counts.n_minus += 1;
        } else {
            counts.n_zero += 1;
        }
    }
    counts
}

/// Congruence transformation to the unit diagonal form: returns `P` with
/// `PᵀSP = diag(-1,…,-1,+1,…,+1)`, negative entries first.
pub fn congruence_diagonalize(
    q: &QuadraticForm,
    tol: f64,
) -> Result<(RealMatrix, Inertia), LinalgError> {
    let counts = inertia(q, tol);
    if !counts.is_nondegenerate() {
        return Err(LinalgError::DegenerateForm { inertia: counts });
    }
    let (eigs, vecs) = sym_eigen(q.matrix())?;
    // Ascending eigenvalue order puts all negatives first.
    let cols: Vec<Vec<f64>> = (0..eigs.len())
        .map(|j| {
            let scale = 1.0 / eigs[j].abs().sqrt();
            vecs.col(j).iter().map(|x| x * scale).collect()
        })
        .collect();
    Ok((RealMatrix::from_cols(&cols), counts))
}
