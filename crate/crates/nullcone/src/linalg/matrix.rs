use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use super::LinalgError;

/// Dense real matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Build from nested rows; the rows must all have the same length.
    pub fn from_nested<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(LinalgError::ShapeMismatch {
                    context: format!("ragged rows: expected {ncols} entries, found {}", r.len()),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: nrows, cols: ncols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn t(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: f64) -> Self {
        let data = self.data.iter().map(|a| a * c).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[f64]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    pub fn from_cols(cols: &[Vec<f64>]) -> Self {
        let rows = cols.first().map(|c| c.len()).unwrap_or(0);
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Max-abs entry; the matrix norm used for all relative tolerances.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn trace(&self) -> f64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn symmetrized(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    pub fn antisymmetrized(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] - self[(j, i)]))
    }

    /// Defect of symmetry, relative to the matrix norm.
    pub fn symmetry_defect(&self) -> f64 {
        let scale = self.norm_max().max(f64::MIN_POSITIVE);
        self.sub(&self.t()).norm_max() / scale
    }

    pub fn skew_defect(&self) -> f64 {
        let scale = self.norm_max().max(f64::MIN_POSITIVE);
        self.add(&self.t()).norm_max() / scale
    }

    /// Quadratic form value `xᵀ A x`.
    pub fn quad(&self, x: &[f64]) -> f64 {
        self.bilin(x, x)
    }

    /// Bilinear pairing `xᵀ A y`.
    pub fn bilin(&self, x: &[f64], y: &[f64]) -> f64 {
        assert_eq!(self.rows, x.len());
        assert_eq!(self.cols, y.len());
        let mut acc = 0.0;
        for i in 0..self.rows {
            let mut row = 0.0;
            for j in 0..self.cols {
                row += self[(i, j)] * y[j];
            }
            acc += x[i] * row;
        }
        acc
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)]).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RealMatrix {
    type Output = RealMatrix;
    fn mul(self, rhs: &RealMatrix) -> RealMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RealMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                write!(f, "{:>13.6e}", self[(i, j)])?;
                if j + 1 < self.cols {
                    write!(f, ", ")?;
                }
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormalize the columns by modified Gram-Schmidt with one
/// re-orthogonalization pass. Fails if the columns are numerically
/// dependent relative to their original scale.
pub fn orthonormalize(m: &RealMatrix) -> Result<RealMatrix, LinalgError> {
    let n = m.cols();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| m.col(j)).collect();
    let scale = m.norm_max().max(f64::MIN_POSITIVE);
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj = dot(&cols[j], &cols[k]);
                let ck = cols[k].clone();
                for (x, y) in cols[j].iter_mut().zip(&ck) {
                    *x -= proj * y;
                }
            }
        }
        let nrm = norm2(&cols[j]);
        if nrm <= 1e-12 * scale * (m.rows() as f64) {
            return Err(LinalgError::RankDeficient);
        }
        for x in cols[j].iter_mut() {
            *x /= nrm;
        }
    }
    Ok(RealMatrix::from_cols(&cols))
}

/// Sine of the largest principal angle between the column spans of two
/// matrices with orthonormal columns (equal column counts). Accurate for
/// nearly coincident spans, where `1 - cos θ` underflows.
pub fn principal_angle_sin(a: &RealMatrix, b: &RealMatrix) -> f64 {
    assert_eq!(a.rows(), b.rows());
    assert_eq!(a.cols(), b.cols());
    // residual = (I - A Aᵀ) B; its largest singular value is sin θ_max.
    let proj = a.matmul(&a.t().matmul(b));
    let residual = b.sub(&proj);
    let svd = super::svd::Svd::compute(&residual);
    svd.sigma.first().copied().unwrap_or(0.0)
}
