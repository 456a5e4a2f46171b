use super::matrix::RealMatrix;
use super::LinalgError;

/// LU decomposition with partial pivoting.
pub struct LuDecomp {
    lu: RealMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl LuDecomp {
    pub fn new(a: &RealMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = a.norm_max().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let mut pivot_row = k;
            for i in (k + 1)..n {
                if lu[(i, k)].abs() > lu[(pivot_row, k)].abs() {
                    pivot_row = i;
                }
            }
            if lu[(pivot_row, k)].abs() <= 1e-14 * scale {
                return Err(LinalgError::SingularMatrix);
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
                sign = -sign;
            }
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / lu[(k, k)];
                lu[(i, k)] = factor;
                for j in (k + 1)..n {
                    lu[(i, j)] -= factor * lu[(k, j)];
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 1..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// Solve `A X = B` column by column.
    pub fn solve_mat(&self, b: &RealMatrix) -> RealMatrix {
        let cols: Vec<Vec<f64>> = (0..b.cols()).map(|j| self.solve_vec(&b.col(j))).collect();
        RealMatrix::from_cols(&cols)
    }

    pub fn det(&self) -> f64 {
        let n = self.lu.rows();
        (0..n).fold(self.sign, |acc, i| acc * self.lu[(i, i)])
    }

    pub fn inverse(&self) -> RealMatrix {
        self.solve_mat(&RealMatrix::identity(self.lu.rows()))
    }
}

/// Determinant helper; returns 0 for numerically singular input.
pub fn det(a: &RealMatrix) -> f64 {
    match LuDecomp::new(a) {
        Ok(lu) => lu.det(),
        Err(_) => 0.0,
    }
}
