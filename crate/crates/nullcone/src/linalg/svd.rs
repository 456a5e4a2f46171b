use super::matrix::RealMatrix;

/// Thin singular value decomposition `A = U Σ Vᵀ` by one-sided Jacobi.
///
/// One-sided Jacobi orthogonalizes the columns of `A` by right
/// rotations, which resolves small singular values to full working
/// precision (no explicit Gram matrix is formed). Singular values are
/// returned in descending order. For a rank-deficient `A` the trailing
/// columns of `U` corresponding to zero singular values are zero.
pub struct Svd {
    pub u: RealMatrix,
    pub sigma: Vec<f64>,
    pub v: RealMatrix,
}

impl Svd {
    pub fn compute(a: &RealMatrix) -> Self {
        // Wide matrices are padded with zero rows so the full set of
        // right singular vectors (including the null space) is produced;
        // the padding rows of U are sliced off afterwards.
        if a.rows() < a.cols() {
            let padded = RealMatrix::from_fn(a.cols(), a.cols(), |i, j| {
                if i < a.rows() {
                    a[(i, j)]
                } else {
                    0.0
                }
            });
            let full = Self::compute(&padded);
            let u = full.u.block(0, 0, a.rows(), full.u.cols());
            return Self { u, sigma: full.sigma, v: full.v };
        }
        let n = a.cols();
        let mut w = a.clone();
        let mut v = RealMatrix::identity(n);
        let scale = a.norm_max();
        if scale == 0.0 || n == 0 {
            return Self { u: w, sigma: vec![0.0; n], v };
        }

        let tol = 1e-15;
        let max_sweeps = 60;
        for _ in 0..max_sweeps {
            let mut rotated = false;
            for p in 0..n.saturating_sub(1) {
                for q in (p + 1)..n {
                    let cp = w.col(p);
                    let cq = w.col(q);
                    let app: f64 = cp.iter().map(|x| x * x).sum();
                    let aqq: f64 = cq.iter().map(|x| x * x).sum();
                    let apq: f64 = cp.iter().zip(&cq).map(|(x, y)| x * y).sum();
                    if apq.abs() <= tol * (app * aqq).sqrt() || apq == 0.0 {
                        continue;
                    }
                    rotated = true;
                    let theta = 0.5 * (2.0 * apq).atan2(aqq - app);
                    let (s, c) = theta.sin_cos();
                    for i in 0..w.rows() {
                        let wip = w[(i, p)];
                        let wiq = w[(i, q)];
                        w[(i, p)] = c * wip - s * wiq;
                        w[(i, q)] = s * wip + c * wiq;
                    }
                    for i in 0..n {
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = c * vip - s * viq;
                        v[(i, q)] = s * vip + c * viq;
                    }
                }
            }
            if !rotated {
                break;
            }
        }

        // Column norms are the singular values; sort descending.
        let mut sigma: Vec<f64> = (0..n)
            .map(|j| w.col(j).iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
        let w_cols: Vec<Vec<f64>> = order.iter().map(|&j| w.col(j)).collect();
        let v_cols: Vec<Vec<f64>> = order.iter().map(|&j| v.col(j)).collect();
        sigma = order.iter().map(|&j| sigma[j]).collect();

        let mut u = RealMatrix::from_cols(&w_cols);
        for (j, &s) in sigma.iter().enumerate() {
            if s > 0.0 {
                for i in 0..u.rows() {
                    u[(i, j)] /= s;
                }
            }
        }
        Self { u, sigma, v: RealMatrix::from_cols(&v_cols) }
    }

    /// Numerical rank at a relative threshold.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let smax = self.sigma.first().copied().unwrap_or(0.0);
        self.sigma.iter().filter(|&&s| s > rel_tol * smax).count()
    }

    /// Orthonormal basis of the (right) null space at a relative threshold.
    pub fn nullspace(&self, rel_tol: f64) -> RealMatrix {
        let smax = self.sigma.first().copied().unwrap_or(0.0);
        let cols: Vec<Vec<f64>> = self
            .sigma
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= rel_tol * smax)
            .map(|(j, _)| self.v.col(j))
            .collect();
        RealMatrix::from_cols(&cols)
    }

    pub fn smallest(&self) -> f64 {
        self.sigma.last().copied().unwrap_or(0.0)
    }
}
