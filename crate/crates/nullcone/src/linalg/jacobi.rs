use super::matrix::RealMatrix;
use super::LinalgError;

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns the eigenvalues in ascending order and an orthogonal matrix
/// whose columns are the matching eigenvectors, so `A = Q D Qᵀ`.
/// Convergence is declared when the largest off-diagonal entry drops
/// below `1e-13` times the matrix norm.
pub fn sym_eigen(a: &RealMatrix) -> Result<(Vec<f64>, RealMatrix), LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.rows();
    let mut m = a.symmetrized();
    let mut q = RealMatrix::identity(n);
    let scale = m.norm_max();
    if scale == 0.0 || n == 1 {
        let eigs = (0..n).map(|i| m[(i, i)]).collect();
        return Ok(sorted(eigs, q));
    }
    let target = 1e-13 * scale;

    let max_sweeps = 100;
    for _sweep in 0..max_sweeps {
        let mut off = 0.0_f64;
        for p in 0..n {
            for r in (p + 1)..n {
                off = off.max(m[(p, r)].abs());
            }
        }
        if off <= target {
            let eigs = (0..n).map(|i| m[(i, i)]).collect();
            return Ok(sorted(eigs, q));
        }
        for p in 0..n - 1 {
            for r in (p + 1)..n {
                let apq = m[(p, r)];
                if apq.abs() <= 0.1 * target {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(r, r)];
                // Rotation angle zeroing the (p, r) entry.
                let theta = 0.5 * (2.0 * apq).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                rotate(&mut m, p, r, c, s);
                rotate_cols(&mut q, p, r, c, s);
            }
        }
    }
    Err(LinalgError::NoConvergence { iterations: max_sweeps })
}

/// Apply the two-sided rotation `Jᵀ M J` where J rotates the (p, r) plane.
fn rotate(m: &mut RealMatrix, p: usize, r: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkr = m[(k, r)];
        m[(k, p)] = c * mkp - s * mkr;
        m[(k, r)] = s * mkp + c * mkr;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mrk = m[(r, k)];
        m[(p, k)] = c * mpk - s * mrk;
        m[(r, k)] = s * mpk + c * mrk;
    }
    // Re-symmetrize the rotated pair against rounding drift.
    let avg = 0.5 * (m[(p, r)] + m[(r, p)]);
    m[(p, r)] = avg;
    m[(r, p)] = avg;
}

fn rotate_cols(q: &mut RealMatrix, p: usize, r: usize, c: f64, s: f64) {
    let n = q.rows();
    for k in 0..n {
        let qkp = q[(k, p)];
        let qkr = q[(k, r)];
        q[(k, p)] = c * qkp - s * qkr;
        q[(k, r)] = s * qkp + c * qkr;
    }
}

fn sorted(eigs: Vec<f64>, q: RealMatrix) -> (Vec<f64>, RealMatrix) {
    let n = eigs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigs[i].partial_cmp(&eigs[j]).unwrap());
    let sorted_eigs: Vec<f64> = order.iter().map(|&i| eigs[i]).collect();
    let cols: Vec<Vec<f64>> = order.iter().map(|&i| q.col(i)).collect();
    (sorted_eigs, RealMatrix::from_cols(&cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(eigs: &[f64], q: &RealMatrix) -> RealMatrix {
        let n = eigs.len();
        let d = RealMatrix::from_fn(n, n, |i, j| if i == j { eigs[i] } else { 0.0 });
        q.matmul(&d).matmul(&q.t())
    }

    #[test]
    fn diagonal_matrix_is_fixed_point() {
        let a = RealMatrix::from_nested(&[[3.0, 0.0], [0.0, -1.0]]).unwrap();
        let (eigs, _) = sym_eigen(&a).unwrap();
        assert_eq!(eigs, vec![-1.0, 3.0]);
    }

    #[test]
    fn reconstruction_and_orthogonality() {
        let a = RealMatrix::from_nested(&[
            [1.0, 2.0, 4.0, 0.5],
            [2.0, 1.0, 3.0, -1.0],
            [4.0, 3.0, 1.0, 2.0],
            [0.5, -1.0, 2.0, -2.0],
        ])
        .unwrap();
        let (eigs, q) = sym_eigen(&a).unwrap();
        let recon = reconstruct(&eigs, &q);
        assert!(recon.max_abs_diff(&a) < 1e-12 * a.norm_max());
        let gram = q.t().matmul(&q);
        assert!(gram.max_abs_diff(&RealMatrix::identity(4)) < 1e-13);
        // Ascending order.
        for w in eigs.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn hamiltonian_pair_block() {
        // H = p q as a 2x2 form has eigenvalues ±1/2.
        let a = RealMatrix::from_nested(&[[0.0, 0.5], [0.5, 0.0]]).unwrap();
        let (eigs, _) = sym_eigen(&a).unwrap();
        assert!((eigs[0] + 0.5).abs() < 1e-15);
        assert!((eigs[1] - 0.5).abs() < 1e-15);
    }
}
