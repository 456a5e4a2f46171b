use num_complex::Complex64;

use super::matrix::RealMatrix;
use super::LinalgError;

/// Eigenvalues of a general real matrix, clustered into multiplicity
/// groups at the relative tolerance `tol`.
///
/// The returned multiset is exactly closed under complex conjugation
/// (conjugate partners are paired and averaged) and the multiplicities
/// sum to the dimension. Values are sorted by real part, then imaginary
/// part.
pub fn eigenvalues(a: &RealMatrix, tol: f64) -> Result<Vec<(Complex64, usize)>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = a.norm_max();
    if scale == 0.0 {
        return Ok(vec![(Complex64::new(0.0, 0.0), n)]);
    }

    let mut h = CMatrix::from_real(a);
    h.hessenberg();
    let mut raw = h.qr_eigenvalues()?;
    pair_conjugates(&mut raw, tol * scale);
    raw.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
    Ok(cluster(&raw, tol * scale))
}

fn pair_conjugates(vals: &mut [Complex64], band: f64) {
    let n = vals.len();
    // Snap near-real values onto the real axis first.
    for v in vals.iter_mut() {
        if v.im.abs() <= band {
            v.im = 0.0;
        }
    }
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || vals[i].im == 0.0 {
            continue;
        }
        used[i] = true;
        // Closest unused conjugate partner.
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if used[j] || vals[j].im == 0.0 || vals[j].im.signum() == vals[i].im.signum() {
                continue;
            }
            let d = (vals[j].conj() - vals[i]).norm();
            if best.map(|(_, bd)| d < bd).unwrap_or(true) {
                best = Some((j, d));
            }
        }
        if let Some((j, _)) = best {
            used[j] = true;
            let avg = 0.5 * (vals[i] + vals[j].conj());
            vals[i] = avg;
            vals[j] = avg.conj();
        } else {
            // No partner found: the imaginary part is spurious.
            vals[i].im = 0.0;
        }
    }
}

fn cluster(sorted: &[Complex64], band: f64) -> Vec<(Complex64, usize)> {
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for &v in sorted {
        match groups.last_mut() {
            Some((center, count)) if (v - *center).norm() <= band => {
                // Running mean keeps the cluster center stable.
                *center = (*center * (*count as f64) + v) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => groups.push((v, 1)),
        }
    }
    groups
}

/// Minimal complex dense matrix used only by the eigensolver.
struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    fn from_real(a: &RealMatrix) -> Self {
        let n = a.rows();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(Complex64::new(a[(i, j)], 0.0));
            }
        }
        Self { n, data }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    /// Householder reduction to upper Hessenberg form (similarity).
    fn hessenberg(&mut self) {
        let n = self.n;
        for k in 0..n.saturating_sub(2) {
            let mut norm2 = 0.0;
            for i in (k + 1)..n {
                norm2 += self.at(i, k).norm_sqr();
            }
            let alpha = norm2.sqrt();
            if alpha == 0.0 {
                continue;
            }
            let x0 = self.at(k + 1, k);
            let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
            let v0 = x0 + phase * alpha;
            let mut v: Vec<Complex64> = Vec::with_capacity(n - k - 1);
            v.push(v0);
            for i in (k + 2)..n {
                v.push(self.at(i, k));
            }
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vnorm2 == 0.0 {
                continue;
            }
            // H = I - 2 v v* / |v|²; apply from the left then the right.
            for j in k..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for (idx, vi) in v.iter().enumerate() {
                    dot += vi.conj() * self.at(k + 1 + idx, j);
                }
                let f = dot * 2.0 / vnorm2;
                for (idx, vi) in v.iter().enumerate() {
                    let cur = self.at(k + 1 + idx, j);
                    self.set(k + 1 + idx, j, cur - f * vi);
                }
            }
            for i in 0..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for (idx, vi) in v.iter().enumerate() {
                    dot += self.at(i, k + 1 + idx) * *vi;
                }
                let f = dot * 2.0 / vnorm2;
                for (idx, vi) in v.iter().enumerate() {
                    let cur = self.at(i, k + 1 + idx);
                    self.set(i, k + 1 + idx, cur - f * vi.conj());
                }
            }
            // Entries below the subdiagonal are now zero by construction.
            for i in (k + 2)..n {
                self.set(i, k, Complex64::new(0.0, 0.0));
            }
        }
    }

    /// Shifted QR iteration on the Hessenberg form; returns all eigenvalues.
    fn qr_eigenvalues(&mut self) -> Result<Vec<Complex64>, LinalgError> {
        let n = self.n;
        let mut eigs: Vec<Complex64> = Vec::with_capacity(n);
        let mut hi = n - 1;
        let mut iters_on_block = 0usize;
        let mut total_iters = 0usize;
        let max_total = 60 * n.max(1);

        loop {
            // Deflate negligible subdiagonal entries.
            let mut lo = hi;
            while lo > 0 {
                let s = self.at(lo - 1, lo - 1).norm() + self.at(lo, lo).norm();
                let s = if s == 0.0 { 1.0 } else { s };
                if self.at(lo, lo - 1).norm() <= f64::EPSILON * 8.0 * s {
                    self.set(lo, lo - 1, Complex64::new(0.0, 0.0));
                    break;
                }
                lo -= 1;
            }

            if lo == hi {
                eigs.push(self.at(hi, hi));
                iters_on_block = 0;
                if hi == 0 {
                    break;
                }
                hi -= 1;
                continue;
            }
            if lo + 1 == hi {
                let (l1, l2) = eig2(
                    self.at(lo, lo),
                    self.at(lo, hi),
                    self.at(hi, lo),
                    self.at(hi, hi),
                );
                eigs.push(l1);
                eigs.push(l2);
                iters_on_block = 0;
                if lo == 0 {
                    break;
                }
                hi = lo - 1;
                continue;
            }

            total_iters += 1;
            iters_on_block += 1;
            if total_iters > max_total {
                return Err(LinalgError::NoConvergence { iterations: total_iters });
            }

            // Wilkinson shift from the trailing 2x2; occasionally replace
            // it by an exceptional shift to break symmetry stalls.
            let shift = if iters_on_block % 12 == 0 {
                self.at(hi, hi) + Complex64::new(self.at(hi, hi - 1).norm(), 0.0)
            } else {
                let (l1, l2) = eig2(
                    self.at(hi - 1, hi - 1),
                    self.at(hi - 1, hi),
                    self.at(hi, hi - 1),
                    self.at(hi, hi),
                );
                let target = self.at(hi, hi);
                if (l1 - target).norm() <= (l2 - target).norm() {
                    l1
                } else {
                    l2
                }
            };

            self.qr_step(lo, hi, shift);
        }
        Ok(eigs)
    }

    /// One explicit shifted QR step on rows/cols `lo..=hi` via Givens
    /// rotations.
    fn qr_step(&mut self, lo: usize, hi: usize, shift: Complex64) {
        let m = hi - lo + 1;
        for i in lo..=hi {
            let cur = self.at(i, i);
            self.set(i, i, cur - shift);
        }
        let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(m - 1);
        for k in lo..hi {
            let a = self.at(k, k);
            let b = self.at(k + 1, k);
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (1.0, Complex64::new(0.0, 0.0))
            } else {
                // Row mix [[c, s], [-s̄, c]] annihilates b when s̄ = c·b/a,
                // i.e. s = phase(a)·b̄/r.
                (a.norm() / r, {
                    let phase = if a.norm() > 0.0 {
                        a / a.norm()
                    } else {
                        Complex64::new(1.0, 0.0)
                    };
                    phase * b.conj() / r
                })
            };
            // Apply G* from the left to rows k, k+1.
            for j in k..self.n {
                let t1 = self.at(k, j);
                let t2 = self.at(k + 1, j);
                self.set(k, j, t1 * c + t2 * s);
                self.set(k + 1, j, -t1 * s.conj() + t2 * c);
            }
            rotations.push((c, s));
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + idx;
            // Apply G from the right to columns k, k+1.
            let top = (k + 2).min(hi) ;
            for i in 0..=top {
                let t1 = self.at(i, k);
                let t2 = self.at(i, k + 1);
                self.set(i, k, t1 * c + t2 * s.conj());
                self.set(i, k + 1, -t1 * s + t2 * c);
            }
        }
        for i in lo..=hi {
            let cur = self.at(i, i);
            self.set(i, i, cur + shift);
        }
    }
}

/// Eigenvalues of a complex 2x2 matrix.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det * 4.0).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    (l1, l2)
}
