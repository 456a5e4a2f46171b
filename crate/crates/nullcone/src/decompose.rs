//! Block decomposition of higher-dimensional systems.
//!
//! A nondegenerate Hamiltonian system splits into pairwise ω-orthogonal
//! invariant subspaces grouped by eigenvalue quadruplets
//! `{λ, -λ, λ̄, -λ̄}`. When every block has dimension 2 or 4 the
//! Lagrangian planes of the whole system are exactly the direct sums of
//! one Lagrangian subspace per block (no eigenvalues are shared across
//! blocks), so the total count is the product of the per-block counts
//! `δ(j)`.

use thiserror::Error;

use crate::census::{census, verify_plane, CensusError, PlaneCount, VerificationReport};
use crate::cone::{ConeError, PlaneBasis, Provenance};
use crate::linalg::{
    check_symplectic, inertia, Inertia, LinalgError, QuadraticForm, RealMatrix, Svd,
    SymplecticStructure,
};
use crate::spectrum::{group_quadruplets, EigenGroup, HamiltonianSystem, SpectrumError};

#[derive(Debug, Clone, Error)]
pub enum DecomposeError {
    #[error("eigenvalue quadruplets are too close to cluster reliably (gap {gap:.3e}, band {band:.3e})")]
    IllSeparated { gap: f64, band: f64 },
    #[error("block dimensions {dims:?} violate the 2-or-4 hypothesis (multiplicity too high)")]
    HypothesisViolated { dims: Vec<usize> },
    #[error("blocks share an eigenvalue quadruplet; direct-sum composition does not apply")]
    SharedEigenvalues,
    #[error("system is degenerate: inertia ({}, {}, {})", .inertia.n_plus, .inertia.n_minus, .inertia.n_zero)]
    DegenerateSystem { inertia: Inertia },
    #[error("restricted symplectic form on a block is degenerate (σ_min {sigma_min:.3e})")]
    BlockNotSymplectic { sigma_min: f64 },
    #[error("invariant blocks are not ω-orthogonal (residual {residual:.3e})")]
    BlocksNotOrthogonal { residual: f64 },
    #[error("generalized eigenspace has dimension {found}, expected {expected}")]
    KernelMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One symplectic eigenspace: an invariant subspace carrying a single
/// eigenvalue quadruplet, with the restricted forms.
#[derive(Debug, Clone)]
pub struct SymplecticBlock {
    /// Orthonormal basis, `2n × d`.
    pub basis: RealMatrix,
    pub quadruplet: EigenGroup,
    pub restricted_q: QuadraticForm,
    pub restricted_w: SymplecticStructure,
}

impl SymplecticBlock {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Representative eigenvalue has zero real part.
    pub fn is_imaginary(&self, band: f64) -> bool {
        self.quadruplet.representative.re <= band
    }

    /// Representative eigenvalue has zero imaginary part.
    pub fn is_real(&self, band: f64) -> bool {
        self.quadruplet.representative.im <= band
    }

    /// Restricted system matrix in block coordinates.
    pub fn restricted_matrix(&self, sys: &HamiltonianSystem) -> RealMatrix {
        self.basis.t().matmul(sys.matrix()).matmul(&self.basis)
    }
}

/// Split the system into its symplectic eigenspaces.
///
/// Eigenvalues are clustered into quadruplets at `100·tol·scale`;
/// distinct quadruplets closer than ten times that band are refused as
/// unreliable. Each block must have dimension 2 or 4.
pub fn symplectic_eigenspaces(
    sys: &HamiltonianSystem,
    tol: f64,
) -> Result<Vec<SymplecticBlock>, DecomposeError> {
    let counts = inertia(sys.form(), tol);
    if !counts.is_nondegenerate() {
        return Err(DecomposeError::DegenerateSystem { inertia: counts });
    }
    let l = sys.matrix();
    let clusters = crate::linalg::eigenvalues(l, tol)?;
    let scale = clusters
        .iter()
        .map(|(v, _)| v.norm())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let band = 100.0 * tol * scale;

    let mut groups = group_quadruplets(&clusters, band);
    // Deterministic order that ignores sub-band noise in the keys.
    groups.sort_by(|a, b| {
        let (ra, rb) = (a.representative, b.representative);
        if (ra.re - rb.re).abs() > band {
            ra.re.partial_cmp(&rb.re).unwrap()
        } else if (ra.im - rb.im).abs() > band {
            ra.im.partial_cmp(&rb.im).unwrap()
        } else {
            std::cmp::Ordering::Equal
        }
    });

    // Separation: distinct quadruplet keys must be far apart relative to
    // the clustering band.
    for i in 0..groups.len() {
        for j in (i + 1)..groups.len() {
            let gap = (groups[i].representative - groups[j].representative).norm();
            if gap <= 10.0 * band {
                return Err(DecomposeError::IllSeparated { gap, band });
            }
        }
    }

    let dims: Vec<usize> = groups.iter().map(|g| g.members * g.multiplicity).collect();
    if dims.iter().any(|&d| d > 4 || d % 2 != 0) {
        return Err(DecomposeError::HypothesisViolated { dims });
    }

    let mut blocks = Vec::with_capacity(groups.len());
    for (group, &d) in groups.iter().zip(&dims) {
        let poly = quadruplet_polynomial(group);
        let image = eval_matrix_polynomial(&poly, l);
        let svd = Svd::compute(&image);
        // Defective eigenvalues are only accurate to ~√ε, which leaks
        // into the polynomial kernel; take a coarse kernel and sharpen
        // it by Newton correction below.
        let coarse = svd.nullspace(1e-6);
        if coarse.cols() != d {
            return Err(DecomposeError::KernelMismatch { expected: d, found: coarse.cols() });
        }
        let basis = refine_invariant_subspace(l, coarse);
        let restricted_q = QuadraticForm::new(
            basis.t().matmul(sys.form().matrix()).matmul(&basis),
        )?;
        let restricted_w_matrix = basis.t().matmul(sys.structure().matrix()).matmul(&basis);
        let restricted_w = check_symplectic(&restricted_w_matrix, tol).map_err(|e| match e {
            LinalgError::DegenerateOmega { sigma_min } => {
                DecomposeError::BlockNotSymplectic { sigma_min }
            }
            other => DecomposeError::Linalg(other),
        })?;
        blocks.push(SymplecticBlock { basis, quadruplet: *group, restricted_q, restricted_w });
    }

    // Pairwise ω-orthogonality across blocks.
    let omega_scale = sys.structure().matrix().norm_max();
    for i in 0..blocks.len() {
        for j in (i + 1)..blocks.len() {
            let cross = blocks[i]
                .basis
                .t()
                .matmul(sys.structure().matrix())
                .matmul(&blocks[j].basis);
            let residual = cross.norm_max();
            if residual > 1e-8 * omega_scale {
                return Err(DecomposeError::BlocksNotOrthogonal { residual });
            }
        }
    }
    Ok(blocks)
}

/// Real monic polynomial annihilating exactly the group's generalized
/// eigenspace: products of `(t² ∓ λ²)`-type factors, raised to the
/// member multiplicity. Coefficients ascending.
fn quadruplet_polynomial(group: &EigenGroup) -> Vec<f64> {
    let a = group.representative.re;
    let b = group.representative.im;
    let base: Vec<f64> = if group.members == 4 {
        // (t² - λ²)(t² - λ̄²) = t⁴ - 2(a²-b²)t² + (a²+b²)².
        let s = a * a + b * b;
        vec![s * s, 0.0, -2.0 * (a * a - b * b), 0.0, 1.0]
    } else if b == 0.0 || a > b {
        // Real pair: t² - a².
        vec![-a * a, 0.0, 1.0]
    } else {
        // Imaginary pair: t² + b².
        vec![b * b, 0.0, 1.0]
    };
    let mut poly = vec![1.0];
    for _ in 0..group.multiplicity {
        poly = poly_mul(&poly, &base);
    }
    poly
}

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, &pi) in p.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            out[i + j] += pi * qj;
        }
    }
    out
}

/// Horner evaluation of a scalar polynomial at a matrix argument.
fn eval_matrix_polynomial(coeffs: &[f64], m: &RealMatrix) -> RealMatrix {
    let n = m.rows();
    let mut result = RealMatrix::zeros(n, n);
    for &c in coeffs.iter().rev() {
        result = result.matmul(m);
        for i in 0..n {
            result[(i, i)] += c;
        }
    }
    result
}

/// Newton sharpening of an approximately invariant subspace: with
/// `C = BᵀLB`, `A = Q⊥ᵀLQ⊥` and `G = Q⊥ᵀLB`, the correction
/// `B ← B + Q⊥X` solves the Sylvester equation `AX − XC = −G`, which is
/// nonsingular exactly when the subspace's eigenvalues are disjoint
/// from the complement's. Each sweep squares the subspace error.
fn refine_invariant_subspace(l: &RealMatrix, coarse: RealMatrix) -> RealMatrix {
    let mut basis = coarse;
    let d = basis.cols();
    let n = basis.rows();
    let m = n - d;
    if m == 0 {
        return basis;
    }
    for _sweep in 0..2 {
        let q_perp = Svd::compute(&basis.t()).nullspace(1e-12);
        if q_perp.cols() != m {
            return basis;
        }
        let c = basis.t().matmul(l).matmul(&basis);
        let a = q_perp.t().matmul(l).matmul(&q_perp);
        let g = q_perp.t().matmul(l).matmul(&basis);
        // Column-major Kronecker system (I_d ⊗ A - Cᵀ ⊗ I_m) vec(X) = -vec(G).
        let mut kron = RealMatrix::zeros(m * d, m * d);
        for col in 0..d {
            for row in 0..m {
                let eq = col * m + row;
                for k in 0..m {
                    kron[(eq, col * m + k)] += a[(row, k)];
                }
                for k in 0..d {
                    kron[(eq, k * m + row)] -= c[(k, col)];
                }
            }
        }
        let rhs: Vec<f64> = (0..m * d).map(|i| -g[(i % m, i / m)]).collect();
        let x = match crate::linalg::LuDecomp::new(&kron) {
            Ok(lu) => lu.solve_vec(&rhs),
            Err(_) => return basis,
        };
        let correction = RealMatrix::from_fn(n, d, |i, j| {
            (0..m).map(|k| q_perp[(i, k)] * x[j * m + k]).sum()
        });
        match crate::linalg::orthonormalize(&basis.add(&correction)) {
            Ok(b) => basis = b,
            Err(_) => return basis,
        }
    }
    basis
}

/// Per-block Lagrangian-subspace count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaValue {
    Finite(usize),
    /// Semisimple double blocks carry an infinite family; the flavor is
    /// settled by running the census on the restricted block.
    Unbounded(PlaneCount),
}

impl std::fmt::Display for DeltaValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DeltaValue::Finite(k) => write!(f, "{k}"),
            DeltaValue::Unbounded(flavor) => write!(f, "unbounded ({flavor})"),
        }
    }
}

/// The block count table: dim-2 blocks contribute 0 (imaginary) or 2
/// (real); dim-4 blocks contribute 2 for a quadruplet, 1 or 3 for the
/// nilpotent double strata, and an infinite family when semisimple
/// double (outside the codimension-one hypothesis; the census on the
/// block decides the flavor).
pub fn delta(
    block: &SymplecticBlock,
    sys: &HamiltonianSystem,
    tol: f64,
) -> Result<DeltaValue, DecomposeError> {
    let rep = block.quadruplet.representative;
    let band = 100.0 * tol * rep.norm().max(f64::MIN_POSITIVE);
    match block.dim() {
        2 => {
            if block.is_imaginary(band) {
                Ok(DeltaValue::Finite(0))
            } else {
                Ok(DeltaValue::Finite(2))
            }
        }
        4 => {
            if rep.re > band && rep.im > band {
                return Ok(DeltaValue::Finite(2));
            }
            // Double pair: semisimple iff the restricted matrix squares
            // to u·I with u = λ².
            let c = block.restricted_matrix(sys);
            let u = rep.re * rep.re - rep.im * rep.im;
            let mut shifted = c.matmul(&c);
            for i in 0..4 {
                shifted[(i, i)] -= u;
            }
            let c_norm = c.norm_max().max(f64::MIN_POSITIVE);
            let semisimple = shifted.norm_max() <= tol * c_norm * c_norm;
            if semisimple {
                let block_census = census(&block.restricted_q, &block.restricted_w, tol)?;
                Ok(match block_census.aggregate {
                    PlaneCount::Finite(k) => DeltaValue::Finite(k),
                    flavor => DeltaValue::Unbounded(flavor),
                })
            } else if block.is_real(band) {
                Ok(DeltaValue::Finite(3))
            } else {
                Ok(DeltaValue::Finite(1))
            }
        }
        other => Err(DecomposeError::HypothesisViolated { dims: vec![other] }),
    }
}

/// Product of the per-block counts. Zero annihilates everything,
/// including unbounded blocks (a plane must pick a Lagrangian piece in
/// every block); otherwise a single unbounded block keeps its exact
/// flavor and any further factor degrades it to plain infinity.
pub fn count_product(deltas: &[DeltaValue]) -> PlaneCount {
    if deltas
        .iter()
        .any(|d| matches!(d, DeltaValue::Finite(0)))
    {
        return PlaneCount::Finite(0);
    }
    let unbounded: Vec<&DeltaValue> =
        deltas.iter().filter(|d| matches!(d, DeltaValue::Unbounded(_))).collect();
    match unbounded.as_slice() {
        [] => PlaneCount::Finite(
            deltas
                .iter()
                .map(|d| match d {
                    DeltaValue::Finite(k) => *k,
                    DeltaValue::Unbounded(_) => unreachable!(),
                })
                .product(),
        ),
        [DeltaValue::Unbounded(flavor)] if deltas.len() == 1 => *flavor,
        _ => PlaneCount::Infinite,
    }
}

/// All Lagrangian subspaces of one block, lifted to ambient coordinates.
/// `None` when the block carries an infinite family.
pub fn block_planes(
    block: &SymplecticBlock,
    sys: &HamiltonianSystem,
    tol: f64,
) -> Result<Option<Vec<PlaneBasis>>, DecomposeError> {
    let rep = block.quadruplet.representative;
    let band = 100.0 * tol * rep.norm().max(f64::MIN_POSITIVE);
    match block.dim() {
        2 => {
            if block.is_imaginary(band) {
                return Ok(Some(vec![]));
            }
            // Two invariant lines: the eigendirections of the restricted
            // 2×2 system matrix.
            let c = block.restricted_matrix(sys);
            let mut lines = Vec::with_capacity(2);
            for lam in [rep.re, -rep.re] {
                let r1 = [c[(0, 0)] - lam, c[(0, 1)]];
                let r2 = [c[(1, 0)], c[(1, 1)] - lam];
                // Null vector of (C - λI): perpendicular to its larger row.
                let v = if r1[0].hypot(r1[1]) >= r2[0].hypot(r2[1]) {
                    [-r1[1], r1[0]]
                } else {
                    [-r2[1], r2[0]]
                };
                let lifted = RealMatrix::from_fn(block.basis.rows(), 1, |i, _| {
                    block.basis[(i, 0)] * v[0] + block.basis[(i, 1)] * v[1]
                });
                lines.push(PlaneBasis::new(lifted, Provenance::Eigenline { eigenvalue: lam })?);
            }
            Ok(Some(lines))
        }
        4 => {
            match delta(block, sys, tol)? {
                DeltaValue::Unbounded(_) => Ok(None),
                DeltaValue::Finite(_) => {
                    let block_census = census(&block.restricted_q, &block.restricted_w, tol)?;
                    let mut lifted = Vec::new();
                    for plane in &block_census.planes {
                        let raw = block.basis.matmul(plane.basis());
                        lifted.push(PlaneBasis::new(raw, plane.provenance().clone())?);
                    }
                    Ok(Some(lifted))
                }
            }
        }
        other => Err(DecomposeError::HypothesisViolated { dims: vec![other] }),
    }
}

/// Direct sums of one Lagrangian subspace per block. The blocks must
/// carry pairwise distinct quadruplets.
pub fn compose_planes(
    blocks: &[SymplecticBlock],
    per_block: &[Vec<PlaneBasis>],
    tol: f64,
) -> Result<Vec<PlaneBasis>, DecomposeError> {
    assert_eq!(blocks.len(), per_block.len());
    let scale = blocks
        .iter()
        .map(|b| b.quadruplet.representative.norm())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for i in 0..blocks.len() {
        for j in (i + 1)..blocks.len() {
            let gap = (blocks[i].quadruplet.representative
                - blocks[j].quadruplet.representative)
                .norm();
            if gap <= 100.0 * tol * scale {
                return Err(DecomposeError::SharedEigenvalues);
            }
        }
    }
    let mut composed: Vec<PlaneBasis> = Vec::new();
    let mut stack: Vec<(RealMatrix, Vec<Provenance>)> = Vec::new();
    compose_rec(per_block, 0, None, &mut Vec::new(), &mut stack);
    for (raw, parts) in stack {
        composed.push(PlaneBasis::new(raw, Provenance::BlockSum { parts })?);
    }
    Ok(composed)
}

fn compose_rec(
    per_block: &[Vec<PlaneBasis>],
    idx: usize,
    acc: Option<RealMatrix>,
    parts: &mut Vec<Provenance>,
    out: &mut Vec<(RealMatrix, Vec<Provenance>)>,
) {
    if idx == per_block.len() {
        if let Some(m) = acc {
            out.push((m, parts.clone()));
        }
        return;
    }
    for plane in &per_block[idx] {
        let next = match &acc {
            None => plane.basis().clone(),
            Some(m) => m.hstack(plane.basis()),
        };
        parts.push(plane.provenance().clone());
        compose_rec(per_block, idx + 1, Some(next), parts, out);
        parts.pop();
    }
}

/// Full decomposition analysis of one system.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub blocks: Vec<SymplecticBlock>,
    pub deltas: Vec<DeltaValue>,
    pub count: PlaneCount,
    /// Composed planes with their verifications, when every block is
    /// enumerable.
    pub planes: Option<Vec<(PlaneBasis, VerificationReport)>>,
    /// Set when some block is a semisimple double (it decomposes further
    /// into subsystems sharing their eigenvalues, so plane enumeration
    /// by direct sums does not apply).
    pub has_semisimple_double_block: bool,
}

/// Run the whole pipeline: split, evaluate `δ`, multiply, compose and
/// verify when enumerable.
pub fn decompose_system(
    sys: &HamiltonianSystem,
    tol: f64,
) -> Result<Decomposition, DecomposeError> {
    let blocks = symplectic_eigenspaces(sys, tol)?;
    let mut deltas = Vec::with_capacity(blocks.len());
    let mut per_block = Vec::with_capacity(blocks.len());
    let mut enumerable = true;
    let mut semisimple_double = false;
    for block in &blocks {
        let d = delta(block, sys, tol)?;
        if matches!(d, DeltaValue::Unbounded(_)) {
            semisimple_double = true;
        }
        deltas.push(d);
        match block_planes(block, sys, tol)? {
            Some(planes) => per_block.push(planes),
            None => {
                enumerable = false;
                per_block.push(vec![]);
            }
        }
    }
    let count = count_product(&deltas);
    let planes = if enumerable {
        let composed = compose_planes(&blocks, &per_block, tol)?;
        let mut verified = Vec::with_capacity(composed.len());
        for plane in composed {
            let report = verify_plane(&plane, sys, tol.max(1e-8))?;
            verified.push((plane, report));
        }
        Some(verified)
    } else {
        None
    };
    Ok(Decomposition {
        blocks,
        deltas,
        count,
        planes,
        has_semisimple_double_block: semisimple_double,
    })
}
