//! Geometry of the null-cone of a signature-zero quadratic form on `R⁴`.
//!
//! In a basis adapted to the form (`H(x, y) = ‖y‖² − ‖x‖²` with two
//! coordinates in each block), every 2-plane inside `H⁻¹(0)` is the
//! graph `{(x, Mx)}` of an orthogonal matrix `M`, so the planes form two
//! circles indexed by `det M = ±1`. This module builds adapted frames,
//! materializes circle planes, inverts the parametrization, and provides
//! the four-chart graph machinery used for Lagrangian planes in
//! symplectic coordinates.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{
    congruence_diagonalize, inertia, orthonormalize, principal_angle_sin, Inertia, LinalgError,
    LuDecomp, QuadraticForm, RealMatrix, SymplecticStructure,
};

#[derive(Debug, Clone, Error)]
pub enum ConeError {
    #[error("form has inertia ({}, {}, {}); null-cone planes require signature zero", .inertia.n_plus, .inertia.n_minus, .inertia.n_zero)]
    WrongSignature { inertia: Inertia },
    #[error("subspace is not contained in the null-cone (residual {residual:.3e} relative)")]
    NotInNullCone { residual: f64 },
    #[error("subspace is not a graph over the adapted x-block")]
    NotAGraph,
    #[error("subspace has {found} columns, expected {expected}")]
    WrongDimension { expected: usize, found: usize },
    #[error("adapted frame residual {residual:.3e} exceeds tolerance")]
    BadFrame { residual: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Change of basis adapting a signature-zero form on `R⁴`:
/// `PᵀSP = diag(-1, -1, +1, +1)`, negative block first.
#[derive(Debug, Clone)]
pub struct AdaptedFrame {
    q: QuadraticForm,
    p: RealMatrix,
    p_inv: RealMatrix,
    ell: usize,
}

impl AdaptedFrame {
    /// The form this frame adapts.
    pub fn form(&self) -> &QuadraticForm {
        &self.q
    }

    /// Columns are the adapted basis vectors in original coordinates.
    pub fn basis(&self) -> &RealMatrix {
        &self.p
    }

    pub fn basis_inv(&self) -> &RealMatrix {
        &self.p_inv
    }

    /// Index of the form (2 on `R⁴`).
    pub fn index(&self) -> usize {
        self.ell
    }

    /// Wrap an explicit change of basis, validating the congruence
    /// residual `‖PᵀSP − diag(-1,-1,1,1)‖ ≤ 10·tol·‖S‖`.
    pub fn from_matrix(
        q: &QuadraticForm,
        p: RealMatrix,
        tol: f64,
    ) -> Result<Self, ConeError> {
        let target = adapted_diagonal(q.dim());
        let pulled = p.t().matmul(q.matrix()).matmul(&p);
        let residual = pulled.max_abs_diff(&target);
        if residual > 10.0 * tol * q.matrix().norm_max() {
            return Err(ConeError::BadFrame { residual });
        }
        let p_inv = LuDecomp::new(&p).map_err(ConeError::Linalg)?.inverse();
        Ok(Self { q: q.clone(), p, p_inv, ell: q.dim() / 2 })
    }
}

fn adapted_diagonal(dim: usize) -> RealMatrix {
    let ell = dim / 2;
    RealMatrix::from_fn(dim, dim, |i, j| {
        if i != j {
            0.0
        } else if i < ell {
            -1.0
        } else {
            1.0
        }
    })
}

/// Adapt a signature-zero form on `R⁴`. Definite or index-1 forms are
/// rejected with their inertia: their null-cones contain no planes.
pub fn adapted_basis(q: &QuadraticForm, tol: f64) -> Result<AdaptedFrame, ConeError> {
    if q.dim() != 4 {
        return Err(ConeError::WrongDimension { expected: 4, found: q.dim() });
    }
    let counts = inertia(q, tol);
    if !(counts.n_plus == 2 && counts.n_minus == 2 && counts.n_zero == 0) {
        return Err(ConeError::WrongSignature { inertia: counts });
    }
    let (p, _) = congruence_diagonalize(q, tol)?;
    AdaptedFrame::from_matrix(q, p, tol)
}

/// The two connected components of the circle family, labelled by the
/// determinant of the graph matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleComponent {
    /// `det M = +1`.
    Rotation,
    /// `det M = -1`.
    Reflection,
}

impl CircleComponent {
    pub const BOTH: [CircleComponent; 2] = [CircleComponent::Rotation, CircleComponent::Reflection];

    /// `M(θ)`: a rotation, or a rotation times `diag(1, -1)`.
    pub fn graph_matrix(&self, theta: f64) -> RealMatrix {
        let (s, c) = theta.sin_cos();
        match self {
            CircleComponent::Rotation => {
                RealMatrix::from_nested(&[[c, -s], [s, c]]).unwrap()
            }
            CircleComponent::Reflection => {
                RealMatrix::from_nested(&[[c, s], [s, -c]]).unwrap()
            }
        }
    }
}

/// A point on one of the two circles of null-cone planes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint {
    pub component: CircleComponent,
    /// Angle in `[0, 2π)`.
    pub theta: f64,
}

impl CirclePoint {
    pub fn new(component: CircleComponent, theta: f64) -> Self {
        Self { component, theta: normalize_angle(theta) }
    }
}

pub fn normalize_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut t = theta % two_pi;
    if t < 0.0 {
        t += two_pi;
    }
    // Map values that rounded up to 2π back to 0.
    if (t - two_pi).abs() < 1e-15 {
        t = 0.0;
    }
    t
}

/// Where a plane came from; kept alongside the basis for reporting.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Circle { component: CircleComponent, theta: f64 },
    Chart { chart: ChartId, m: [f64; 3] },
    /// Invariant line of a 2-dimensional block.
    Eigenline { eigenvalue: f64 },
    BlockSum { parts: Vec<Provenance> },
}

/// A subspace with an orthonormal column basis.
#[derive(Debug, Clone)]
pub struct PlaneBasis {
    basis: RealMatrix,
    provenance: Provenance,
}

impl PlaneBasis {
    /// Orthonormalizes the columns (modified Gram-Schmidt with a
    /// re-orthogonalization pass).
    pub fn new(raw: RealMatrix, provenance: Provenance) -> Result<Self, ConeError> {
        let basis = orthonormalize(&raw)?;
        Ok(Self { basis, provenance })
    }

    pub fn basis(&self) -> &RealMatrix {
        &self.basis
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    /// Spans agree up to `sin θ_max ≤ tol`.
    pub fn same_span(&self, other: &PlaneBasis, tol: f64) -> bool {
        self.basis.cols() == other.basis.cols()
            && principal_angle_sin(&self.basis, &other.basis) <= tol
    }

    /// Max residual of the form on the plane, relative to `‖S‖`:
    /// checks `H(bᵢ)` and all polarized pairings.
    pub fn nullcone_residual(&self, q: &QuadraticForm) -> f64 {
        let scale = q.matrix().norm_max().max(f64::MIN_POSITIVE);
        let k = self.basis.cols();
        let mut worst = 0.0_f64;
        for i in 0..k {
            let bi = self.basis.col(i);
            for j in i..k {
                let bj = self.basis.col(j);
                worst = worst.max(q.pairing(&bi, &bj).abs());
            }
        }
        worst / scale
    }

    /// Max symplectic pairing between basis vectors, relative to `‖Ω‖`.
    pub fn omega_residual(&self, w: &SymplecticStructure) -> f64 {
        let scale = w.matrix().norm_max().max(f64::MIN_POSITIVE);
        let k = self.basis.cols();
        let mut worst = 0.0_f64;
        for i in 0..k {
            let bi = self.basis.col(i);
            for j in (i + 1)..k {
                let bj = self.basis.col(j);
                worst = worst.max(w.pairing(&bi, &bj).abs());
            }
        }
        worst / scale
    }
}

/// Raw (non-orthonormalized) graph basis `P·[I; M(θ)]` of a circle plane
/// in original coordinates; the columns are the images of the adapted
/// x-block axes.
pub fn circle_graph_columns(frame: &AdaptedFrame, pt: CirclePoint) -> RealMatrix {
    let m = pt.component.graph_matrix(pt.theta);
    let stacked = RealMatrix::from_fn(4, 2, |i, j| {
        if i < 2 {
            if i == j {
                1.0
            } else {
                0.0
            }
        } else {
            m[(i - 2, j)]
        }
    });
    frame.basis().matmul(&stacked)
}

/// Materialize the null-cone plane at a circle point.
pub fn plane_from_circle(frame: &AdaptedFrame, pt: CirclePoint) -> PlaneBasis {
    let raw = circle_graph_columns(frame, pt);
    PlaneBasis::new(
        raw,
        Provenance::Circle { component: pt.component, theta: normalize_angle(pt.theta) },
    )
    .expect("graph bases are full rank")
}

/// Recover the graph matrix of a 2-plane in the adapted frame. For a
/// null-cone plane this is orthogonal.
pub fn graph_matrix_in_frame(
    frame: &AdaptedFrame,
    plane: &PlaneBasis,
) -> Result<RealMatrix, ConeError> {
    if plane.dim() != 2 || plane.ambient_dim() != 4 {
        return Err(ConeError::WrongDimension { expected: 2, found: plane.dim() });
    }
    let adapted = frame.basis_inv().matmul(plane.basis());
    let x = adapted.block(0, 0, 2, 2);
    let y = adapted.block(2, 0, 2, 2);
    // M X = Y, i.e. Xᵀ Mᵀ = Yᵀ, with X the projection onto the x-block;
    // the projection is injective on null-cone planes.
    let xt_lu = LuDecomp::new(&x.t()).map_err(|_| ConeError::NotAGraph)?;
    Ok(xt_lu.solve_mat(&y.t()).t())
}

/// Invert the circle parametrization: find the unique `(component, θ)`
/// whose plane coincides with the given one. The plane must lie in the
/// null-cone of the frame's form.
pub fn plane_membership(
    frame: &AdaptedFrame,
    plane: &PlaneBasis,
    tol: f64,
) -> Result<CirclePoint, ConeError> {
    let residual = plane.nullcone_residual(frame.form());
    if residual > tol {
        return Err(ConeError::NotInNullCone { residual });
    }
    let m = graph_matrix_in_frame(frame, plane)?;
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let component = if det >= 0.0 {
        CircleComponent::Rotation
    } else {
        CircleComponent::Reflection
    };
    // Both components share their first column, the rotation's.
    let theta = m[(1, 0)].atan2(m[(0, 0)]);
    Ok(CirclePoint::new(component, theta))
}

/// The four symplectic coordinate splittings used for Lagrangian graph
/// planes. In each, the plane of the graph `y = Mx` is Lagrangian for
/// the standard structure iff `M` is symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartId {
    /// `y = (p₁, p₂)`, `x = (q₁, q₂)`.
    I,
    /// `y = (q₁, q₂)`, `x = (-p₁, -p₂)`.
    Ii,
    /// `y = (q₁, p₂)`, `x = (-p₁, q₂)`.
    Iii,
    /// `y = (p₁, q₂)`, `x = (q₁, -p₂)`.
    Iv,
}

impl ChartId {
    pub const ALL: [ChartId; 4] = [ChartId::I, ChartId::Ii, ChartId::Iii, ChartId::Iv];

    /// The ambient vector of the graph point with parameter `x`, in
    /// `(q₁, q₂, p₁, p₂)` coordinates.
    pub fn embed_general(&self, m: &RealMatrix, x: [f64; 2]) -> [f64; 4] {
        let mx = [
            m[(0, 0)] * x[0] + m[(0, 1)] * x[1],
            m[(1, 0)] * x[0] + m[(1, 1)] * x[1],
        ];
        match self {
            ChartId::I => [x[0], x[1], mx[0], mx[1]],
            ChartId::Ii => [mx[0], mx[1], -x[0], -x[1]],
            ChartId::Iii => [mx[0], x[1], -x[0], mx[1]],
            ChartId::Iv => [x[0], mx[1], mx[0], -x[1]],
        }
    }

    pub fn embed(&self, m: &[f64; 3], x: [f64; 2]) -> [f64; 4] {
        self.embed_general(&sym2(m), x)
    }

    /// Raw 4×2 graph basis of the chart plane.
    pub fn graph_basis_general(&self, m: &RealMatrix) -> RealMatrix {
        let c1 = self.embed_general(m, [1.0, 0.0]);
        let c2 = self.embed_general(m, [0.0, 1.0]);
        RealMatrix::from_fn(4, 2, |i, j| if j == 0 { c1[i] } else { c2[i] })
    }

    pub fn graph_basis(&self, m: &[f64; 3]) -> RealMatrix {
        self.graph_basis_general(&sym2(m))
    }
}

pub fn sym2(m: &[f64; 3]) -> RealMatrix {
    RealMatrix::from_nested(&[[m[0], m[1]], [m[1], m[2]]]).unwrap()
}

/// Coefficients `(a, b, c)` of `H` restricted to the chart graph plane:
/// `H(x₁, x₂) = a·x₁² + b·x₁x₂ + c·x₂²`. Exact for quadratic `H`.
pub fn restrict_to_chart_graph(
    q: &QuadraticForm,
    chart: ChartId,
    m: &[f64; 3],
) -> (f64, f64, f64) {
    let v1 = chart.embed(m, [1.0, 0.0]);
    let v2 = chart.embed(m, [0.0, 1.0]);
    let v12 = chart.embed(m, [1.0, 1.0]);
    let a = q.eval(&v1);
    let c = q.eval(&v2);
    let b = q.eval(&v12) - a - c;
    (a, b, c)
}

/// True iff `ω` vanishes on the span: the plane is Lagrangian. The
/// plane must be half-dimensional.
pub fn lagrangian_check(
    plane: &PlaneBasis,
    w: &SymplecticStructure,
    tol: f64,
) -> Result<bool, ConeError> {
    if plane.dim() != w.dim() / 2 {
        return Err(ConeError::WrongDimension { expected: w.dim() / 2, found: plane.dim() });
    }
    Ok(plane.omega_residual(w) <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn diag(values: &[f64]) -> QuadraticForm {
        QuadraticForm::new(RealMatrix::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                values[i]
            } else {
                0.0
            }
        }))
        .unwrap()
    }

    #[test]
    fn adapted_basis_reaches_unit_diagonal() {
        for q in [
            diag(&[-1.0, -1.0, 1.0, 1.0]),
            diag(&[1.0, 1.0, -1.0, -1.0]),
            generate::hyperbolic_real(1.0, 2.0),
        ] {
            let frame = adapted_basis(&q, 1e-9).unwrap();
            let pulled = frame.basis().t().matmul(q.matrix()).matmul(frame.basis());
            let residual = pulled.max_abs_diff(&adapted_diagonal(4));
            assert!(residual <= 1e-8 * q.matrix().norm_max().max(1.0));
            let id = frame.basis().matmul(frame.basis_inv());
            assert!(id.max_abs_diff(&RealMatrix::identity(4)) < 1e-12);
        }
    }

    #[test]
    fn adapted_basis_rejects_wrong_signature() {
        // Definite form.
        match adapted_basis(&diag(&[1.0, 1.0, 1.0, 1.0]), 1e-9) {
            Err(ConeError::WrongSignature { inertia }) => {
                assert_eq!((inertia.n_plus, inertia.n_minus), (4, 0));
            }
            other => panic!("expected WrongSignature, got {other:?}"),
        }
        // Index-1 form.
        assert!(matches!(
            adapted_basis(&diag(&[-1.0, 1.0, 1.0, 1.0]), 1e-9),
            Err(ConeError::WrongSignature { .. })
        ));
    }

    #[test]
    fn identity_frame_graph_planes() {
        let q = diag(&[-1.0, -1.0, 1.0, 1.0]);
        let frame = AdaptedFrame::from_matrix(&q, RealMatrix::identity(4), 1e-9).unwrap();

        let plane = plane_from_circle(&frame, CirclePoint::new(CircleComponent::Rotation, 0.0));
        // Graph of M = I: span{(e1+e3), (e2+e4)}/√2.
        let expected = PlaneBasis::new(
            RealMatrix::from_nested(&[[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).unwrap(),
            Provenance::Circle { component: CircleComponent::Rotation, theta: 0.0 },
        )
        .unwrap();
        assert!(plane.same_span(&expected, 1e-12));

        let plane = plane_from_circle(
            &frame,
            CirclePoint::new(CircleComponent::Rotation, std::f64::consts::PI),
        );
        // Graph of -I.
        let expected = PlaneBasis::new(
            RealMatrix::from_nested(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
                .unwrap(),
            Provenance::Circle { component: CircleComponent::Rotation, theta: 0.0 },
        )
        .unwrap();
        assert!(plane.same_span(&expected, 1e-12));
    }

    #[test]
    fn circle_planes_lie_in_the_cone() {
        let q = generate::conjugated(&generate::hyperbolic_quadruplet(1.0, 0.7), 5, 1.0);
        let frame = adapted_basis(&q, 1e-9).unwrap();
        for component in CircleComponent::BOTH {
            for k in 0..12 {
                let theta = k as f64 * 0.5236;
                let plane = plane_from_circle(&frame, CirclePoint::new(component, theta));
                assert!(plane.nullcone_residual(&q) <= 1e-9, "{component:?} {theta}");
            }
        }
    }

    #[test]
    fn membership_roundtrip() {
        let q = generate::conjugated(&generate::hyperbolic_real(1.0, 2.0), 9, 1.0);
        let frame = adapted_basis(&q, 1e-9).unwrap();
        for component in CircleComponent::BOTH {
            for k in 0..8 {
                let theta = 0.1 + k as f64 * 0.7;
                let pt = CirclePoint::new(component, theta);
                let plane = plane_from_circle(&frame, pt);
                let back = plane_membership(&frame, &plane, 1e-9).unwrap();
                assert_eq!(back.component, component);
                let replay = plane_from_circle(&frame, back);
                assert!(plane.same_span(&replay, 1e-9));
                assert!((back.theta - normalize_angle(theta)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn membership_of_symplectic_plane_in_cone() {
        // For H = p1 q1 + p2 q2 the plane span{(1,0,0,1), (0,1,-1,0)} is
        // inside the cone but symplectic; membership only cares about
        // the cone.
        let q = generate::hyperbolic_real(1.0, 1.0);
        let frame = adapted_basis(&q, 1e-9).unwrap();
        let raw = RealMatrix::from_nested(&[
            [1.0, 0.0],
            [0.0, 1.0],
            [0.0, -1.0],
            [1.0, 0.0],
        ])
        .unwrap();
        let plane = PlaneBasis::new(
            raw,
            Provenance::Circle { component: CircleComponent::Rotation, theta: 0.0 },
        )
        .unwrap();
        assert!(plane.nullcone_residual(&q) < 1e-12);
        let w = SymplecticStructure::standard(4);
        assert!(!lagrangian_check(&plane, &w, 1e-9).unwrap());

        let pt = plane_membership(&frame, &plane, 1e-9).unwrap();
        let replay = plane_from_circle(&frame, pt);
        assert!(plane.same_span(&replay, 1e-8));
        let m = graph_matrix_in_frame(&frame, &plane).unwrap();
        let gram = m.t().matmul(&m);
        assert!(gram.max_abs_diff(&RealMatrix::identity(2)) < 1e-9);
    }

    #[test]
    fn membership_of_coordinate_plane() {
        // {p1 = p2 = 0} for H = p1 q1 + 2 p2 q2.
        let q = generate::hyperbolic_real(1.0, 2.0);
        let frame = adapted_basis(&q, 1e-9).unwrap();
        let raw = RealMatrix::from_nested(&[
            [1.0, 0.0],
            [0.0, 1.0],
            [0.0, 0.0],
            [0.0, 0.0],
        ])
        .unwrap();
        let plane = PlaneBasis::new(
            raw.clone(),
            Provenance::Circle { component: CircleComponent::Rotation, theta: 0.0 },
        )
        .unwrap();
        let pt = plane_membership(&frame, &plane, 1e-9).unwrap();
        let replay = plane_from_circle(&frame, pt);
        assert!(plane.same_span(&replay, 1e-9));
    }

    #[test]
    fn membership_rejects_non_cone_plane() {
        let q = generate::hyperbolic_real(1.0, 2.0);
        let frame = adapted_basis(&q, 1e-9).unwrap();
        // {q2 = p2 = 0} is symplectic and NOT in the cone (H = p1q1 on it).
        let raw = RealMatrix::from_nested(&[
            [1.0, 0.0],
            [0.0, 0.0],
            [0.0, 1.0],
            [0.0, 0.0],
        ])
        .unwrap();
        let plane = PlaneBasis::new(
            raw,
            Provenance::Circle { component: CircleComponent::Rotation, theta: 0.0 },
        )
        .unwrap();
        assert!(matches!(
            plane_membership(&frame, &plane, 1e-9),
            Err(ConeError::NotInNullCone { .. })
        ));
    }

    #[test]
    fn chart_i_coefficients_match_closed_forms() {
        let (alpha, beta, gamma) = (0.3, -0.7, 1.1);
        let m = [alpha, beta, gamma];

        // Elliptic nilpotent H₊: 2H = (1+2λβ)x₁² + 2λ(γ-α)x₁x₂ + (1-2λβ)x₂².
        let lambda = 0.9;
        let q = generate::elliptic_double_nilpotent(1.0, lambda);
        let (a, b, c) = restrict_to_chart_graph(&q, ChartId::I, &m);
        assert!((2.0 * a - (1.0 + 2.0 * lambda * beta)).abs() < 1e-12);
        assert!((2.0 * b - 2.0 * lambda * (gamma - alpha)).abs() < 1e-12);
        assert!((2.0 * c - (1.0 - 2.0 * lambda * beta)).abs() < 1e-12);

        // Quadruplet: H = (κα-λβ)x₁² + (2κβ+λ(α-γ))x₁x₂ + (κγ+λβ)x₂².
        let (kappa, lambda) = (1.3, 0.6);
        let q = generate::hyperbolic_quadruplet(kappa, lambda);
        let (a, b, c) = restrict_to_chart_graph(&q, ChartId::I, &m);
        assert!((a - (kappa * alpha - lambda * beta)).abs() < 1e-12);
        assert!((b - (2.0 * kappa * beta + lambda * (alpha - gamma))).abs() < 1e-12);
        assert!((c - (kappa * gamma + lambda * beta)).abs() < 1e-12);

        // Real semisimple: H = λ₁α x₁² + (λ₁+λ₂)β x₁x₂ + λ₂γ x₂².
        let (l1, l2) = (0.8, 1.7);
        let q = generate::hyperbolic_real(l1, l2);
        let (a, b, c) = restrict_to_chart_graph(&q, ChartId::I, &m);
        assert!((a - l1 * alpha).abs() < 1e-12);
        assert!((b - (l1 + l2) * beta).abs() < 1e-12);
        assert!((c - l2 * gamma).abs() < 1e-12);
    }

    #[test]
    fn zero_graph_matrix_restricts_to_coordinate_plane() {
        let q = generate::hyperbolic_quadruplet(1.0, 1.0);
        for chart in ChartId::ALL {
            let (a, b, c) = restrict_to_chart_graph(&q, chart, &[0.0, 0.0, 0.0]);
            let v1 = chart.embed(&[0.0; 3], [1.0, 0.0]);
            let v2 = chart.embed(&[0.0; 3], [0.0, 1.0]);
            let v12 = chart.embed(&[0.0; 3], [1.0, 1.0]);
            assert!((a - q.eval(&v1)).abs() < 1e-14);
            assert!((c - q.eval(&v2)).abs() < 1e-14);
            assert!((a + b + c - q.eval(&v12)).abs() < 1e-14);
        }
    }

    #[test]
    fn lagrangian_check_coordinate_planes() {
        let w = SymplecticStructure::standard(4);
        // {q1 = q2 = 0}: span of the p-axes.
        let p_axes = PlaneBasis::new(
            RealMatrix::from_nested(&[[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap(),
            Provenance::Chart { chart: ChartId::Ii, m: [0.0; 3] },
        )
        .unwrap();
        assert!(lagrangian_check(&p_axes, &w, 1e-9).unwrap());

        // {q2 = p2 = 0} is symplectic.
        let sympl = PlaneBasis::new(
            RealMatrix::from_nested(&[[1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [0.0, 0.0]]).unwrap(),
            Provenance::Chart { chart: ChartId::I, m: [0.0; 3] },
        )
        .unwrap();
        assert!(!lagrangian_check(&sympl, &w, 1e-9).unwrap());
    }

    #[test]
    fn graph_is_lagrangian_iff_symmetric() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let w = SymplecticStructure::standard(4);
        for chart in ChartId::ALL {
            for _ in 0..20 {
                let sym = [
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                ];
                let plane = PlaneBasis::new(
                    chart.graph_basis(&sym),
                    Provenance::Chart { chart, m: sym },
                )
                .unwrap();
                assert!(lagrangian_check(&plane, &w, 1e-9).unwrap(), "{chart:?}");

                // Break the symmetry.
                let mut gen = sym2(&sym);
                gen[(0, 1)] += 0.5 + rng.gen_range(0.0..1.0);
                let plane = PlaneBasis::new(
                    chart.graph_basis_general(&gen),
                    Provenance::Chart { chart, m: sym },
                )
                .unwrap();
                assert!(!lagrangian_check(&plane, &w, 1e-9).unwrap(), "{chart:?}");
            }
        }
    }

    #[test]
    fn lagrangian_check_rejects_wrong_dimension() {
        let w = SymplecticStructure::standard(4);
        let line = PlaneBasis::new(
            RealMatrix::from_nested(&[[1.0], [0.0], [0.0], [0.0]]).unwrap(),
            Provenance::Chart { chart: ChartId::I, m: [0.0; 3] },
        )
        .unwrap();
        assert!(matches!(
            lagrangian_check(&line, &w, 1e-9),
            Err(ConeError::WrongDimension { .. })
        ));
    }
}
