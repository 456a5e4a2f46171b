//! Lagrangian-plane census on `R⁴`.
//!
//! The null-cone planes of a signature-zero form make up two circles
//! (see [`crate::cone`]). Restricted to either circle, the symplectic
//! pairing of the graph basis vectors is an affine trigonometric
//! function `g(θ) = c0 + c1·cosθ + c2·sinθ`: the quadratic terms cancel
//! because `MᵀJM = det(M)·J` for 2×2 matrices, leaving the determinant
//! (constant on a component) and a linear remainder. Lagrangian planes
//! are the roots of `g` on each circle, so the census reduces to a
//! closed-form root count, with tangency (a double root) signalling the
//! non-semisimple strata.

use serde::Serialize;
use thiserror::Error;

use crate::cone::{
    adapted_basis, circle_graph_columns, normalize_angle, plane_from_circle, AdaptedFrame,
    CircleComponent, CirclePoint, ConeError, PlaneBasis,
};
use crate::linalg::{
    eigenvalues, inertia, Inertia, QuadraticForm, RealMatrix, Svd, SymplecticStructure,
};
use crate::spectrum::{
    build_system, classify, HamiltonianSystem, MultiplicityStructure, SpectrumError,
};

#[derive(Debug, Clone, Error)]
pub enum CensusError {
    #[error("census requires a 4-dimensional system, found dimension {found}")]
    WrongDimension { found: usize },
    #[error("system is degenerate: inertia ({}, {}, {})", .inertia.n_plus, .inertia.n_minus, .inertia.n_zero)]
    DegenerateSystem { inertia: Inertia },
    #[error("circle restriction violates the affine trigonometric form (defect {defect:.3e})")]
    TrigFormViolation { defect: f64 },
    #[error("plane is not contained in the null-cone (residual {residual:.3e})")]
    NotInNullCone { residual: f64 },
    #[error("plane is not Lagrangian (residual {residual:.3e})")]
    NotLagrangian { residual: f64 },
    #[error("plane is not flow-invariant (residual {residual:.3e})")]
    NotInvariant { residual: f64 },
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// `g(θ) = c0 + c1·cosθ + c2·sinθ`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrigAffine {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl TrigAffine {
    pub fn eval(&self, theta: f64) -> f64 {
        self.c0 + self.c1 * theta.cos() + self.c2 * theta.sin()
    }

    /// Largest probe magnitude `max |g|` over the four quarter angles;
    /// used as the normalization scale for root classification.
    pub fn probe_scale(&self) -> f64 {
        (self.c0 + self.c1)
            .abs()
            .max((self.c0 - self.c1).abs())
            .max((self.c0 + self.c2).abs())
            .max((self.c0 - self.c2).abs())
    }
}

/// Restrict the symplectic pairing to one circle of null-cone planes.
///
/// `g(θ) = ω(u₁(θ), u₂(θ))` with `uᵢ` the raw graph basis vectors of
/// the plane at `θ` mapped through the adapted frame. The coefficients
/// come from quarter-angle probes, and the fourth probe serves as a
/// consistency check on the affine trigonometric form.
pub fn omega_restriction(
    frame: &AdaptedFrame,
    w: &SymplecticStructure,
    component: CircleComponent,
) -> Result<TrigAffine, CensusError> {
    let g = |theta: f64| -> f64 {
        let cols = circle_graph_columns(frame, CirclePoint { component, theta });
        w.pairing(&cols.col(0), &cols.col(1))
    };
    let g0 = g(0.0);
    let g90 = g(std::f64::consts::FRAC_PI_2);
    let g180 = g(std::f64::consts::PI);
    let g270 = g(1.5 * std::f64::consts::PI);

    let c0 = 0.5 * (g0 + g180);
    let c1 = 0.5 * (g0 - g180);
    let c2 = g90 - c0;

    let t = TrigAffine { c0, c1, c2 };
    // On a circle whose restriction vanishes identically the probes carry
    // no scale; the pulled-back ω supplies the natural one.
    let pulled = frame.basis().t().matmul(w.matrix()).matmul(frame.basis());
    let scale = t.probe_scale().max(pulled.norm_max()).max(f64::MIN_POSITIVE);
    let defect = (g270 - (c0 - c2)).abs();
    if defect > 1e-9 * scale {
        return Err(CensusError::TrigFormViolation { defect });
    }
    Ok(t)
}

/// Root structure of one circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RootKind {
    NoRoots,
    OneRoot { theta: f64 },
    TwoRoots { theta1: f64, theta2: f64 },
    AllLagrangian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleOutcome {
    pub kind: RootKind,
    /// Set when the root is a tangency (double root of `g`).
    pub tangency_flag: bool,
    /// Set when the coefficients sit within a decade of the tangency or
    /// all-zero boundary, where the outcome is ill-conditioned.
    pub ambiguous: bool,
}

impl CircleOutcome {
    pub fn root_count(&self) -> usize {
        match self.kind {
            RootKind::NoRoots | RootKind::AllLagrangian => 0,
            RootKind::OneRoot { .. } => 1,
            RootKind::TwoRoots { .. } => 2,
        }
    }

    pub fn thetas(&self) -> Vec<f64> {
        match self.kind {
            RootKind::NoRoots | RootKind::AllLagrangian => vec![],
            RootKind::OneRoot { theta } => vec![theta],
            RootKind::TwoRoots { theta1, theta2 } => vec![theta1, theta2],
        }
    }

    pub fn is_full_circle(&self) -> bool {
        matches!(self.kind, RootKind::AllLagrangian)
    }
}

/// Closed-form roots of `c0 + c1·cosθ + c2·sinθ = 0` on `[0, 2π)`.
///
/// With `r = √(c1²+c2²)` and `φ = atan2(c2, c1)` the equation becomes
/// `cos(θ-φ) = -c0/r`: no roots when `|c0| > r`, a tangency when
/// `|c0| = r` (within the band `tol·scale`), two roots otherwise, the
/// whole circle when all coefficients vanish.
pub fn circle_roots(t: &TrigAffine, tol: f64, scale: f64) -> CircleOutcome {
    let band = tol * scale.max(f64::MIN_POSITIVE);
    let r = t.c1.hypot(t.c2);
    let gap = t.c0.abs() - r;

    let ambiguous = {
        let near_tangent = gap.abs() > band && gap.abs() <= 10.0 * band;
        let near_zero =
            t.c0.abs().max(r) > band && t.c0.abs().max(r) <= 10.0 * band;
        near_tangent || near_zero
    };

    if t.c0.abs() <= band && r <= band {
        return CircleOutcome { kind: RootKind::AllLagrangian, tangency_flag: false, ambiguous };
    }
    if r <= band {
        return CircleOutcome { kind: RootKind::NoRoots, tangency_flag: false, ambiguous };
    }
    let phi = t.c2.atan2(t.c1);
    if gap.abs() <= band {
        // cos(θ-φ) = ∓1 depending on the sign of c0.
        let theta = if t.c0 > 0.0 {
            normalize_angle(phi + std::f64::consts::PI)
        } else {
            normalize_angle(phi)
        };
        return CircleOutcome {
            kind: RootKind::OneRoot { theta },
            tangency_flag: true,
            ambiguous,
        };
    }
    if gap > 0.0 {
        return CircleOutcome { kind: RootKind::NoRoots, tangency_flag: false, ambiguous };
    }
    let ratio = (-t.c0 / r).clamp(-1.0, 1.0);
    let delta = ratio.acos();
    let mut t1 = normalize_angle(phi - delta);
    let mut t2 = normalize_angle(phi + delta);
    if t1 > t2 {
        std::mem::swap(&mut t1, &mut t2);
    }
    // Merge near-identical roots (double root straddling the band).
    let two_pi = 2.0 * std::f64::consts::PI;
    if (t2 - t1).min(two_pi - (t2 - t1)) < 1e-6 {
        return CircleOutcome {
            kind: RootKind::OneRoot { theta: t1 },
            tangency_flag: true,
            ambiguous,
        };
    }
    CircleOutcome { kind: RootKind::TwoRoots { theta1: t1, theta2: t2 }, tangency_flag: false, ambiguous }
}

/// Aggregate plane count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneCount {
    Finite(usize),
    Infinite,
    InfinitePlusTwo,
}

impl std::fmt::Display for PlaneCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PlaneCount::Finite(k) => write!(f, "finite({k})"),
            PlaneCount::Infinite => write!(f, "infinite"),
            PlaneCount::InfinitePlusTwo => write!(f, "infinite+2"),
        }
    }
}

/// Flow behaviour on an invariant plane, read off the real parts of the
/// restricted spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DynamicsLabel {
    StableManifold,
    UnstableManifold,
    Saddle,
    Periodic,
}

/// Residuals certifying one plane, all relative to the natural scales.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerificationReport {
    /// Max `|H|`-pairing on the basis, relative to `‖S‖`.
    pub max_h_on_plane: f64,
    /// Max `|ω|`-pairing on the basis, relative to `‖Ω‖`.
    pub max_omega_on_plane: f64,
    /// `σ_{k+1}/σ₁` of `[B | LB]`, certifying `rank = k`.
    pub invariance_defect: f64,
    pub dynamics_label: Option<DynamicsLabel>,
}

/// Cross-check of the census count against the spectral stratum.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumCrossCheck {
    pub structure: Option<MultiplicityStructure>,
    pub expected: Option<PlaneCount>,
    pub consistent: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct CensusResult {
    pub inertia: Inertia,
    pub rotation: CircleOutcome,
    pub reflection: CircleOutcome,
    pub aggregate: PlaneCount,
    /// Isolated planes in original coordinates, rotation circle first,
    /// ascending angle.
    pub planes: Vec<PlaneBasis>,
    pub verification: Vec<VerificationReport>,
    pub tangency_ambiguity: bool,
    /// Populated when the count is settled by the signature alone.
    pub note: Option<String>,
    pub cross_check: Option<SpectrumCrossCheck>,
    /// The adapted frame used, for re-sampling circle planes.
    pub frame: Option<AdaptedFrame>,
}

/// The plane count implied by a multiplicity stratum.
pub fn expected_count(structure: MultiplicityStructure) -> PlaneCount {
    match structure {
        MultiplicityStructure::SimpleImaginary => PlaneCount::Finite(0),
        MultiplicityStructure::DoubleImaginaryNilpotent => PlaneCount::Finite(1),
        MultiplicityStructure::Quadruplet => PlaneCount::Finite(2),
        MultiplicityStructure::DoubleRealNilpotent => PlaneCount::Finite(3),
        MultiplicityStructure::SimpleReal => PlaneCount::Finite(4),
        MultiplicityStructure::DoubleImaginarySemisimple => PlaneCount::Infinite,
        MultiplicityStructure::DoubleRealSemisimple => PlaneCount::InfinitePlusTwo,
    }
}

/// Count and construct all Lagrangian planes in the null-cone.
///
/// Non-signature-zero forms yield `Finite(0)` with an explanatory note
/// (definite and index-1 cones contain no planes at all); degenerate
/// forms are an error. The tangency band is one hundred times the base
/// tolerance.
pub fn census(
    q: &QuadraticForm,
    w: &SymplecticStructure,
    tol: f64,
) -> Result<CensusResult, CensusError> {
    if q.dim() != 4 || w.dim() != 4 {
        return Err(CensusError::WrongDimension { found: q.dim().max(w.dim()) });
    }
    let counts = inertia(q, tol);
    if !counts.is_nondegenerate() {
        return Err(CensusError::DegenerateSystem { inertia: counts });
    }
    let sys = build_system(q.clone(), w.clone())?;
    let cross_check_of = |aggregate: PlaneCount| -> Option<SpectrumCrossCheck> {
        match classify(&sys, tol) {
            Ok(report) => {
                let expected = report.multiplicity_structure.map(expected_count);
                Some(SpectrumCrossCheck {
                    structure: report.multiplicity_structure,
                    expected,
                    consistent: expected.map(|e| e == aggregate),
                })
            }
            Err(_) => None,
        }
    };

    if !(counts.n_plus == 2 && counts.n_minus == 2) {
        let no_roots =
            CircleOutcome { kind: RootKind::NoRoots, tangency_flag: false, ambiguous: false };
        let aggregate = PlaneCount::Finite(0);
        return Ok(CensusResult {
            inertia: counts,
            rotation: no_roots,
            reflection: no_roots,
            aggregate,
            planes: vec![],
            verification: vec![],
            tangency_ambiguity: false,
            note: Some(format!(
                "inertia ({}, {}, {}): the null-cone of a non-signature-zero form contains no planes",
                counts.n_plus, counts.n_minus, counts.n_zero
            )),
            cross_check: cross_check_of(aggregate),
            frame: None,
        });
    }

    let frame = adapted_basis(q, tol)?;
    let rot_t = omega_restriction(&frame, w, CircleComponent::Rotation)?;
    let ref_t = omega_restriction(&frame, w, CircleComponent::Reflection)?;

    // Shared normalization: one circle can vanish identically only while
    // the other stays at the natural scale of ω in this frame.
    let scale = rot_t
        .probe_scale()
        .max(ref_t.probe_scale())
        .max(w.matrix().norm_max() * f64::EPSILON);
    let tangency_tol = 100.0 * tol;
    let rotation = circle_roots(&rot_t, tangency_tol, scale);
    let reflection = circle_roots(&ref_t, tangency_tol, scale);

    let mut note = None;
    let aggregate = match (rotation.is_full_circle(), reflection.is_full_circle()) {
        (true, true) => {
            // Impossible for a nondegenerate ω; report honestly if numerics
            // ever land here.
            note = Some("both circles reported as fully Lagrangian".to_string());
            PlaneCount::Infinite
        }
        (true, false) | (false, true) => {
            let other = if rotation.is_full_circle() { &reflection } else { &rotation };
            match other.root_count() {
                0 => PlaneCount::Infinite,
                2 => PlaneCount::InfinitePlusTwo,
                _ => {
                    note = Some(
                        "one circle is fully Lagrangian, the other has a tangency root"
                            .to_string(),
                    );
                    PlaneCount::Infinite
                }
            }
        }
        (false, false) => PlaneCount::Finite(rotation.root_count() + reflection.root_count()),
    };

    // Materialize isolated planes: rotation circle first, θ ascending.
    let mut planes = Vec::new();
    for (component, outcome) in [
        (CircleComponent::Rotation, &rotation),
        (CircleComponent::Reflection, &reflection),
    ] {
        for theta in outcome.thetas() {
            planes.push(plane_from_circle(&frame, CirclePoint::new(component, theta)));
        }
    }
    let verification = planes
        .iter()
        .map(|plane| verify_plane(plane, &sys, tol.max(1e-8)))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(CensusResult {
        inertia: counts,
        rotation,
        reflection,
        aggregate,
        planes,
        verification,
        tangency_ambiguity: rotation.ambiguous || reflection.ambiguous,
        note,
        cross_check: cross_check_of(aggregate),
        frame: Some(frame),
    })
}

/// Verify that a half-dimensional plane is in the null-cone, Lagrangian
/// and flow-invariant, and label the restricted dynamics.
///
/// The invariance certificate is the rank of `[B | LB]`: the `(k+1)`-th
/// singular value must vanish relative to the largest.
pub fn verify_plane(
    plane: &PlaneBasis,
    sys: &HamiltonianSystem,
    tol: f64,
) -> Result<VerificationReport, CensusError> {
    let k = plane.dim();
    let max_h = plane.nullcone_residual(sys.form());
    if max_h > tol {
        return Err(CensusError::NotInNullCone { residual: max_h });
    }
    let max_omega = plane.omega_residual(sys.structure());
    if max_omega > tol {
        return Err(CensusError::NotLagrangian { residual: max_omega });
    }

    let lb = sys.matrix().matmul(plane.basis());
    let stacked = plane.basis().hstack(&lb);
    let svd = Svd::compute(&stacked);
    let smax = svd.sigma.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let invariance_defect = svd.sigma.get(k).copied().unwrap_or(0.0) / smax;
    if invariance_defect > tol {
        return Err(CensusError::NotInvariant { residual: invariance_defect });
    }

    Ok(VerificationReport {
        max_h_on_plane: max_h,
        max_omega_on_plane: max_omega,
        invariance_defect,
        dynamics_label: dynamics_label(plane, sys.matrix(), tol),
    })
}

/// Restricted dynamics `C = BᵀLB`; the label follows the signs of the
/// real parts of its spectrum.
fn dynamics_label(plane: &PlaneBasis, l: &RealMatrix, tol: f64) -> Option<DynamicsLabel> {
    let c = plane.basis().t().matmul(l).matmul(plane.basis());
    let eigs = eigenvalues(&c, tol).ok()?;
    let scale = eigs
        .iter()
        .map(|(v, _)| v.norm())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let band = tol * scale;
    let mut pos = 0usize;
    let mut neg = 0usize;
    let mut zero = 0usize;
    for (v, m) in &eigs {
        if v.re > band {
            pos += m;
        } else if v.re < -band {
            neg += m;
        } else {
            zero += m;
        }
    }
    let total = pos + neg + zero;
    if neg == total {
        Some(DynamicsLabel::StableManifold)
    } else if pos == total {
        Some(DynamicsLabel::UnstableManifold)
    } else if zero == total {
        Some(DynamicsLabel::Periodic)
    } else if zero == 0 {
        Some(DynamicsLabel::Saddle)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Provenance;
    use crate::generate;

    fn std_w() -> SymplecticStructure {
        SymplecticStructure::standard(4)
    }

    fn coordinate_plane(rows: [usize; 2]) -> PlaneBasis {
        let raw = RealMatrix::from_fn(4, 2, |i, j| if i == rows[j] { 1.0 } else { 0.0 });
        PlaneBasis::new(
            raw,
            Provenance::Circle { component: CircleComponent::Rotation, theta: 0.0 },
        )
        .unwrap()
    }

    #[test]
    fn circle_roots_closed_forms() {
        let scale = 1.0;
        let t = TrigAffine { c0: 0.0, c1: 0.0, c2: 0.0 };
        assert_eq!(circle_roots(&t, 1e-7, scale).kind, RootKind::AllLagrangian);

        let t = TrigAffine { c0: 1.0, c1: 1.0, c2: 0.0 };
        let out = circle_roots(&t, 1e-7, scale);
        assert!(out.tangency_flag);
        match out.kind {
            RootKind::OneRoot { theta } => {
                assert!((theta - std::f64::consts::PI).abs() < 1e-12)
            }
            other => panic!("expected tangency at π, got {other:?}"),
        }

        let t = TrigAffine { c0: 0.0, c1: 1.0, c2: 0.0 };
        match circle_roots(&t, 1e-7, scale).kind {
            RootKind::TwoRoots { theta1, theta2 } => {
                assert!((theta1 - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
                assert!((theta2 - 1.5 * std::f64::consts::PI).abs() < 1e-12);
            }
            other => panic!("expected roots at π/2 and 3π/2, got {other:?}"),
        }

        let t = TrigAffine { c0: 2.0, c1: 1.0, c2: 0.0 };
        assert_eq!(circle_roots(&t, 1e-7, scale).kind, RootKind::NoRoots);
    }

    #[test]
    fn trig_probe_identity() {
        let t = TrigAffine { c0: 0.3, c1: -1.2, c2: 0.7 };
        let g270 = t.eval(1.5 * std::f64::consts::PI);
        assert!((g270 - (t.c0 - t.c2)).abs() < 1e-15);
    }

    #[test]
    fn restriction_satisfies_trig_form() {
        let q = generate::conjugated(&generate::hyperbolic_quadruplet(1.0, 0.8), 3, 1.0);
        let frame = adapted_basis(&q, 1e-9).unwrap();
        for component in CircleComponent::BOTH {
            let t = omega_restriction(&frame, &std_w(), component).unwrap();
            // Spot-check against direct evaluation at arbitrary angles.
            for k in 0..7 {
                let theta = 0.37 + 0.9 * k as f64;
                let cols = circle_graph_columns(&frame, CirclePoint { component, theta });
                let direct = std_w().pairing(&cols.col(0), &cols.col(1));
                assert!((t.eval(theta) - direct).abs() < 1e-10 * t.probe_scale().max(1.0));
            }
        }
    }

    #[test]
    fn quadruplet_census_counts_two() {
        let q = generate::hyperbolic_quadruplet(1.0, 1.0);
        let result = census(&q, &std_w(), 1e-9).unwrap();
        assert_eq!(result.aggregate, PlaneCount::Finite(2));
        // The two planes are on the same circle; the other has none.
        let counts = (result.rotation.root_count(), result.reflection.root_count());
        assert!(counts == (2, 0) || counts == (0, 2), "{counts:?}");
        // {q1=q2=0} and {p1=p2=0} are the planes.
        let q_zero = coordinate_plane([2, 3]);
        let p_zero = coordinate_plane([0, 1]);
        assert!(result.planes.iter().any(|p| p.same_span(&q_zero, 1e-8)));
        assert!(result.planes.iter().any(|p| p.same_span(&p_zero, 1e-8)));
        assert_eq!(result.cross_check.unwrap().consistent, Some(true));
    }

    #[test]
    fn real_simple_census_counts_four() {
        let q = generate::hyperbolic_real(1.0, 2.0);
        let result = census(&q, &std_w(), 1e-9).unwrap();
        assert_eq!(result.aggregate, PlaneCount::Finite(4));
        let expected = [
            coordinate_plane([0, 1]), // {p1=p2=0}
            coordinate_plane([2, 3]), // {q1=q2=0}
            coordinate_plane([1, 2]), // {q1=p2=0}
            coordinate_plane([0, 3]), // {p1=q2=0}
        ];
        for e in &expected {
            assert!(result.planes.iter().any(|p| p.same_span(e, 1e-8)));
        }
    }

    #[test]
    fn real_double_nilpotent_census_counts_three() {
        let q = generate::hyperbolic_real_double_nilpotent(1.0);
        let result = census(&q, &std_w(), 1e-9).unwrap();
        assert_eq!(result.aggregate, PlaneCount::Finite(3));
        let expected = [
            coordinate_plane([0, 1]),
            coordinate_plane([2, 3]),
            coordinate_plane([0, 3]), // {p1=q2=0}
        ];
        for e in &expected {
            assert!(result.planes.iter().any(|p| p.same_span(e, 1e-8)));
        }
        // One of the circles carries the tangency.
        assert!(result.rotation.tangency_flag || result.reflection.tangency_flag);
    }

    #[test]
    fn elliptic_nilpotent_census_counts_one() {
        for sign in [1.0, -1.0] {
            let q = generate::elliptic_double_nilpotent(sign, 1.0);
            let result = census(&q, &std_w(), 1e-9).unwrap();
            assert_eq!(result.aggregate, PlaneCount::Finite(1), "sign {sign}");
            let q_zero = coordinate_plane([2, 3]);
            assert!(result.planes[0].same_span(&q_zero, 1e-8));
        }
    }

    #[test]
    fn elliptic_simple_census_counts_zero() {
        let q = generate::elliptic_simple(0.5, 1.0);
        let result = census(&q, &std_w(), 1e-9).unwrap();
        assert_eq!(result.aggregate, PlaneCount::Finite(0));
        assert!(result.planes.is_empty());
    }

    #[test]
    fn real_double_semisimple_is_infinite_plus_two() {
        let q = generate::hyperbolic_real(1.0, 1.0);
        let result = census(&q, &std_w(), 1e-9).unwrap();
        assert_eq!(result.aggregate, PlaneCount::InfinitePlusTwo);
        assert_eq!(result.planes.len(), 2);
        let q_zero = coordinate_plane([2, 3]);
        let p_zero = coordinate_plane([0, 1]);
        assert!(result.planes.iter().any(|p| p.same_span(&q_zero, 1e-8)));
        assert!(result.planes.iter().any(|p| p.same_span(&p_zero, 1e-8)));
    }

    #[test]
    fn elliptic_double_semisimple_is_infinite() {
        let q = generate::elliptic_double_semisimple(0.5);
        let result = census(&q, &std_w(), 1e-9).unwrap();
        assert_eq!(result.aggregate, PlaneCount::Infinite);
        assert!(result.planes.is_empty());
    }

    #[test]
    fn definite_form_counts_zero_with_note() {
        // H = Σ (pᵢ² + qᵢ²).
        let q = generate::FormBuilder::new(2)
            .q2(1, 1.0)
            .p2(1, 1.0)
            .q2(2, 1.0)
            .p2(2, 1.0)
            .build();
        let result = census(&q, &std_w(), 1e-9).unwrap();
        assert_eq!(result.aggregate, PlaneCount::Finite(0));
        assert!(result.note.unwrap().contains("no planes"));
    }

    #[test]
    fn census_rejects_degenerate() {
        let q = QuadraticForm::new(RealMatrix::zeros(4, 4)).unwrap();
        assert!(matches!(
            census(&q, &std_w(), 1e-9),
            Err(CensusError::DegenerateSystem { .. })
        ));
    }

    #[test]
    fn quadruplet_stable_unstable_labels() {
        let q = generate::hyperbolic_quadruplet(1.0, 1.0);
        let sys = build_system(q.clone(), std_w()).unwrap();
        let q_zero = coordinate_plane([2, 3]);
        let p_zero = coordinate_plane([0, 1]);
        let report = verify_plane(&q_zero, &sys, 1e-8).unwrap();
        assert_eq!(report.dynamics_label, Some(DynamicsLabel::StableManifold));
        let report = verify_plane(&p_zero, &sys, 1e-8).unwrap();
        assert_eq!(report.dynamics_label, Some(DynamicsLabel::UnstableManifold));
    }

    #[test]
    fn saddle_labels() {
        // Real semisimple: {q1=p2=0} is a saddle.
        let q = generate::hyperbolic_real(1.0, 2.0);
        let sys = build_system(q, std_w()).unwrap();
        let plane = coordinate_plane([1, 2]);
        let report = verify_plane(&plane, &sys, 1e-8).unwrap();
        assert_eq!(report.dynamics_label, Some(DynamicsLabel::Saddle));

        // Non-semisimple real: {p1=q2=0} is a saddle with eigenvalues ±λ/2.
        let q = generate::hyperbolic_real_double_nilpotent(1.0);
        let sys = build_system(q, std_w()).unwrap();
        let plane = coordinate_plane([0, 3]);
        let report = verify_plane(&plane, &sys, 1e-8).unwrap();
        assert_eq!(report.dynamics_label, Some(DynamicsLabel::Saddle));
    }

    #[test]
    fn periodic_label_on_elliptic_plane() {
        let q = generate::elliptic_double_nilpotent(1.0, 1.0);
        let sys = build_system(q, std_w()).unwrap();
        let plane = coordinate_plane([2, 3]);
        let report = verify_plane(&plane, &sys, 1e-8).unwrap();
        assert_eq!(report.dynamics_label, Some(DynamicsLabel::Periodic));
    }

    #[test]
    fn verify_plane_rejects_bad_planes() {
        let q = generate::hyperbolic_real(1.0, 2.0);
        let sys = build_system(q, std_w()).unwrap();
        // {q2=p2=0} is not in the cone.
        let plane = coordinate_plane([0, 2]);
        assert!(matches!(
            verify_plane(&plane, &sys, 1e-8),
            Err(CensusError::NotInNullCone { .. })
        ));

        // A null-cone plane of a different form is not in this cone either.
        let other = generate::hyperbolic_real(1.0, 1.0);
        let frame = adapted_basis(&other, 1e-9).unwrap();
        let foreign = plane_from_circle(
            &frame,
            CirclePoint::new(CircleComponent::Rotation, 0.31),
        );
        let r = verify_plane(&foreign, &sys, 1e-8);
        assert!(r.is_err());
    }

    #[test]
    fn verify_plane_rejects_symplectic_cone_plane() {
        // In-cone but symplectic: must fail the Lagrangian check.
        let q = generate::hyperbolic_real(1.0, 1.0);
        let sys = build_system(q, std_w()).unwrap();
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
        assert!(matches!(
            verify_plane(&plane, &sys, 1e-8),
            Err(CensusError::NotLagrangian { .. })
        ));
    }

    #[test]
    fn all_lagrangian_circle_planes_verify() {
        let q = generate::hyperbolic_real(1.0, 1.0);
        let result = census(&q, &std_w(), 1e-9).unwrap();
        let frame = result.frame.unwrap();
        let full = if result.rotation.is_full_circle() {
            CircleComponent::Rotation
        } else {
            assert!(result.reflection.is_full_circle());
            CircleComponent::Reflection
        };
        let sys = build_system(q, std_w()).unwrap();
        for k in 0..16 {
            let theta = k as f64 * std::f64::consts::PI / 8.0;
            let plane = plane_from_circle(&frame, CirclePoint::new(full, theta));
            let report = verify_plane(&plane, &sys, 1e-8).unwrap();
            assert!(report.max_h_on_plane <= 1e-8);
            assert!(report.max_omega_on_plane <= 1e-8);
            assert!(report.invariance_defect <= 1e-8);
        }
    }
}
