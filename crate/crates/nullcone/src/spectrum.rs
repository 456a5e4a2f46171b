//! Spectral classification of linear Hamiltonian systems.
//!
//! The system matrix is `L = Ω⁻¹S`; its spectrum is symmetric under both
//! negation and conjugation, so on `R⁴` the characteristic polynomial is
//! the even quartic `t⁴ + c·t² + d` and the whole classification reduces
//! to the sign pattern of the quadratic in `u = t²`. Higher dimensions
//! fall back to the general eigensolver.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{
    det, eigenvalues, inertia, Inertia, LinalgError, LuDecomp, QuadraticForm, RealMatrix,
    SymplecticStructure,
};

#[derive(Debug, Clone, Error)]
pub enum SpectrumError {
    #[error("dimension mismatch: form is {form}-dimensional, symplectic structure is {omega}-dimensional")]
    DimensionMismatch { form: usize, omega: usize },
    #[error("matrix is not a 4-dimensional Hamiltonian matrix (odd char-poly coefficient defect {defect:.3e})")]
    NotHamiltonian { defect: f64 },
    #[error("system is degenerate: inertia ({}, {}, {})", .inertia.n_plus, .inertia.n_minus, .inertia.n_zero)]
    DegenerateSystem { inertia: Inertia },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A quadratic Hamiltonian together with a symplectic structure and the
/// derived system matrix `L = Ω⁻¹S`.
#[derive(Debug, Clone)]
pub struct HamiltonianSystem {
    q: QuadraticForm,
    w: SymplecticStructure,
    l: RealMatrix,
}

impl HamiltonianSystem {
    pub fn form(&self) -> &QuadraticForm {
        &self.q
    }

    pub fn structure(&self) -> &SymplecticStructure {
        &self.w
    }

    /// The system matrix of `ẋ = Lx`.
    pub fn matrix(&self) -> &RealMatrix {
        &self.l
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }
}

/// Build `L` by solving `ΩL = S` column by column (no explicit inverse).
pub fn build_system(
    q: QuadraticForm,
    w: SymplecticStructure,
) -> Result<HamiltonianSystem, SpectrumError> {
    if q.dim() != w.dim() {
        return Err(SpectrumError::DimensionMismatch { form: q.dim(), omega: w.dim() });
    }
    let lu = LuDecomp::new(w.matrix()).map_err(SpectrumError::Linalg)?;
    let l = lu.solve_mat(q.matrix());
    Ok(HamiltonianSystem { q, w, l })
}

/// Invariants of the even characteristic quartic `t⁴ + c·t² + d` of a
/// 4-dimensional Hamiltonian matrix.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EvenQuartic {
    /// Coefficient of `t²`: `-trace(L²)/2`.
    pub c: f64,
    /// Constant coefficient: `det(L)`.
    pub d: f64,
    /// Discriminant `c² - 4d` of the quadratic in `u = t²`.
    pub disc: f64,
}

impl EvenQuartic {
    /// Natural scale of the roots `u = t²`.
    pub fn u_scale(&self) -> f64 {
        self.c.abs().max(self.d.abs().sqrt())
    }
}

/// Extract the even quartic invariants, verifying that the odd
/// characteristic coefficients vanish as they must for a Hamiltonian
/// matrix.
pub fn even_quartic(l: &RealMatrix) -> Result<EvenQuartic, SpectrumError> {
    if !l.is_square() || l.rows() != 4 {
        return Err(SpectrumError::DimensionMismatch { form: l.rows(), omega: 4 });
    }
    let scale = l.norm_max().max(f64::MIN_POSITIVE);
    let l2 = l.matmul(l);
    let l3 = l2.matmul(l);
    let tr1 = l.trace();
    let tr2 = l2.trace();
    let tr3 = l3.trace();
    // Newton's identities: e1 = tr1, e3 = (tr1³ - 3 tr1 tr2 + 2 tr3)/6.
    let e3 = (tr1.powi(3) - 3.0 * tr1 * tr2 + 2.0 * tr3) / 6.0;
    let defect = (tr1.abs() / scale).max(e3.abs() / scale.powi(3));
    if defect > 1e-7 {
        return Err(SpectrumError::NotHamiltonian { defect });
    }
    let c = -tr2 / 2.0;
    let d = det(l);
    Ok(EvenQuartic { c, d, disc: c * c - 4.0 * d })
}

/// Elliptic / hyperbolic / mixed, per the location of the spectrum
/// relative to the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemType {
    Elliptic,
    Hyperbolic,
    Mixed,
}

/// Exact multiplicity stratum on `R⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplicityStructure {
    SimpleImaginary,
    DoubleImaginarySemisimple,
    DoubleImaginaryNilpotent,
    Quadruplet,
    SimpleReal,
    DoubleRealSemisimple,
    DoubleRealNilpotent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionFlag {
    /// The discriminant sits within a decade of the double-eigenvalue
    /// detection band; the simple/double call is not well conditioned.
    AmbiguousClassification,
}

/// One symmetry class `{λ, -λ, λ̄, -λ̄}` of the spectrum.
#[derive(Debug, Clone, Copy)]
pub struct EigenGroup {
    /// Representative with `Re ≥ 0, Im ≥ 0`.
    pub representative: Complex64,
    /// Distinct members of the class: 2 for real or imaginary pairs,
    /// 4 for a full quadruplet.
    pub members: usize,
    /// Algebraic multiplicity of each member.
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub quadruplets: Vec<EigenGroup>,
    pub system_type: SystemType,
    /// Only populated on `R⁴`, where the strata are exact.
    pub multiplicity_structure: Option<MultiplicityStructure>,
    pub condition_flags: Vec<ConditionFlag>,
    /// Even-quartic invariants (R⁴ only).
    pub quartic: Option<EvenQuartic>,
}

/// Classify a nondegenerate system.
///
/// On `R⁴` the classification is closed-form through the even quartic:
/// with `u± = t²` the roots of `u² + cu + d`, both `u` real negative is
/// elliptic, both real positive or a conjugate pair is hyperbolic,
/// opposite real signs is mixed. Double eigenvalues occur exactly on
/// `disc = 0`; there semisimplicity is equivalent to `L² = u·I`.
pub fn classify(sys: &HamiltonianSystem, tol: f64) -> Result<SpectrumReport, SpectrumError> {
    let counts = inertia(sys.form(), tol);
    if !counts.is_nondegenerate() {
        return Err(SpectrumError::DegenerateSystem { inertia: counts });
    }
    if sys.dim() == 4 {
        classify_r4(sys, tol)
    } else {
        classify_general(sys, tol)
    }
}

fn classify_r4(sys: &HamiltonianSystem, tol: f64) -> Result<SpectrumReport, SpectrumError> {
    let quartic = even_quartic(sys.matrix())?;
    let EvenQuartic { c, d, disc } = quartic;
    let u_scale = quartic.u_scale().max(f64::MIN_POSITIVE);
    let disc_band = tol * u_scale * u_scale;
    let u_band = tol * u_scale;

    let mut flags = Vec::new();
    if disc.abs() > disc_band && disc.abs() <= 10.0 * disc_band {
        flags.push(ConditionFlag::AmbiguousClassification);
    }

    if d.abs() <= u_band * u_band {
        // det L = det S / det Ω vanishes only for degenerate S; the
        // inertia gate should already have caught this.
        return Err(SpectrumError::DegenerateSystem { inertia: inertia(sys.form(), tol) });
    }

    let (groups, system_type, structure);
    if disc.abs() <= disc_band {
        // Double root u = -c/2.
        let u = -c / 2.0;
        let l2 = sys.matrix().matmul(sys.matrix());
        let mut shifted = l2.clone();
        for i in 0..4 {
            shifted[(i, i)] -= u;
        }
        let l_norm = sys.matrix().norm_max();
        let semisimple = shifted.norm_max() <= tol * l_norm * l_norm;
        if u < 0.0 {
            let mu = (-u).sqrt();
            groups = vec![EigenGroup {
                representative: Complex64::new(0.0, mu),
                members: 2,
                multiplicity: 2,
            }];
            system_type = SystemType::Elliptic;
            structure = if semisimple {
                MultiplicityStructure::DoubleImaginarySemisimple
            } else {
                MultiplicityStructure::DoubleImaginaryNilpotent
            };
        } else {
            let lam = u.sqrt();
            groups = vec![EigenGroup {
                representative: Complex64::new(lam, 0.0),
                members: 2,
                multiplicity: 2,
            }];
            system_type = SystemType::Hyperbolic;
            structure = if semisimple {
                MultiplicityStructure::DoubleRealSemisimple
            } else {
                MultiplicityStructure::DoubleRealNilpotent
            };
        }
    } else if disc > 0.0 {
        // Two distinct real roots; compute them stably.
        let sq = disc.sqrt();
        let q0 = -0.5 * (c + c.signum() * sq);
        let (u1, u2) = if q0 != 0.0 { (q0, d / q0) } else { ((-c + sq) / 2.0, (-c - sq) / 2.0) };
        let group_of = |u: f64| {
            if u > 0.0 {
                EigenGroup {
                    representative: Complex64::new(u.sqrt(), 0.0),
                    members: 2,
                    multiplicity: 1,
                }
            } else {
                EigenGroup {
                    representative: Complex64::new(0.0, (-u).sqrt()),
                    members: 2,
                    multiplicity: 1,
                }
            }
        };
        groups = vec![group_of(u1.min(u2)), group_of(u1.max(u2))];
        if u1 < 0.0 && u2 < 0.0 {
            system_type = SystemType::Elliptic;
            structure = MultiplicityStructure::SimpleImaginary;
        } else if u1 > 0.0 && u2 > 0.0 {
            system_type = SystemType::Hyperbolic;
            structure = MultiplicityStructure::SimpleReal;
        } else {
            system_type = SystemType::Mixed;
            // No single stratum name applies; report the closest thing.
            structure = MultiplicityStructure::SimpleReal;
        }
    } else {
        // Complex-conjugate roots u: a full quadruplet ±κ±iν with κ ≠ 0.
        let u = Complex64::new(-c / 2.0, (-disc).sqrt() / 2.0);
        let root = u.sqrt();
        groups = vec![EigenGroup {
            representative: Complex64::new(root.re.abs(), root.im.abs()),
            members: 4,
            multiplicity: 1,
        }];
        system_type = SystemType::Hyperbolic;
        structure = MultiplicityStructure::Quadruplet;
    }

    let multiplicity_structure =
        if system_type == SystemType::Mixed { None } else { Some(structure) };
    Ok(SpectrumReport {
        quadruplets: groups,
        system_type,
        multiplicity_structure,
        condition_flags: flags,
        quartic: Some(quartic),
    })
}

fn classify_general(sys: &HamiltonianSystem, tol: f64) -> Result<SpectrumReport, SpectrumError> {
    let clusters = eigenvalues(sys.matrix(), tol)?;
    let scale = clusters
        .iter()
        .map(|(v, _)| v.norm())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let band = tol * scale;

    let mut all_imaginary = true;
    let mut all_off_axis = true;
    for (v, _) in &clusters {
        if v.re.abs() <= band {
            all_off_axis = false;
        } else {
            all_imaginary = false;
        }
    }
    let system_type = if all_imaginary {
        SystemType::Elliptic
    } else if all_off_axis {
        SystemType::Hyperbolic
    } else {
        SystemType::Mixed
    };

    Ok(SpectrumReport {
        quadruplets: group_quadruplets(&clusters, band),
        system_type,
        multiplicity_structure: None,
        condition_flags: Vec::new(),
        quartic: None,
    })
}

/// Group eigenvalue clusters into `{λ, -λ, λ̄, -λ̄}` classes keyed by
/// `(|Re|, |Im|)`.
pub fn group_quadruplets(clusters: &[(Complex64, usize)], band: f64) -> Vec<EigenGroup> {
    let mut groups: Vec<(Complex64, usize, usize)> = Vec::new(); // (rep, members, total_mult)
    for &(v, m) in clusters {
        let key = Complex64::new(v.re.abs(), v.im.abs());
        match groups
            .iter_mut()
            .find(|(rep, _, _)| (*rep - key).norm() <= band.max(f64::MIN_POSITIVE))
        {
            Some((_, members, total)) => {
                *members += 1;
                *total += m;
            }
            None => groups.push((key, 1, m)),
        }
    }
    groups
        .into_iter()
        .map(|(rep, members, total)| EigenGroup {
            representative: rep,
            members,
            multiplicity: total / members,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn standard_system(q: QuadraticForm) -> HamiltonianSystem {
        let dim = q.dim();
        build_system(q, SymplecticStructure::standard(dim)).unwrap()
    }

    #[test]
    fn two_dim_saddle_matrix() {
        // H = p q on R²: L = diag(1/2, -1/2).
        let q = QuadraticForm::new(
            RealMatrix::from_nested(&[[0.0, 0.5], [0.5, 0.0]]).unwrap(),
        )
        .unwrap();
        let sys = standard_system(q);
        let expected = RealMatrix::from_nested(&[[0.5, 0.0], [0.0, -0.5]]).unwrap();
        assert!(sys.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn zero_form_gives_zero_matrix() {
        let q = QuadraticForm::new(RealMatrix::zeros(4, 4)).unwrap();
        let sys = standard_system(q);
        assert_eq!(sys.matrix().norm_max(), 0.0);
    }

    #[test]
    fn system_matrix_is_trace_free_and_consistent() {
        for seed in 0..10 {
            let q = generate::conjugated(&generate::hyperbolic_quadruplet(1.3, 0.7), seed, 1.0);
            let sys = standard_system(q);
            let l = sys.matrix();
            assert!(l.trace().abs() <= 1e-9 * l.norm_max().max(1e-300));
            let residual = sys.structure().matrix().matmul(l).sub(sys.form().matrix());
            assert!(residual.norm_max() <= 1e-11 * sys.form().matrix().norm_max());
        }
    }

    #[test]
    fn even_quartic_from_spectra() {
        // Eigenvalues {±i, ±2i}: (t²+1)(t²+4) = t⁴ + 5t² + 4.
        let l = RealMatrix::from_nested(&[
            [0.0, -1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -2.0],
            [0.0, 0.0, 2.0, 0.0],
        ])
        .unwrap();
        let eq = even_quartic(&l).unwrap();
        assert!((eq.c - 5.0).abs() < 1e-12);
        assert!((eq.d - 4.0).abs() < 1e-12);
        assert!((eq.disc - 9.0).abs() < 1e-11);

        // Eigenvalues {±1±i}: (t²-2t+2)(t²+2t+2) = t⁴ + 4.
        let l = RealMatrix::from_nested(&[
            [1.0, -1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, -1.0],
            [0.0, 0.0, 1.0, -1.0],
        ])
        .unwrap();
        let eq = even_quartic(&l).unwrap();
        assert!(eq.c.abs() < 1e-12);
        assert!((eq.d - 4.0).abs() < 1e-12);
        assert!((eq.disc + 16.0).abs() < 1e-11);
    }

    #[test]
    fn even_quartic_of_zero() {
        let eq = even_quartic(&RealMatrix::zeros(4, 4)).unwrap();
        assert_eq!((eq.c, eq.d), (0.0, 0.0));
    }

    #[test]
    fn even_quartic_rejects_non_hamiltonian() {
        let l = RealMatrix::from_fn(4, 4, |i, j| if i == j { (i + 1) as f64 } else { 0.0 });
        assert!(matches!(
            even_quartic(&l),
            Err(SpectrumError::NotHamiltonian { .. })
        ));
    }

    #[test]
    fn classify_quadruplet() {
        let sys = standard_system(generate::hyperbolic_quadruplet(1.0, 1.0));
        let report = classify(&sys, 1e-9).unwrap();
        assert_eq!(report.system_type, SystemType::Hyperbolic);
        assert_eq!(
            report.multiplicity_structure,
            Some(MultiplicityStructure::Quadruplet)
        );
        // Eigenvalues (±κ±iλ)/2 with κ = λ = 1.
        let rep = report.quadruplets[0].representative;
        assert!((rep - Complex64::new(0.5, 0.5)).norm() < 1e-12);
    }

    #[test]
    fn classify_real_double_nilpotent() {
        let sys = standard_system(generate::hyperbolic_real_double_nilpotent(1.0));
        let report = classify(&sys, 1e-9).unwrap();
        assert_eq!(report.system_type, SystemType::Hyperbolic);
        assert_eq!(
            report.multiplicity_structure,
            Some(MultiplicityStructure::DoubleRealNilpotent)
        );
        let rep = report.quadruplets[0].representative;
        assert!((rep - Complex64::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn classify_elliptic_double_nilpotent() {
        for sign in [1.0, -1.0] {
            let sys = standard_system(generate::elliptic_double_nilpotent(sign, 1.0));
            let report = classify(&sys, 1e-9).unwrap();
            assert_eq!(report.system_type, SystemType::Elliptic);
            assert_eq!(
                report.multiplicity_structure,
                Some(MultiplicityStructure::DoubleImaginaryNilpotent)
            );
            let rep = report.quadruplets[0].representative;
            assert!((rep - Complex64::new(0.0, 0.5)).norm() < 1e-12);
        }
    }

    #[test]
    fn classify_real_double_semisimple() {
        let sys = standard_system(generate::hyperbolic_real(1.0, 1.0));
        let report = classify(&sys, 1e-9).unwrap();
        assert_eq!(
            report.multiplicity_structure,
            Some(MultiplicityStructure::DoubleRealSemisimple)
        );
    }

    #[test]
    fn classify_simple_strata() {
        let sys = standard_system(generate::hyperbolic_real(1.0, 2.0));
        let report = classify(&sys, 1e-9).unwrap();
        assert_eq!(
            report.multiplicity_structure,
            Some(MultiplicityStructure::SimpleReal)
        );

        let sys = standard_system(generate::elliptic_simple(1.0, 2.0));
        let report = classify(&sys, 1e-9).unwrap();
        assert_eq!(report.system_type, SystemType::Elliptic);
        assert_eq!(
            report.multiplicity_structure,
            Some(MultiplicityStructure::SimpleImaginary)
        );
    }

    #[test]
    fn classify_rejects_degenerate() {
        let q = QuadraticForm::new(RealMatrix::zeros(4, 4)).unwrap();
        let sys = standard_system(q);
        assert!(matches!(
            classify(&sys, 1e-9),
            Err(SpectrumError::DegenerateSystem { .. })
        ));
    }

    #[test]
    fn classification_is_conjugation_invariant() {
        let cases: Vec<(QuadraticForm, MultiplicityStructure)> = vec![
            (generate::hyperbolic_quadruplet(1.2, 0.8), MultiplicityStructure::Quadruplet),
            (generate::hyperbolic_real(0.7, 1.9), MultiplicityStructure::SimpleReal),
            (
                generate::hyperbolic_real_double_nilpotent(1.1),
                MultiplicityStructure::DoubleRealNilpotent,
            ),
            (generate::elliptic_simple(0.6, 1.4), MultiplicityStructure::SimpleImaginary),
            (
                generate::elliptic_double_nilpotent(1.0, 0.9),
                MultiplicityStructure::DoubleImaginaryNilpotent,
            ),
        ];
        for (q, expected) in cases {
            let base = classify(&standard_system(q.clone()), 1e-9).unwrap();
            for seed in 0..50 {
                let sys = standard_system(generate::conjugated(&q, seed, 1.0));
                let report = classify(&sys, 1e-9).unwrap();
                assert_eq!(report.system_type, base.system_type, "seed {seed}");
                assert_eq!(report.multiplicity_structure, Some(expected), "seed {seed}");
            }
        }
    }

    #[test]
    fn classification_is_scale_invariant() {
        let q = generate::hyperbolic_quadruplet(1.0, 1.0);
        for scale in [1e-3, 1.0, 1e3] {
            let sys = standard_system(q.scaled(scale));
            let report = classify(&sys, 1e-9).unwrap();
            assert_eq!(report.system_type, SystemType::Hyperbolic);
            assert_eq!(
                report.multiplicity_structure,
                Some(MultiplicityStructure::Quadruplet)
            );
        }
        // Scale invariance holds on the double strata too.
        let q = generate::hyperbolic_real(1.0, 1.0);
        for scale in [1e-3, 1.0, 1e3] {
            let sys = standard_system(q.scaled(scale));
            let report = classify(&sys, 1e-9).unwrap();
            assert_eq!(
                report.multiplicity_structure,
                Some(MultiplicityStructure::DoubleRealSemisimple)
            );
        }
    }

    #[test]
    fn signature_zero_r4_is_never_mixed() {
        use crate::linalg::random_orthogonal;
        use rand::{Rng, SeedableRng};
        for seed in 0..60 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let q_basis = random_orthogonal(4, seed.wrapping_add(1000));
            let mags: Vec<f64> = (0..4).map(|_| rng.gen_range(0.2..2.0)).collect();
            let d = RealMatrix::from_fn(4, 4, |i, j| {
                if i == j {
                    let sign = if i < 2 { -1.0 } else { 1.0 };
                    sign * mags[i]
                } else {
                    0.0
                }
            });
            let s = q_basis.matmul(&d).matmul(&q_basis.t());
            let q = QuadraticForm::new(s).unwrap();
            assert!(inertia(&q, 1e-9).is_signature_zero());
            let report = classify(&standard_system(q), 1e-9).unwrap();
            assert_ne!(report.system_type, SystemType::Mixed, "seed {seed}");
        }
    }

    #[test]
    fn mixed_systems_are_classified() {
        // H = p1 q1 + (p2² + q2²): one real pair, one imaginary pair.
        let q = generate::FormBuilder::new(2)
            .pq(1, 1, 1.0)
            .q2(2, 1.0)
            .p2(2, 1.0)
            .build();
        let report = classify(&standard_system(q), 1e-9).unwrap();
        assert_eq!(report.system_type, SystemType::Mixed);
        assert_eq!(report.multiplicity_structure, None);
    }

    #[test]
    fn quartic_roots_match_general_eigensolver() {
        for (q, _) in [
            (generate::hyperbolic_quadruplet(1.1, 0.6), ()),
            (generate::hyperbolic_real(0.8, 1.7), ()),
            (generate::elliptic_simple(0.9, 1.6), ()),
        ] {
            let sys = standard_system(generate::conjugated(&q, 3, 1.0));
            let report = classify(&sys, 1e-9).unwrap();
            let direct = eigenvalues(sys.matrix(), 1e-9).unwrap();
            // Every directly computed eigenvalue is within 1e-7 of one
            // implied by the quartic roots.
            for (v, _) in direct {
                let matched = report.quadruplets.iter().any(|g| {
                    let r = g.representative;
                    [
                        r,
                        -r,
                        r.conj(),
                        -r.conj(),
                    ]
                    .iter()
                    .any(|cand| (cand - v).norm() < 1e-7)
                });
                assert!(matched, "unmatched {v}");
            }
        }
    }

    #[test]
    fn classify_r8_examples() {
        let sys = standard_system(generate::r8_h1());
        let report = classify(&sys, 1e-9).unwrap();
        assert_eq!(report.system_type, SystemType::Elliptic);
        assert_eq!(report.quadruplets.len(), 4);

        let sys = standard_system(generate::r8_h2());
        let report = classify(&sys, 1e-9).unwrap();
        assert_eq!(report.system_type, SystemType::Mixed);
    }
}
