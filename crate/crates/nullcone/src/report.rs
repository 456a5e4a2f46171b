//! Machine-readable analysis reports.
//!
//! Reports are plain serde structures rendered to pretty JSON. All
//! floating-point values are rounded to 12 significant digits before
//! serialization, so identical inputs and tolerances reproduce the file
//! byte for byte.

use serde::Serialize;

use crate::census::{CensusResult, PlaneCount, RootKind, VerificationReport};
use crate::cone::{CircleComponent, PlaneBasis, Provenance};
use crate::decompose::{Decomposition, DeltaValue};
use crate::oracle::OracleReport;
use crate::spectrum::SpectrumReport;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Round to 12 significant digits through the decimal representation;
/// the printed form is then the shortest round-trip of the rounded
/// value.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_matrix(rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    rows.into_iter()
        .map(|r| r.into_iter().map(round_sig).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    pub tool_version: String,
    pub tolerances: Tolerances,
    pub input: InputInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decompose: Option<DecomposeSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
}

impl ReportFile {
    pub fn new(tol: f64, name: Option<String>, dim: usize) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            tolerances: Tolerances { tol: round_sig(tol), tangency_band: round_sig(100.0 * tol) },
            input: InputInfo { name, dim },
            spectrum: None,
            census: None,
            decompose: None,
            oracle: None,
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports are serializable");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub tol: f64,
    pub tangency_band: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadrupletEntry {
    pub re: f64,
    pub im: f64,
    pub members: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuarticEntry {
    pub c: f64,
    pub d: f64,
    pub disc: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSection {
    pub system_type: crate::spectrum::SystemType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity_structure: Option<crate::spectrum::MultiplicityStructure>,
    pub quadruplets: Vec<QuadrupletEntry>,
    pub condition_flags: Vec<crate::spectrum::ConditionFlag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quartic: Option<QuarticEntry>,
}

impl SpectrumSection {
    pub fn from_report(report: &SpectrumReport) -> Self {
        Self {
            system_type: report.system_type,
            multiplicity_structure: report.multiplicity_structure,
            quadruplets: report
                .quadruplets
                .iter()
                .map(|g| QuadrupletEntry {
                    re: round_sig(g.representative.re),
                    im: round_sig(g.representative.im),
                    members: g.members,
                    multiplicity: g.multiplicity,
                })
                .collect(),
            condition_flags: report.condition_flags.clone(),
            quartic: report.quartic.map(|q| QuarticEntry {
                c: round_sig(q.c),
                d: round_sig(q.d),
                disc: round_sig(q.disc),
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CountSection {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl CountSection {
    pub fn from_count(count: PlaneCount) -> Self {
        match count {
            PlaneCount::Finite(k) => Self { kind: "finite", count: Some(k) },
            PlaneCount::Infinite => Self { kind: "infinite", count: None },
            PlaneCount::InfinitePlusTwo => Self { kind: "infinite_plus_two", count: None },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CircleSection {
    pub kind: &'static str,
    pub thetas: Vec<f64>,
    pub tangency: bool,
    pub ambiguous: bool,
}

impl CircleSection {
    fn from_outcome(outcome: &crate::census::CircleOutcome) -> Self {
        let kind = match outcome.kind {
            RootKind::NoRoots => "no_roots",
            RootKind::OneRoot { .. } => "one_root",
            RootKind::TwoRoots { .. } => "two_roots",
            RootKind::AllLagrangian => "all_lagrangian",
        };
        Self {
            kind,
            thetas: outcome.thetas().into_iter().map(round_sig).collect(),
            tangency: outcome.tangency_flag,
            ambiguous: outcome.ambiguous,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProvenanceSection {
    Circle { component: CircleComponent, theta: f64 },
    Chart { chart: crate::cone::ChartId, m: [f64; 3] },
    Eigenline { eigenvalue: f64 },
    BlockSum { parts: Vec<ProvenanceSection> },
}

impl ProvenanceSection {
    fn from_provenance(p: &Provenance) -> Self {
        match p {
            Provenance::Circle { component, theta } => ProvenanceSection::Circle {
                component: *component,
                theta: round_sig(*theta),
            },
            Provenance::Chart { chart, m } => ProvenanceSection::Chart {
                chart: *chart,
                m: [round_sig(m[0]), round_sig(m[1]), round_sig(m[2])],
            },
            Provenance::Eigenline { eigenvalue } => {
                ProvenanceSection::Eigenline { eigenvalue: round_sig(*eigenvalue) }
            }
            Provenance::BlockSum { parts } => ProvenanceSection::BlockSum {
                parts: parts.iter().map(Self::from_provenance).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationSection {
    pub max_h_on_plane: f64,
    pub max_omega_on_plane: f64,
    pub invariance_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<crate::census::DynamicsLabel>,
}

impl VerificationSection {
    fn from_report(v: &VerificationReport) -> Self {
        Self {
            max_h_on_plane: round_sig(v.max_h_on_plane),
            max_omega_on_plane: round_sig(v.max_omega_on_plane),
            invariance_defect: round_sig(v.invariance_defect),
            dynamics: v.dynamics_label,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaneSection {
    pub provenance: ProvenanceSection,
    /// Column-orthonormalized basis, one row per ambient coordinate.
    pub basis: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationSection>,
}

impl PlaneSection {
    pub fn from_plane(plane: &PlaneBasis, verification: Option<&VerificationReport>) -> Self {
        Self {
            provenance: ProvenanceSection::from_provenance(plane.provenance()),
            basis: round_matrix(plane.basis().to_nested()),
            verification: verification.map(VerificationSection::from_report),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<crate::spectrum::MultiplicityStructure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<CountSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusSection {
    pub inertia: [usize; 3],
    pub rotation: CircleSection,
    pub reflection: CircleSection,
    pub aggregate: CountSection,
    pub planes: Vec<PlaneSection>,
    pub tangency_ambiguity: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheckSection>,
}

impl CensusSection {
    pub fn from_result(result: &CensusResult) -> Self {
        Self {
            inertia: [result.inertia.n_plus, result.inertia.n_minus, result.inertia.n_zero],
            rotation: CircleSection::from_outcome(&result.rotation),
            reflection: CircleSection::from_outcome(&result.reflection),
            aggregate: CountSection::from_count(result.aggregate),
            planes: result
                .planes
                .iter()
                .zip(result.verification.iter().map(Some).chain(std::iter::repeat(None)))
                .map(|(p, v)| PlaneSection::from_plane(p, v))
                .collect(),
            tangency_ambiguity: result.tangency_ambiguity,
            note: result.note.clone(),
            cross_check: result.cross_check.map(|c| CrossCheckSection {
                structure: c.structure,
                expected: c.expected.map(CountSection::from_count),
                consistent: c.consistent,
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockSection {
    pub dim: usize,
    pub representative: QuadrupletEntry,
    pub delta: String,
    pub inertia: [usize; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeSection {
    pub blocks: Vec<BlockSection>,
    pub count: CountSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planes: Option<Vec<PlaneSection>>,
    pub enumerable: bool,
}

impl DecomposeSection {
    pub fn from_decomposition(d: &Decomposition, tol: f64) -> Self {
        let blocks = d
            .blocks
            .iter()
            .zip(&d.deltas)
            .map(|(block, delta)| {
                let counts = crate::linalg::inertia(&block.restricted_q, tol);
                BlockSection {
                    dim: block.dim(),
                    representative: QuadrupletEntry {
                        re: round_sig(block.quadruplet.representative.re),
                        im: round_sig(block.quadruplet.representative.im),
                        members: block.quadruplet.members,
                        multiplicity: block.quadruplet.multiplicity,
                    },
                    delta: match delta {
                        DeltaValue::Finite(k) => k.to_string(),
                        DeltaValue::Unbounded(flavor) => format!("unbounded ({flavor})"),
                    },
                    inertia: [counts.n_plus, counts.n_minus, counts.n_zero],
                }
            })
            .collect();
        Self {
            blocks,
            count: CountSection::from_count(d.count),
            planes: d.planes.as_ref().map(|ps| {
                ps.iter()
                    .map(|(p, v)| PlaneSection::from_plane(p, Some(v)))
                    .collect()
            }),
            enumerable: d.planes.is_some(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChartSolutionSection {
    pub m: [f64; 3],
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cluster_id: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChartScanSection {
    pub chart: crate::cone::ChartId,
    pub solutions: Vec<ChartSolutionSection>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AgreementSection {
    pub census_count: CountSection,
    pub oracle_isolated: usize,
    pub curve_detected: bool,
    pub counts_match: bool,
    pub planes_match: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSection {
    pub isolated_planes: Vec<PlaneSection>,
    pub curve_detected: bool,
    pub insufficient_resolution: bool,
    pub per_chart: Vec<ChartScanSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<AgreementSection>,
}

impl OracleSection {
    pub fn from_report(report: &OracleReport, agreement: Option<AgreementSection>) -> Self {
        Self {
            isolated_planes: report
                .isolated_planes
                .iter()
                .map(|p| PlaneSection::from_plane(p, None))
                .collect(),
            curve_detected: report.curve_detected,
            insufficient_resolution: report.insufficient_resolution,
            per_chart: report
                .per_chart
                .iter()
                .map(|(chart, sols)| ChartScanSection {
                    chart: *chart,
                    solutions: sols
                        .iter()
                        .map(|s| ChartSolutionSection {
                            m: [round_sig(s.m[0]), round_sig(s.m[1]), round_sig(s.m[2])],
                            residual: round_sig(s.residual),
                            cluster_id: s.cluster_id,
                        })
                        .collect(),
                })
                .collect(),
            agreement,
        }
    }
}

/// Compare an oracle run against a census result: counts, curve flag
/// and pairwise plane matching at `sin θ ≤ 1e-6`.
pub fn oracle_agreement(census: &CensusResult, oracle: &OracleReport) -> AgreementSection {
    let census_isolated = census.planes.len();
    let counts_match = match census.aggregate {
        PlaneCount::Finite(k) => {
            oracle.isolated_planes.len() == k && !oracle.curve_detected
        }
        PlaneCount::Infinite => oracle.curve_detected && oracle.isolated_planes.is_empty(),
        PlaneCount::InfinitePlusTwo => {
            oracle.curve_detected && oracle.isolated_planes.len() == 2
        }
    };
    let planes_match = census_isolated == oracle.isolated_planes.len()
        && census.planes.iter().all(|cp| {
            oracle
                .isolated_planes
                .iter()
                .any(|op| cp.same_span(op, 1e-6))
        });
    AgreementSection {
        census_count: CountSection::from_count(census.aggregate),
        oracle_isolated: oracle.isolated_planes.len(),
        curve_detected: oracle.curve_detected,
        counts_match,
        planes_match,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::census;
    use crate::generate;
    use crate::linalg::SymplecticStructure;
    use crate::oracle::oracle_census;
    use crate::spectrum::{build_system, classify};

    #[test]
    fn round_sig_is_stable() {
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(1.0), 1.0);
        assert_eq!(round_sig(std::f64::consts::PI), 3.14159265359);
        assert_eq!(round_sig(-1.2345678901234567e-7), -1.23456789012e-7);
    }

    #[test]
    fn report_is_deterministic() {
        let q = generate::hyperbolic_quadruplet(1.0, 1.0);
        let w = SymplecticStructure::standard(4);
        let build = || {
            let sys = build_system(q.clone(), w.clone()).unwrap();
            let mut report = ReportFile::new(1e-9, Some("quadruplet".into()), 4);
            report.spectrum =
                Some(SpectrumSection::from_report(&classify(&sys, 1e-9).unwrap()));
            let result = census(&q, &w, 1e-9).unwrap();
            let oracle = oracle_census(&q, &w, 10.0, 21).unwrap();
            let agreement = oracle_agreement(&result, &oracle);
            report.census = Some(CensusSection::from_result(&result));
            report.oracle = Some(OracleSection::from_report(&oracle, Some(agreement)));
            report.to_json_string()
        };
        let first = build();
        let second = build();
        assert_eq!(first, second);
        assert!(first.contains("\"aggregate\""));
        assert!(first.contains("\"counts_match\": true"));
    }

    #[test]
    fn agreement_detects_mismatch() {
        let q = generate::hyperbolic_real(1.0, 2.0);
        let w = SymplecticStructure::standard(4);
        let result = census(&q, &w, 1e-9).unwrap();
        let mut oracle = oracle_census(&q, &w, 10.0, 21).unwrap();
        let agreement = oracle_agreement(&result, &oracle);
        assert!(agreement.counts_match && agreement.planes_match);
        oracle.isolated_planes.pop();
        let broken = oracle_agreement(&result, &oracle);
        assert!(!broken.counts_match);
        assert!(!broken.planes_match);
    }
}
