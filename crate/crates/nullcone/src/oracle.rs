//! Independent brute-force enumeration of Lagrangian planes.
//!
//! Works directly from the graph-plane picture: in each of the four
//! symplectic charts, a Lagrangian plane is the graph of a symmetric
//! matrix `M = [[α, β], [β, γ]]`, and it lies in the null-cone exactly
//! when the three coefficients of the restricted form vanish. A grid
//! over `(α, β, γ)` seeds damped Gauss-Newton refinement of that
//! 3-equation system; converged solutions are deduplicated, chained to
//! detect one-parameter families, and mapped back to planes. The result
//! cross-checks the circle census along an entirely different route.

use thiserror::Error;

use crate::cone::{restrict_to_chart_graph, ChartId, ConeError, PlaneBasis, Provenance};
use crate::linalg::{LinalgError, LuDecomp, QuadraticForm, RealMatrix, Svd, SymplecticStructure};

#[derive(Debug, Clone, Error)]
pub enum OracleError {
    #[error("oracle requires a 4-dimensional system, found dimension {found}")]
    WrongDimension { found: usize },
    #[error("failed to build a symplectic (Darboux) basis: residual {residual:.3e}")]
    DarbouxFailed { residual: f64 },
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Refinement is declared converged when the max coefficient magnitude
/// drops below this times `‖S‖`.
pub const REFINE_TOL: f64 = 1e-11;

/// Relative band under which a split root pair is identified as one
/// tangency (mirrors the census's tangency band at the default
/// tolerance).
pub const TANGENCY_BAND: f64 = 1e-7;

/// Chains of at least this many solutions are treated as a curve.
pub const CURVE_MIN_POINTS: usize = 8;

/// One converged root of the restricted-coefficient system.
#[derive(Debug, Clone)]
pub struct ChartSolution {
    pub chart: ChartId,
    pub m: [f64; 3],
    pub residual: f64,
    /// Populated by curve detection: solutions chained into a
    /// one-parameter family share a cluster id.
    pub cluster_id: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    /// Isolated planes in original coordinates, deduplicated across
    /// charts.
    pub isolated_planes: Vec<PlaneBasis>,
    /// A one-parameter family of solutions was found.
    pub curve_detected: bool,
    pub per_chart: Vec<(ChartId, Vec<ChartSolution>)>,
    /// Two isolated planes ended up suspiciously close: the refinement
    /// basins overlap and the grid may be too coarse.
    pub insufficient_resolution: bool,
}

/// Scan one chart: evaluate the coefficient norm on the grid, refine
/// from every local minimum, keep converged solutions (deduplicated in
/// `M`-space, lexicographic order).
pub fn chart_scan(
    q: &QuadraticForm,
    w: &SymplecticStructure,
    chart: ChartId,
    bound: f64,
    resolution: usize,
) -> Result<Vec<ChartSolution>, OracleError> {
    let (q_darboux, _) = to_darboux(q, w)?;
    Ok(scan_normalized(&q_darboux, chart, bound, resolution))
}

/// Union over the four charts with curve detection and plane
/// deduplication.
pub fn oracle_census(
    q: &QuadraticForm,
    w: &SymplecticStructure,
    bound: f64,
    resolution: usize,
) -> Result<OracleReport, OracleError> {
    let (q_darboux, lift) = to_darboux(q, w)?;
    let spacing = grid_spacing(bound, resolution);

    let mut per_chart = Vec::with_capacity(4);
    let mut curve_detected = false;
    let mut isolated: Vec<PlaneBasis> = Vec::new();
    for chart in ChartId::ALL {
        let mut solutions = scan_normalized(&q_darboux, chart, bound, resolution);
        densify(&q_darboux, chart, bound, spacing, &mut solutions);
        merge_split_tangencies(&q_darboux, chart, bound, &mut solutions);
        let chains = assign_chains(&mut solutions, 0.5 * spacing);
        curve_detected |= chains.iter().any(|&len| len >= CURVE_MIN_POINTS);

        let mut curve_members = 0usize;
        let mut candidates = Vec::new();
        for sol in &solutions {
            let in_big_chain = sol
                .cluster_id
                .map(|id| chains[id] >= CURVE_MIN_POINTS)
                .unwrap_or(false);
            // Chain size misses sparse stretches of a family (the chart
            // speed of the curve varies); the continuation test settles
            // the stragglers locally.
            if in_big_chain || is_on_curve(&q_darboux, chart, sol) {
                curve_members += 1;
                continue;
            }
            candidates.push(sol.clone());
        }
        curve_detected |= curve_members >= CURVE_MIN_POINTS;

        for sol in &candidates {
            let raw = lift.matmul(&chart.graph_basis(&sol.m));
            let plane =
                PlaneBasis::new(raw, Provenance::Chart { chart, m: sol.m })?;
            if !isolated.iter().any(|p| p.same_span(&plane, 1e-6)) {
                isolated.push(plane);
            }
        }
        per_chart.push((chart, solutions));
    }

    // Basin-overlap warning: distinct survivors that are still nearly
    // the same span.
    let mut insufficient_resolution = false;
    for i in 0..isolated.len() {
        for j in (i + 1)..isolated.len() {
            if isolated[i].same_span(&isolated[j], 1e-4) {
                insufficient_resolution = true;
            }
        }
    }

    Ok(OracleReport { isolated_planes: isolated, curve_detected, per_chart, insufficient_resolution })
}

fn grid_spacing(bound: f64, resolution: usize) -> f64 {
    if resolution > 1 {
        2.0 * bound / (resolution - 1) as f64
    } else {
        2.0 * bound
    }
}

/// Normalize the form and, for a non-standard structure, move to a
/// symplectic basis so the four chart splittings apply. Returns the
/// transformed form and the basis lifting chart coordinates back to the
/// original ones.
fn to_darboux(
    q: &QuadraticForm,
    w: &SymplecticStructure,
) -> Result<(QuadraticForm, RealMatrix), OracleError> {
    if q.dim() != 4 || w.dim() != 4 {
        return Err(OracleError::WrongDimension { found: q.dim().max(w.dim()) });
    }
    let scale = q.matrix().norm_max().max(f64::MIN_POSITIVE);
    let q_unit = q.scaled(1.0 / scale);
    let std = SymplecticStructure::standard(4);
    if w.matrix().max_abs_diff(std.matrix()) == 0.0 {
        return Ok((q_unit, RealMatrix::identity(4)));
    }
    let d = darboux_basis(w)?;
    let transformed = q_unit.congruence(&d)?;
    Ok((transformed, d))
}

/// Skew Gram-Schmidt: columns `[u₁, u₂, v₁, v₂]` with
/// `ω(vᵢ, uᵢ) = +1` and all other pairings zero, so `DᵀΩD = Ω_std`.
fn darboux_basis(w: &SymplecticStructure) -> Result<RealMatrix, OracleError> {
    let dim = w.dim();
    let n = dim / 2;
    let mut pool: Vec<Vec<f64>> = (0..dim)
        .map(|j| (0..dim).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut us: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut vs: Vec<Vec<f64>> = Vec::with_capacity(n);
    while us.len() < n {
        let u = pool.remove(0);
        // Partner with the largest pairing for stability.
        let (best_idx, pairing) = pool
            .iter()
            .enumerate()
            .map(|(i, v)| (i, w.pairing(v, &u)))
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
            .ok_or(OracleError::DarbouxFailed { residual: f64::INFINITY })?;
        if pairing.abs() <= 1e-12 * w.matrix().norm_max() {
            return Err(OracleError::DarbouxFailed { residual: pairing.abs() });
        }
        let v: Vec<f64> = pool.remove(best_idx).iter().map(|x| x / pairing).collect();
        for rest in pool.iter_mut() {
            let a = w.pairing(&u, rest);
            let b = w.pairing(&v, rest);
            for k in 0..dim {
                // ω(u, rest')=0 and ω(v, rest')=0 after this update.
                rest[k] = rest[k] + a * v[k] - b * u[k];
            }
        }
        us.push(u);
        vs.push(v);
    }
    us.extend(vs);
    let d = RealMatrix::from_cols(&us);
    let pulled = d.t().matmul(w.matrix()).matmul(&d);
    let residual = pulled.max_abs_diff(SymplecticStructure::standard(dim).matrix());
    if residual > 1e-9 * w.matrix().norm_max() {
        return Err(OracleError::DarbouxFailed { residual });
    }
    Ok(d)
}

fn coefficients(q: &QuadraticForm, chart: ChartId, m: &[f64; 3]) -> [f64; 3] {
    let (a, b, c) = restrict_to_chart_graph(q, chart, m);
    [a, b, c]
}

fn coeff_norm(f: &[f64; 3]) -> f64 {
    f[0].abs().max(f[1].abs()).max(f[2].abs())
}

fn scan_normalized(
    q: &QuadraticForm,
    chart: ChartId,
    bound: f64,
    resolution: usize,
) -> Vec<ChartSolution> {
    let res = resolution.max(2);
    let spacing = grid_spacing(bound, res);
    let coord = |i: usize| -bound + i as f64 * spacing;

    // Grid of ‖F‖ values.
    let mut values = vec![0.0_f64; res * res * res];
    let idx = |i: usize, j: usize, k: usize| (i * res + j) * res + k;
    for i in 0..res {
        for j in 0..res {
            for k in 0..res {
                let m = [coord(i), coord(j), coord(k)];
                values[idx(i, j, k)] = coeff_norm(&coefficients(q, chart, &m));
            }
        }
    }

    // Seeds: non-strict local minima over the 6-neighborhood, so flat
    // valleys of zeros seed densely.
    let mut solutions: Vec<ChartSolution> = Vec::new();
    for i in 0..res {
        for j in 0..res {
            for k in 0..res {
                let v = values[idx(i, j, k)];
                let mut is_min = true;
                let neighbors: [(isize, isize, isize); 6] = [
                    (-1, 0, 0),
                    (1, 0, 0),
                    (0, -1, 0),
                    (0, 1, 0),
                    (0, 0, -1),
                    (0, 0, 1),
                ];
                for (di, dj, dk) in neighbors {
                    let (ni, nj, nk) =
                        (i as isize + di, j as isize + dj, k as isize + dk);
                    if ni < 0 || nj < 0 || nk < 0 {
                        continue;
                    }
                    let (ni, nj, nk) = (ni as usize, nj as usize, nk as usize);
                    if ni >= res || nj >= res || nk >= res {
                        continue;
                    }
                    if values[idx(ni, nj, nk)] < v {
                        is_min = false;
                        break;
                    }
                }
                if !is_min {
                    continue;
                }
                let seed = [coord(i), coord(j), coord(k)];
                if let Some(sol) = refine(q, chart, seed, bound) {
                    push_dedup(&mut solutions, sol);
                }
            }
        }
    }
    solutions.sort_by(|a, b| a.m.partial_cmp(&b.m).unwrap());
    solutions
}

fn push_dedup(solutions: &mut Vec<ChartSolution>, sol: ChartSolution) {
    let dup = solutions.iter().any(|s| {
        s.m.iter()
            .zip(&sol.m)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max)
            <= 1e-6
    });
    if !dup {
        solutions.push(sol);
    }
}

fn jacobian(q: &QuadraticForm, chart: ChartId, m: &[f64; 3]) -> RealMatrix {
    let mut jac = RealMatrix::zeros(3, 3);
    for col in 0..3 {
        let h = 1e-6 * (1.0 + m[col].abs());
        let mut mp = *m;
        let mut mm = *m;
        mp[col] += h;
        mm[col] -= h;
        let fp = coefficients(q, chart, &mp);
        let fm = coefficients(q, chart, &mm);
        for row in 0..3 {
            jac[(row, col)] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    jac
}

/// Damped Gauss-Newton sweeps with a small Tikhonov shift, so
/// tangential (rank-deficient) roots are still reachable. Returns the
/// best point found and its residual.
fn lm_steps(q: &QuadraticForm, chart: ChartId, start: [f64; 3], steps: usize) -> ([f64; 3], f64) {
    let mut m = start;
    let mut f = coefficients(q, chart, &m);
    let mut best = coeff_norm(&f);
    for _step in 0..steps {
        if best == 0.0 {
            break;
        }
        let jac = jacobian(q, chart, &m);
        // (JᵀJ + μI)Δ = -JᵀF.
        let jtj = jac.t().matmul(&jac);
        let mu = 1e-12 * jtj.norm_max().max(1e-300);
        let mut lhs = jtj.clone();
        for i in 0..3 {
            lhs[(i, i)] += mu;
        }
        let jtf = jac.t().mul_vec(&f);
        let delta = match LuDecomp::new(&lhs) {
            Ok(lu) => lu.solve_vec(&jtf),
            Err(_) => break,
        };
        // Backtracking line search.
        let mut improved = false;
        let mut lambda = 1.0;
        for _bt in 0..8 {
            let trial = [
                m[0] - lambda * delta[0],
                m[1] - lambda * delta[1],
                m[2] - lambda * delta[2],
            ];
            let tf = coefficients(q, chart, &trial);
            let tn = coeff_norm(&tf);
            if tn < best {
                m = trial;
                f = tf;
                best = tn;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (m, best)
}

/// At a tangential root the coefficient map vanishes to second order
/// along the Jacobian's null direction, and Gauss-Newton leaves an
/// O(√residual) error there. Golden-section minimization along that
/// direction pins the root down to the arithmetic floor.
fn polish_deficient_direction(
    q: &QuadraticForm,
    chart: ChartId,
    m: [f64; 3],
) -> [f64; 3] {
    let jac = jacobian(q, chart, &m);
    let svd = Svd::compute(&jac);
    if svd.sigma[0] <= 0.0 || svd.sigma[2] > 1e-3 * svd.sigma[0] {
        return m;
    }
    let v = svd.v.col(2);
    let phi = |t: f64| -> f64 {
        let p = [m[0] + t * v[0], m[1] + t * v[1], m[2] + t * v[2]];
        let f = coefficients(q, chart, &p);
        f[0] * f[0] + f[1] * f[1] + f[2] * f[2]
    };
    let scale = 1.0 + m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let (mut lo, mut hi) = (-0.02 * scale, 0.02 * scale);
    let inv_phi_ratio = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut t1 = hi - inv_phi_ratio * (hi - lo);
    let mut t2 = lo + inv_phi_ratio * (hi - lo);
    let (mut f1, mut f2) = (phi(t1), phi(t2));
    for _ in 0..70 {
        if f1 < f2 {
            hi = t2;
            t2 = t1;
            f2 = f1;
            t1 = hi - inv_phi_ratio * (hi - lo);
            f1 = phi(t1);
        } else {
            lo = t1;
            t1 = t2;
            f1 = f2;
            t2 = lo + inv_phi_ratio * (hi - lo);
            f2 = phi(t2);
        }
    }
    let t = 0.5 * (lo + hi);
    if phi(t) <= phi(0.0) {
        [m[0] + t * v[0], m[1] + t * v[1], m[2] + t * v[2]]
    } else {
        m
    }
}

fn refine(
    q: &QuadraticForm,
    chart: ChartId,
    seed: [f64; 3],
    bound: f64,
) -> Option<ChartSolution> {
    let (m, best) = lm_steps(q, chart, seed, 60);
    let scale = q.matrix().norm_max().max(f64::MIN_POSITIVE);
    if best > REFINE_TOL * scale {
        return None;
    }
    // Re-tighten the regular directions after the tangential polish.
    let polished = polish_deficient_direction(q, chart, m);
    let (m, best) = lm_steps(q, chart, polished, 5);
    let in_bounds = m.iter().all(|x| x.abs() <= 1.5 * bound + 1.0);
    if best <= REFINE_TOL * scale && in_bounds {
        Some(ChartSolution { chart, m, residual: best, cluster_id: None })
    } else {
        None
    }
}

/// Halve the gaps along suspected curves: refine from midpoints of
/// nearby solution pairs until the chain is dense.
fn densify(
    q: &QuadraticForm,
    chart: ChartId,
    bound: f64,
    spacing: f64,
    solutions: &mut Vec<ChartSolution>,
) {
    for _pass in 0..3 {
        let snapshot: Vec<[f64; 3]> = solutions.iter().map(|s| s.m).collect();
        let mut added = false;
        for i in 0..snapshot.len() {
            for j in (i + 1)..snapshot.len() {
                let dist = snapshot[i]
                    .iter()
                    .zip(&snapshot[j])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0_f64, f64::max);
                if dist <= 1e-4 || dist > 1.1 * spacing {
                    continue;
                }
                let mid = [
                    0.5 * (snapshot[i][0] + snapshot[j][0]),
                    0.5 * (snapshot[i][1] + snapshot[j][1]),
                    0.5 * (snapshot[i][2] + snapshot[j][2]),
                ];
                if let Some(sol) = refine(q, chart, mid, bound) {
                    let before = solutions.len();
                    push_dedup(solutions, sol);
                    added |= solutions.len() > before;
                }
            }
        }
        if !added {
            break;
        }
    }
    solutions.sort_by(|a, b| a.m.partial_cmp(&b.m).unwrap());
}

/// Collapse split tangency pairs. A system that is a rounding error off
/// the non-semisimple stratum has its double root split into two simple
/// roots a few 1e-5 apart; the census's tangency band identifies them,
/// so the oracle must too. Two nearby solutions are merged exactly when
/// their midpoint still refines below the convergence gate (true for a
/// split double root, false for genuinely distinct planes).
fn merge_split_tangencies(
    q: &QuadraticForm,
    chart: ChartId,
    _bound: f64,
    solutions: &mut Vec<ChartSolution>,
) {
    let scale = q.matrix().norm_max().max(f64::MIN_POSITIVE);
    let m_dist = |a: &[f64; 3], b: &[f64; 3]| {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0_f64, f64::max)
    };
    let m_scale =
        |a: &[f64; 3]| 1.0 + a.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));

    // Stage 1: each well of a flat (tangential) root accumulates several
    // stall points a few 1e-6 apart; keep only the lowest-residual
    // member of every such micro-cluster.
    'collapse: loop {
        for i in 0..solutions.len() {
            for j in (i + 1)..solutions.len() {
                if m_dist(&solutions[i].m, &solutions[j].m) <= 1e-5 {
                    let keep = if solutions[i].residual <= solutions[j].residual { i } else { j };
                    let kept = solutions[keep].clone();
                    solutions.remove(j);
                    solutions[i] = kept;
                    continue 'collapse;
                }
            }
        }
        break;
    }

    // Stage 2: a pair of wells this close is one double root split by
    // the input's distance from the non-semisimple stratum; the
    // midpoint is the tangency center. Gate on the midpoint residual
    // staying under the tangency band (genuinely distinct planes fail
    // it).
    'merge: loop {
        for i in 0..solutions.len() {
            for j in (i + 1)..solutions.len() {
                let (mi, mj) = (solutions[i].m, solutions[j].m);
                let radius = 1e-3 * m_scale(&mi);
                if m_dist(&mi, &mj) > radius {
                    continue;
                }
                let mid = [
                    0.5 * (mi[0] + mj[0]),
                    0.5 * (mi[1] + mj[1]),
                    0.5 * (mi[2] + mj[2]),
                ];
                let residual = coeff_norm(&coefficients(q, chart, &mid));
                if residual <= TANGENCY_BAND * scale {
                    solutions.remove(j);
                    solutions[i] =
                        ChartSolution { chart, m: mid, residual, cluster_id: None };
                    continue 'merge;
                }
            }
        }
        break;
    }
    solutions.sort_by(|a, b| a.m.partial_cmp(&b.m).unwrap());
}

/// Local continuation test: a solution sits on a one-parameter family
/// iff stepping along the Jacobian's null direction and re-refining
/// lands on a distinct converged solution. Isolated roots (including
/// tangencies, whose wells are only a few 1e-5 wide) fall back to where
/// they started.
fn is_on_curve(q: &QuadraticForm, chart: ChartId, sol: &ChartSolution) -> bool {
    let jac = jacobian(q, chart, &sol.m);
    let svd = Svd::compute(&jac);
    if svd.sigma[0] <= 0.0 || svd.sigma[2] > 1e-3 * svd.sigma[0] {
        return false;
    }
    let v = svd.v.col(2);
    let scale = q.matrix().norm_max().max(f64::MIN_POSITIVE);
    let step = 1e-2;
    for dir in [1.0, -1.0] {
        let start = [
            sol.m[0] + dir * step * v[0],
            sol.m[1] + dir * step * v[1],
            sol.m[2] + dir * step * v[2],
        ];
        let (refined, residual) = lm_steps(q, chart, start, 15);
        let dist = refined
            .iter()
            .zip(&sol.m)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        if residual <= REFINE_TOL * scale && dist >= 0.5 * step {
            return true;
        }
    }
    false
}

/// Single-linkage chaining in `(α, β, γ)`: solutions within `gap` join a
/// cluster. Assigns cluster ids and returns each cluster's size.
fn assign_chains(solutions: &mut [ChartSolution], gap: f64) -> Vec<usize> {
    let n = solutions.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = solutions[i]
                .m
                .iter()
                .zip(&solutions[j].m)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max);
            if dist <= gap {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut cluster_of_root: std::collections::BTreeMap<usize, usize> = Default::default();
    let mut sizes: Vec<usize> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        let id = *cluster_of_root.entry(root).or_insert_with(|| {
            sizes.push(0);
            sizes.len() - 1
        });
        sizes[id] += 1;
        solutions[i].cluster_id = Some(id);
    }
    sizes
}
