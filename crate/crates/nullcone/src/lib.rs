//! Classification of linear Hamiltonian systems `(S, Ω)` on `R^{2n}` and
//! enumeration of the Lagrangian planes contained in the null-cone
//! `H⁻¹(0)` of the quadratic Hamiltonian `H(x) = xᵀSx`.
//!
//! The library is organised around the pipeline
//!
//! 1. [`spectrum`] — build `L = Ω⁻¹S` and classify the system as
//!    elliptic / hyperbolic / mixed, with the exact multiplicity
//!    structure on `R⁴`;
//! 2. [`cone`] — adapted bases for signature-zero forms, the two-circle
//!    parametrization of null-cone planes, and the symplectic chart
//!    atlas for graph planes;
//! 3. [`census`] — the plane count on `R⁴`: restrict `ω` to each circle
//!    of null-cone planes and solve the resulting affine trigonometric
//!    equation, then verify every plane (null-cone membership,
//!    isotropy, flow invariance, dynamics label);
//! 4. [`decompose`] — symplectic eigenspace splitting for `2n > 4`,
//!    per-block counts `δ(j)`, the product count, and explicit direct-sum
//!    planes;
//! 5. [`oracle`] — an independent brute-force check that enumerates the
//!    same planes by grid search plus Newton refinement over symmetric
//!    graph matrices in four symplectic charts.
//!
//! Coordinates are ordered `(q₁,…,q_n, p₁,…,p_n)` and the standard
//! symplectic matrix is `Ω_std = [[0, −I],[I, 0]]`, so that
//! `ω(e_{p_i}, e_{q_i}) = +1`. The dynamics is `ẋ = Lx` with
//! `L = Ω⁻¹S` taken literally; all counting and type results are
//! invariant under the overall factor-two rescaling this convention
//! implies.

pub mod census;
pub mod cone;
pub mod decompose;
pub mod files;
pub mod generate;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod spectrum;

/// Default relative tolerance used across the library unless overridden.
pub const DEFAULT_TOL: f64 = 1e-9;
