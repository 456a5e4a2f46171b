//! Constructors for the classification corpus: the normal forms of every
//! spectral stratum on `R⁴` plus the higher-dimensional block examples.
//!
//! Coordinates are `(q₁,…,q_n, p₁,…,p_n)`; every builder returns the
//! symmetric matrix of `H(x) = xᵀSx`, to be paired with the standard
//! symplectic structure.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::linalg::{random_symplectic, QuadraticForm, RealMatrix};

/// Incremental builder for quadratic Hamiltonians in `(q, p)` coordinates.
pub struct FormBuilder {
    n: usize,
    m: RealMatrix,
}

impl FormBuilder {
    pub fn new(n_pairs: usize) -> Self {
        Self { n: n_pairs, m: RealMatrix::zeros(2 * n_pairs, 2 * n_pairs) }
    }

    fn q(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.n);
        i - 1
    }

    fn p(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.n);
        self.n + i - 1
    }

    /// Add `c · qᵢ²`.
    pub fn q2(mut self, i: usize, c: f64) -> Self {
        let qi = self.q(i);
        self.m[(qi, qi)] += c;
        self
    }

    /// Add `c · pᵢ²`.
    pub fn p2(mut self, i: usize, c: f64) -> Self {
        let pi = self.p(i);
        self.m[(pi, pi)] += c;
        self
    }

    /// Add `c · pᵢ qⱼ` (split across the symmetric off-diagonal pair).
    pub fn pq(mut self, i: usize, j: usize, c: f64) -> Self {
        let (pi, qj) = (self.p(i), self.q(j));
        self.m[(pi, qj)] += 0.5 * c;
        self.m[(qj, pi)] += 0.5 * c;
        self
    }

    pub fn build(self) -> QuadraticForm {
        QuadraticForm::new(self.m).expect("builder produces valid symmetric matrices")
    }
}

/// `H = λ₁(p₁²+q₁²) − λ₂(p₂²+q₂²)`: elliptic, eigenvalues `±iλ₁, ±iλ₂`.
pub fn elliptic_simple(lambda1: f64, lambda2: f64) -> QuadraticForm {
    FormBuilder::new(2)
        .q2(1, lambda1)
        .p2(1, lambda1)
        .q2(2, -lambda2)
        .p2(2, -lambda2)
        .build()
}

/// Equal-frequency semisimple elliptic form `λ(p₁²+q₁²) − λ(p₂²+q₂²)`.
pub fn elliptic_double_semisimple(lambda: f64) -> QuadraticForm {
    elliptic_simple(lambda, lambda)
}

/// `H = ±½(q₁²+q₂²) + λ(p₂q₁ − p₁q₂)`: elliptic with double eigenvalues
/// `±iλ/2` and a nonzero nilpotent part. The two signs are symplectically
/// inequivalent.
pub fn elliptic_double_nilpotent(sign: f64, lambda: f64) -> QuadraticForm {
    let s = if sign >= 0.0 { 0.5 } else { -0.5 };
    FormBuilder::new(2)
        .q2(1, s)
        .q2(2, s)
        .pq(2, 1, lambda)
        .pq(1, 2, -lambda)
        .build()
}

/// `H = κ(p₁q₁+p₂q₂) + λ(p₁q₂ − p₂q₁)`: hyperbolic with a full
/// eigenvalue quadruplet `(±κ±iλ)/2`.
pub fn hyperbolic_quadruplet(kappa: f64, lambda: f64) -> QuadraticForm {
    FormBuilder::new(2)
        .pq(1, 1, kappa)
        .pq(2, 2, kappa)
        .pq(1, 2, lambda)
        .pq(2, 1, -lambda)
        .build()
}

/// `H = λ₁p₁q₁ + λ₂p₂q₂`: hyperbolic with simple real eigenvalues when
/// `λ₁ ≠ λ₂`, double semisimple when equal.
pub fn hyperbolic_real(lambda1: f64, lambda2: f64) -> QuadraticForm {
    FormBuilder::new(2).pq(1, 1, lambda1).pq(2, 2, lambda2).build()
}

/// `H = λ(p₁q₁+p₂q₂) + p₁q₂`: hyperbolic, double real eigenvalues
/// `±λ/2` with a nonzero nilpotent part.
pub fn hyperbolic_real_double_nilpotent(lambda: f64) -> QuadraticForm {
    FormBuilder::new(2).pq(1, 1, lambda).pq(2, 2, lambda).pq(1, 2, 1.0).build()
}

/// Elliptic `R⁸` example: four distinct imaginary pairs, signature zero.
pub fn r8_h1() -> QuadraticForm {
    let coeffs = [1.0, -2.0, 3.0, -4.0];
    let mut b = FormBuilder::new(4);
    for (i, &c) in coeffs.iter().enumerate() {
        b = b.q2(i + 1, c).p2(i + 1, c);
    }
    b.build()
}

/// Mixed-spectrum `R⁸` example: two imaginary pairs and two real pairs,
/// signature zero.
pub fn r8_h2() -> QuadraticForm {
    FormBuilder::new(4)
        .q2(1, 1.0)
        .p2(1, 1.0)
        .q2(2, -2.0)
        .p2(2, -2.0)
        .pq(3, 3, 1.0)
        .pq(4, 4, 2.0)
        .build()
}

/// `R⁸` system with a non-semisimple real 4-dim block and a quadruplet
/// 4-dim block; the blockwise plane counts multiply to six.
pub fn r8_product_6(lambda: f64, kappa: f64, mu: f64) -> QuadraticForm {
    FormBuilder::new(4)
        .pq(1, 1, lambda)
        .pq(2, 2, lambda)
        .pq(1, 2, 1.0)
        .pq(3, 3, kappa)
        .pq(4, 4, kappa)
        .pq(3, 4, mu)
        .pq(4, 3, -mu)
        .build()
}

/// Conjugate a form by a seeded random symplectic matrix: `S ↦ TᵀST`.
pub fn conjugated(q: &QuadraticForm, seed: u64, magnitude: f64) -> QuadraticForm {
    let t = random_symplectic(q.dim(), seed, magnitude);
    q.congruence(&t).expect("congruence preserves validity")
}

/// Named corpus cases exposed through the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseName {
    EllipticSimple,
    EllipticDoubleSemisimple,
    EllipticDoubleNilpotent,
    HyperbolicQuadruplet,
    HyperbolicRealSimple,
    HyperbolicRealDoubleSemisimple,
    HyperbolicRealDoubleNilpotent,
    R8H1,
    R8H2,
    R8Product6,
}

impl CaseName {
    pub const ALL: [CaseName; 10] = [
        CaseName::EllipticSimple,
        CaseName::EllipticDoubleSemisimple,
        CaseName::EllipticDoubleNilpotent,
        CaseName::HyperbolicQuadruplet,
        CaseName::HyperbolicRealSimple,
        CaseName::HyperbolicRealDoubleSemisimple,
        CaseName::HyperbolicRealDoubleNilpotent,
        CaseName::R8H1,
        CaseName::R8H2,
        CaseName::R8Product6,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseName::EllipticSimple => "elliptic-simple",
            CaseName::EllipticDoubleSemisimple => "elliptic-double-ss",
            CaseName::EllipticDoubleNilpotent => "elliptic-double-nilpotent",
            CaseName::HyperbolicQuadruplet => "hyperbolic-quadruplet",
            CaseName::HyperbolicRealSimple => "hyperbolic-real-simple",
            CaseName::HyperbolicRealDoubleSemisimple => "hyperbolic-real-double-ss",
            CaseName::HyperbolicRealDoubleNilpotent => "hyperbolic-real-double-nilpotent",
            CaseName::R8H1 => "r8-h1",
            CaseName::R8H2 => "r8-h2",
            CaseName::R8Product6 => "r8-product-6",
        }
    }

    /// Parameter names and default values accepted by [`CaseName::build`].
    pub fn default_params(&self) -> BTreeMap<&'static str, f64> {
        let mut p = BTreeMap::new();
        match self {
            CaseName::EllipticSimple => {
                p.insert("lambda1", 1.0);
                p.insert("lambda2", 2.0);
            }
            CaseName::EllipticDoubleSemisimple => {
                p.insert("lambda", 0.5);
            }
            CaseName::EllipticDoubleNilpotent => {
                p.insert("sign", 1.0);
                p.insert("lambda", 1.0);
            }
            CaseName::HyperbolicQuadruplet => {
                p.insert("kappa", 1.0);
                p.insert("lambda", 1.0);
            }
            CaseName::HyperbolicRealSimple => {
                p.insert("lambda1", 1.0);
                p.insert("lambda2", 2.0);
            }
            CaseName::HyperbolicRealDoubleSemisimple => {
                p.insert("lambda", 1.0);
            }
            CaseName::HyperbolicRealDoubleNilpotent => {
                p.insert("lambda", 1.0);
            }
            CaseName::R8H1 | CaseName::R8H2 => {}
            CaseName::R8Product6 => {
                p.insert("lambda", 1.0);
                p.insert("kappa", 1.0);
                p.insert("mu", 1.0);
            }
        }
        p
    }

    /// Build the form, overriding defaults with the provided parameters.
    /// Unknown parameter names are rejected.
    pub fn build(&self, overrides: &BTreeMap<String, f64>) -> Result<QuadraticForm, String> {
        let mut params: BTreeMap<String, f64> = self
            .default_params()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        for (k, v) in overrides {
            if !params.contains_key(k) {
                return Err(format!(
                    "case {} does not accept parameter `{k}` (accepted: {})",
                    self.as_str(),
                    params.keys().cloned().collect::<Vec<_>>().join(", ")
                ));
            }
            params.insert(k.clone(), *v);
        }
        let get = |k: &str| params[k];
        Ok(match self {
            CaseName::EllipticSimple => elliptic_simple(get("lambda1"), get("lambda2")),
            CaseName::EllipticDoubleSemisimple => elliptic_double_semisimple(get("lambda")),
            CaseName::EllipticDoubleNilpotent => {
                elliptic_double_nilpotent(get("sign"), get("lambda"))
            }
            CaseName::HyperbolicQuadruplet => hyperbolic_quadruplet(get("kappa"), get("lambda")),
            CaseName::HyperbolicRealSimple => hyperbolic_real(get("lambda1"), get("lambda2")),
            CaseName::HyperbolicRealDoubleSemisimple => {
                hyperbolic_real(get("lambda"), get("lambda"))
            }
            CaseName::HyperbolicRealDoubleNilpotent => {
                hyperbolic_real_double_nilpotent(get("lambda"))
            }
            CaseName::R8H1 => r8_h1(),
            CaseName::R8H2 => r8_h2(),
            CaseName::R8Product6 => r8_product_6(get("lambda"), get("kappa"), get("mu")),
        })
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseName::ALL
            .iter()
            .find(|c| c.as_str() == s)
            .copied()
            .ok_or_else(|| {
                format!(
                    "unknown case `{s}`; expected one of: {}",
                    CaseName::ALL.map(|c| c.as_str()).join(", ")
                )
            })
    }
}
