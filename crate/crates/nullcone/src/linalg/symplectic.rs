use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::{orthonormalize, RealMatrix};
use super::SymplecticStructure;

/// Matrix exponential by scaling-and-squaring with a Taylor core.
///
/// Intended for the desk-scale generators used here; the argument is
/// scaled until its norm is below 1/2, expanded to machine precision,
/// then squared back.
pub fn matrix_exp(a: &RealMatrix) -> RealMatrix {
    assert!(a.is_square());
    let n = a.rows();
    let norm = a.norm_max() * n as f64;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let x = a.scale(0.5_f64.powi(squarings as i32));

    let mut result = RealMatrix::identity(n);
    let mut term = RealMatrix::identity(n);
    for k in 1..=24 {
        term = term.matmul(&x).scale(1.0 / k as f64);
        result = result.add(&term);
        if term.norm_max() < f64::EPSILON * result.norm_max() {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}

/// Random symplectic matrix `T = exp(Ω_std · A)` with `A` symmetric,
/// seeded and deterministic. `magnitude` bounds the spectral scale of
/// the generator (≤ 1 keeps the conditioning mild); `magnitude = 0`
/// returns the identity.
pub fn random_symplectic(dim: usize, seed: u64, magnitude: f64) -> RealMatrix {
    assert!(dim % 2 == 0 && dim > 0, "dimension must be even and positive");
    if magnitude == 0.0 {
        return RealMatrix::identity(dim);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sym = RealMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v: f64 = rng.gen_range(-1.0..1.0);
            sym[(i, j)] = v;
            sym[(j, i)] = v;
        }
    }
    // Normalize so the generator's norm is about `magnitude`.
    let sym = sym.scale(magnitude / dim as f64);
    let omega = SymplecticStructure::standard(dim);
    matrix_exp(&omega.matrix().matmul(&sym))
}

/// Random orthogonal matrix from a seeded Gaussian-ish sample,
/// orthonormalized column by column.
pub fn random_orthogonal(dim: usize, seed: u64) -> RealMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m = RealMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
        if let Ok(q) = orthonormalize(&m) {
            return q;
        }
    }
}
