use nullcone::generate;
use nullcone::oracle::oracle_census;
use nullcone::linalg::SymplecticStructure;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    let w = SymplecticStructure::standard(4);
    for (name, s_idx) in [("elliptic-double-ss", 5usize), ("real-double-ss", 6), ("quadruplet", 2)] {
        let mut rng = ChaCha8Rng::seed_from_u64((20_000 + s_idx * 100) as u64);
        let a = rng.gen_range(0.5..2.0);
        let base = match s_idx {
            5 => generate::elliptic_double_semisimple(a),
            6 => generate::hyperbolic_real(a, a),
            _ => generate::hyperbolic_quadruplet(a, rng.gen_range(0.5..2.0)),
        };
        let q = generate::conjugated(&base, (30_000 + s_idx * 100) as u64, 1.0);
        let t0 = Instant::now();
        let report = oracle_census(&q, &w, 10.0, 21).unwrap();
        println!("{name}: {:?} isolated {} curve {}", t0.elapsed(), report.isolated_planes.len(), report.curve_detected);
    }
}
