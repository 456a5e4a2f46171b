use nullcone::generate;
use nullcone::oracle::oracle_census;
use nullcone::linalg::SymplecticStructure;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    let w = SymplecticStructure::standard(4);
    let per_stratum = [15usize, 15, 14, 14, 14, 14, 14];
    for (s_idx, count) in per_stratum.iter().enumerate() {
        for run in 0..*count {
            let mut rng = ChaCha8Rng::seed_from_u64((20_000 + s_idx * 100 + run) as u64);
            let a = rng.gen_range(0.5..2.0);
            let gap = rng.gen_range(0.3..1.5);
            let base = match s_idx {
                0 => generate::elliptic_simple(a, a + gap),
                1 => { let s = if rng.gen_bool(0.5) {1.0} else {-1.0}; generate::elliptic_double_nilpotent(s, a) }
                2 => generate::hyperbolic_quadruplet(a, rng.gen_range(0.5..2.0)),
                3 => generate::hyperbolic_real_double_nilpotent(a),
                4 => generate::hyperbolic_real(a, a + gap),
                5 => generate::elliptic_double_semisimple(a),
                _ => generate::hyperbolic_real(a, a),
            };
            let q = generate::conjugated(&base, (30_000 + s_idx * 100 + run) as u64, 1.0);
            let t0 = Instant::now();
            let report = oracle_census(&q, &w, 10.0, 21).unwrap();
            let dt = t0.elapsed();
            if dt.as_secs_f64() > 0.3 {
                println!("SLOW stratum {s_idx} run {run}: {dt:?} isolated {} curve {}",
                    report.isolated_planes.len(), report.curve_detected);
            }
        }
        println!("stratum {s_idx} done");
    }
}
