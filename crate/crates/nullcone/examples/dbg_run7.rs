use nullcone::generate;
use nullcone::census::census;
use nullcone::oracle::oracle_census;
use nullcone::linalg::{SymplecticStructure, principal_angle_sin};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let s_idx = 3usize; let run = 7usize;
    let mut rng = ChaCha8Rng::seed_from_u64((20_000 + s_idx * 100 + run) as u64);
    let a = rng.gen_range(0.5..2.0);
    let _gap: f64 = rng.gen_range(0.3..1.5);
    let base = generate::hyperbolic_real_double_nilpotent(a);
    let q = generate::conjugated(&base, (30_000 + s_idx * 100 + run) as u64, 1.0);
    let w = SymplecticStructure::standard(4);
    let result = census(&q, &w, 1e-9).unwrap();
    println!("census: {:?} planes {}", result.aggregate, result.planes.len());
    println!("rotation: {:?}", result.rotation);
    println!("reflection: {:?}", result.reflection);
    let oracle = oracle_census(&q, &w, 10.0, 21).unwrap();
    println!("oracle isolated: {} curve {}", oracle.isolated_planes.len(), oracle.curve_detected);
    for (i, p) in oracle.isolated_planes.iter().enumerate() {
        let best = result.planes.iter()
            .map(|c| principal_angle_sin(p.basis(), c.basis()))
            .fold(f64::INFINITY, f64::min);
        println!("oracle plane {i}: prov {:?} best census match {:.3e}", p.provenance(), best);
    }
}
