use nullcone::generate;
use nullcone::census::census;
use nullcone::oracle::oracle_census;
use nullcone::linalg::SymplecticStructure;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    // Reproduce EllipticDoubleNilpotent run 5 from criterion 3.
    let s_idx = 1usize; let run = 5usize;
    let mut rng = ChaCha8Rng::seed_from_u64((20_000 + s_idx * 100 + run) as u64);
    let a = rng.gen_range(0.5..2.0);
    let _gap: f64 = rng.gen_range(0.3..1.5);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let base = generate::elliptic_double_nilpotent(sign, a);
    let q = generate::conjugated(&base, (30_000 + s_idx * 100 + run) as u64, 1.0);
    let w = SymplecticStructure::standard(4);
    let result = census(&q, &w, 1e-9).unwrap();
    println!("census: {:?} planes {}", result.aggregate, result.planes.len());
    let oracle = oracle_census(&q, &w, 10.0, 21).unwrap();
    println!("oracle isolated: {}", oracle.isolated_planes.len());
    for (i, p) in oracle.isolated_planes.iter().enumerate() {
        println!("plane {i}: prov {:?}", p.provenance());
        for c in &result.planes {
            println!("   sin angle to census plane: {:.3e}",
                nullcone::linalg::principal_angle_sin(p.basis(), c.basis()));
        }
    }
    for (chart, sols) in &oracle.per_chart {
        for s in sols {
            println!("{chart:?} m={:?} residual={:.3e} cluster={:?}", s.m, s.residual, s.cluster_id);
        }
    }
}
