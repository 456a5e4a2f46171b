use nullcone::generate;
use nullcone::census::census;
use nullcone::oracle::oracle_census;
use nullcone::linalg::SymplecticStructure;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn main() {
    let s_idx = 5usize; let run = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64((20_000 + s_idx * 100 + run) as u64);
    let a = rng.gen_range(0.5..2.0);
    let base = generate::elliptic_double_semisimple(a);
    let q = generate::conjugated(&base, (30_000 + s_idx * 100 + run) as u64, 1.0);
    let w = SymplecticStructure::standard(4);
    let result = census(&q, &w, 1e-9).unwrap();
    println!("census: {:?}", result.aggregate);
    let oracle = oracle_census(&q, &w, 10.0, 21).unwrap();
    println!("oracle isolated {} curve {}", oracle.isolated_planes.len(), oracle.curve_detected);
    for (chart, sols) in &oracle.per_chart {
        let mut by_cluster: BTreeMap<usize, usize> = BTreeMap::new();
        for s in sols {
            *by_cluster.entry(s.cluster_id.unwrap()).or_insert(0) += 1;
        }
        println!("{chart:?}: {} solutions, clusters {:?}", sols.len(), by_cluster);
        if sols.len() < 30 {
            for s in sols { println!("   m={:?} r={:.1e} c={:?}", s.m, s.residual, s.cluster_id); }
        }
    }
}
