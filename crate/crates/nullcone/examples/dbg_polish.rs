use nullcone::generate;
use nullcone::cone::{restrict_to_chart_graph, ChartId};
use nullcone::linalg::{RealMatrix, Svd};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let s_idx = 1usize; let run = 5usize;
    let mut rng = ChaCha8Rng::seed_from_u64((20_000 + s_idx * 100 + run) as u64);
    let a = rng.gen_range(0.5..2.0);
    let _gap: f64 = rng.gen_range(0.3..1.5);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let base = generate::elliptic_double_nilpotent(sign, a);
    let q0 = generate::conjugated(&base, (30_000 + s_idx * 100 + run) as u64, 1.0);
    let scale = q0.matrix().norm_max();
    let q = q0.scaled(1.0 / scale);

    let chart = ChartId::I;
    let m = [-0.3161465133519288, 4.144042053674992, -3.9029518726056587];
    let coeffs = |p: &[f64;3]| {
        let (a,b,c) = restrict_to_chart_graph(&q, chart, p);
        [a,b,c]
    };
    let f = coeffs(&m);
    println!("F = {:?} (norm {:.3e})", f, f.iter().fold(0.0f64,|x,y| x.max(y.abs())));

    // numerical jacobian
    let mut jac = RealMatrix::zeros(3,3);
    for col in 0..3 {
        let h = 1e-6*(1.0+m[col].abs());
        let mut mp = m; mp[col]+=h;
        let mut mm = m; mm[col]-=h;
        let fp = coeffs(&mp); let fm = coeffs(&mm);
        for row in 0..3 { jac[(row,col)] = (fp[row]-fm[row])/(2.0*h); }
    }
    let svd = Svd::compute(&jac);
    println!("J sigma = {:?}", svd.sigma);
    let v = svd.v.col(2);
    println!("v = {:?}", v);
    for t in [-4e-5, -2e-5, -1e-5, 0.0, 1e-5, 2e-5, 4e-5] {
        let p = [m[0]+t*v[0], m[1]+t*v[1], m[2]+t*v[2]];
        let f = coeffs(&p);
        let phi: f64 = f.iter().map(|x| x*x).sum();
        println!("t={t:+.1e}  phi={phi:.6e}  F={f:?}");
    }
}
