use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hwlaw::exp_law::{density_a_mu, density_a_mu_memo, ThetaMemo};
use hwlaw::mc::sample_bm_exp_functional;
use hwlaw::theta::theta;
use hwlaw::{DensityMethod, ExpFunctionalLaw, PathConfig, QuadratureConfig, ThetaPoint, ThetaRep};

fn theta_reps(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let mut g = c.benchmark_group("theta");
    for (name, rep) in [("yor", ThetaRep::YorSinhSin), ("coscos", ThetaRep::CoshCosCos), ("averaged", ThetaRep::Averaged)] {
        let p = ThetaPoint::new(2.0, 0.5).unwrap();
        g.bench_function(name, |b| b.iter(|| theta(black_box(p), rep, &cfg).unwrap()));
    }
    let far = ThetaPoint::new(300.0, 1.0).unwrap();
    g.bench_function("coscos_rotated", |b| b.iter(|| theta(black_box(far), ThetaRep::CoshCosCos, &cfg).unwrap()));
    g.finish();
}

fn densities(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let mut g = c.benchmark_group("density_a_mu");
    g.sample_size(20);
    let hermite = ExpFunctionalLaw::new(0.5, 1.0, DensityMethod::Hermite).unwrap();
    g.bench_function("hermite", |b| b.iter(|| density_a_mu(black_box(1.0), hermite, &cfg).unwrap()));
    let ibp = ExpFunctionalLaw::new(-1.5, 1.0, DensityMethod::NegIBP).unwrap();
    g.bench_function("neg_ibp", |b| b.iter(|| density_a_mu(black_box(1.0), ibp, &cfg).unwrap()));
    let memo = ThetaMemo::new(1.0).unwrap();
    density_a_mu_memo(1.0, 0.5, &memo, &cfg).unwrap();
    g.bench_function("double_integral_warm", |b| b.iter(|| density_a_mu_memo(black_box(1.0), 0.5, &memo, &cfg).unwrap()));
    g.finish();
}

fn paths(c: &mut Criterion) {
    let mut g = c.benchmark_group("mc");
    g.sample_size(10);
    let pc = PathConfig::new(1.0, 1000, 10_000, 7).unwrap();
    g.bench_function("expfun_1e4x1e3", |b| b.iter(|| sample_bm_exp_functional(black_box(0.0), pc).unwrap()));
    g.finish();
}

criterion_group!(benches, theta_reps, densities, paths);
criterion_main!(benches);
