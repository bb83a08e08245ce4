use criterion::{criterion_group, criterion_main, Criterion};
use opkit::duality::{koszul_report, CobarOptions};
use opkit::operad::presets::{preset, Preset};
use opkit::par;
use opkit::pdspace::{BuildOptions, PdAlgebra, SimplicialComplex};

fn pd_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("pd_build_sphere_order3");
    g.sample_size(10);
    let run = || {
        let alg = PdAlgebra::new(SimplicialComplex::sphere(2), 3);
        alg.build(&BuildOptions::new(3)).unwrap()
    };
    g.bench_function("parallel", |b| b.iter(run));
    g.bench_function("sequential", |b| b.iter(|| par::sequential(run)));
    g.finish();
}

fn koszul(c: &mut Criterion) {
    let mut g = c.benchmark_group("koszul_hat_assoc_arity4");
    g.sample_size(10);
    let p = preset(Preset::Assoc);
    let run = || koszul_report(&p, 4, true, CobarOptions::default()).unwrap();
    g.bench_function("parallel", |b| b.iter(run));
    g.bench_function("sequential", |b| b.iter(|| par::sequential(run)));
    g.finish();
}

criterion_group!(benches, pd_build, koszul);
criterion_main!(benches);
