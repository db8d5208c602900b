use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use idealpoly_core::geom::{config_volume, delaunay, random_configuration};
use idealpoly_core::optvol::optimize_link;
use idealpoly_core::rivin::{check_feasible, ConstraintSystem, DEFAULT_EPSILON};
use idealpoly_core::rng::trial_rng;
use idealpoly_core::specfun::lobachevsky;
use idealpoly_core::stats::{fit_beta, sample_volumes, search_max_volume, VmaxSource};
use idealpoly_core::SphereTriangulation;

fn specfun(c: &mut Criterion) {
    let xs: Vec<f64> = (0..1000).map(|i| 0.001 + 3.1 * i as f64 / 1000.0).collect();
    c.bench_function("lobachevsky x1000", |b| b.iter(|| xs.iter().map(|&x| lobachevsky(black_box(x))).sum::<f64>()));
}

fn geometry(c: &mut Criterion) {
    let mut g = c.benchmark_group("delaunay");
    for n in [8, 12, 30] {
        let config = random_configuration(n, &mut trial_rng(1, n as u64)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &config, |b, cfg| b.iter(|| delaunay(black_box(cfg)).unwrap()));
    }
    g.finish();
    let config = random_configuration(12, &mut trial_rng(2, 0)).unwrap();
    c.bench_function("config_volume n=12", |b| b.iter(|| config_volume(black_box(&config)).unwrap()));
}

/// Combinatorial type of a random configuration with `n` vertices.
fn random_type(n: usize) -> SphereTriangulation {
    let config = random_configuration(n, &mut trial_rng(3, n as u64)).unwrap();
    idealpoly_core::geom::close_with_infinity(&delaunay(&config).unwrap()).unwrap().0
}

fn optimization(c: &mut Criterion) {
    let mut g = c.benchmark_group("optimize");
    for (name, t) in [("octahedron", SphereTriangulation::octahedron()), ("random n=10", random_type(10)), ("random n=16", random_type(16))]
    {
        let link = Arc::new(t.build_link(t.choose_apex()).unwrap());
        g.bench_function(BenchmarkId::new("feasibility", name), |b| {
            b.iter(|| check_feasible(&ConstraintSystem::assemble(black_box(&link), DEFAULT_EPSILON)).unwrap())
        });
        g.bench_function(BenchmarkId::new("maximize", name), |b| b.iter(|| optimize_link(black_box(&link), DEFAULT_EPSILON).unwrap()));
    }
    g.finish();
}

fn statistics(c: &mut Criterion) {
    let mut g = c.benchmark_group("stats");
    g.sample_size(10);
    g.bench_function("sample n=8 x500", |b| b.iter(|| sample_volumes(8, 500, black_box(0), 6.488469, VmaxSource::Table).unwrap()));
    let sample = sample_volumes(8, 5000, 0, 6.488469, VmaxSource::Table).unwrap();
    g.bench_function("fit_beta x5000", |b| b.iter(|| fit_beta(black_box(&sample)).unwrap()));
    g.bench_function("search n=8 x50", |b| b.iter(|| search_max_volume(8, 50, black_box(0), DEFAULT_EPSILON).unwrap()));
    g.finish();
}

criterion_group!(benches, specfun, geometry, optimization, statistics);
criterion_main!(benches);
