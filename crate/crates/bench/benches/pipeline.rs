use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use subspar::graph::generators::gnp;
use subspar::hardness::{binomial_anticoncentration, build_gkp, GadgetOverride};
use subspar::sparsifier::{sublinear_sparsify, SparsifyConfig};
use subspar::spectral::check_lower_bound;
use subspar::{implicit_backend, BackendSpec, OracleHandle, SeedSplitter};

fn sparsify_complete(c: &mut Criterion) {
    let mut group = c.benchmark_group("sparsify_implicit_complete");
    group.sample_size(10);
    for n in [500usize, 1000, 2000] {
        let mut cfg = SparsifyConfig::new(0.5, 0.1, 1);
        cfg.resparsify = false;
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                let mut h = implicit_backend(BackendSpec::Complete { n }).unwrap();
                black_box(sublinear_sparsify(&mut h, &cfg).unwrap().samples)
            })
        });
    }
    group.finish();
}

fn sparsify_and_verify(c: &mut Criterion) {
    let g = gnp(200, 0.5, &mut SeedSplitter::new(3).stream("bench"));
    let cfg = SparsifyConfig::new(0.5, 0.15, 3);
    c.bench_function("sparsify_gnp_200_with_resparsify", |b| {
        b.iter(|| {
            black_box(sublinear_sparsify(&mut OracleHandle::from_graph(g.clone()), &cfg).unwrap())
        })
    });
    let h = sublinear_sparsify(&mut OracleHandle::from_graph(g.clone()), &cfg)
        .unwrap()
        .graph;
    c.bench_function("lower_bound_eigensolve_200", |b| {
        b.iter(|| black_box(check_lower_bound(&g, &h, 0.5).unwrap().measured))
    });
}

fn hardness(c: &mut Criterion) {
    c.bench_function("binomial_anticoncentration_p0.01_n40000", |b| {
        b.iter(|| black_box(binomial_anticoncentration(0.01, 40_000).unwrap().minimum))
    });
    c.bench_function("build_gkp_k100", |b| {
        b.iter(|| {
            black_box(
                build_gkp(100, 0.01, 7, GadgetOverride::None)
                    .unwrap()
                    .cut_s(),
            )
        })
    });
}

criterion_group!(benches, sparsify_complete, sparsify_and_verify, hardness);
criterion_main!(benches);
