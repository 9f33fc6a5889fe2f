use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qgraph::graph::{random_graph, rat};
use qgraph::linalg::c;
use qgraph::{corpus, scattering, walks, BoundaryConditions};

fn smatrix(cr: &mut Criterion) {
    let mut group = cr.benchmark_group("smatrix");
    for ni in [3usize, 6, 12, 24] {
        let g = random_graph(ni / 2 + 1, ni, 2, 9).unwrap();
        let lengths: Vec<_> = (0..ni).map(|j| rat(j as i64 + 2, 3)).collect();
        let g = g.concretize(&lengths).unwrap();
        let bc = BoundaryConditions::haar_local(&g, 1).unwrap();
        group.bench_with_input(BenchmarkId::new("transfer", ni), &ni, |b, _| {
            b.iter(|| scattering::global_smatrix(&g, &bc, c(black_box(2.3), 0.0)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("via_z", ni), &ni, |b, _| {
            b.iter(|| scattering::smatrix_via_z(&g, &bc, c(black_box(2.3), 0.0)).unwrap())
        });
    }
    group.finish();
}

fn walk_expansion(cr: &mut Criterion) {
    let g = corpus::double_edge_graph();
    let bc = BoundaryConditions::haar_local(&g, 4).unwrap();
    let mut group = cr.benchmark_group("walks");
    for max in [4u32, 8, 12] {
        group.bench_with_input(BenchmarkId::new("fourier_table", max), &max, |b, &m| {
            b.iter(|| walks::fourier_table(&g, &bc, 0, &[m, m, m], m, c(1.7, 0.0)).unwrap())
        });
    }
    group.bench_function("partial_sum_40", |b| b.iter(|| walks::partial_sum(&g, &bc, black_box(1.0), 40).unwrap()));
    let p = corpus::path_graph(rat(1, 1));
    let pbc = BoundaryConditions::haar_local(&p, 2).unwrap();
    let scores: Vec<Vec<i64>> = (0..=3).map(|n| vec![n]).collect();
    group.bench_function("quadrature_256", |b| {
        b.iter(|| walks::quadrature_coefficients(&p, &pbc, 1.0, &scores, walks::DEFAULT_NODES).unwrap())
    });
    group.finish();
}

criterion_group!(benches, smatrix, walk_expansion);
criterion_main!(benches);
