use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kspectral::conformal::solve_density;
use kspectral::extremal::{strip_objective, Layout, StripCandidate};
use kspectral::linalg::{function_of_matrix, schur};
use kspectral::numrange::{boundary, cardioid_boundary, cardioid_matrix};
use kspectral::psi::{psi_disk, psi_from_boundary, PsiOptions};
use kspectral::{Complex64, ComplexMatrix};

/// Trace mean of the cardioid matrix; the map needs 0 inside the domain.
fn center(a: &ComplexMatrix) -> Complex64 {
    a.trace() / a.nrows() as f64
}

fn stages(c: &mut Criterion) {
    let a = cardioid_matrix(0.5, 0.5);
    let shift = center(&a);
    let mut group = c.benchmark_group("stages");
    group.bench_function("schur_3x3", |b| b.iter(|| schur(black_box(&a)).unwrap()));
    group.bench_function("expm_3x3", |b| b.iter(|| function_of_matrix(black_box(&a), &|z: Complex64| z.exp()).unwrap()));
    for n in [32, 64, 128] {
        group.bench_with_input(BenchmarkId::new("support_boundary", n), &n, |b, &n| b.iter(|| boundary(black_box(&a), n).unwrap()));
        let sample = cardioid_boundary(0.5, 0.5, n).unwrap().translated(-shift);
        group.bench_with_input(BenchmarkId::new("solve_density", n), &sample, |b, s| b.iter(|| solve_density(black_box(s)).unwrap()));
    }
    let x = [0.3, 1.2, 0.1, 0.4, -0.7, 0.9, 0.2, 1.1, -0.4, 0.6, 0.05, -0.3, 0.8, 0.1];
    let candidate = StripCandidate(Layout::Strip { d: 4, k: 2 }.decode(&x));
    group.bench_function("strip_objective_d4", |b| b.iter(|| strip_objective(black_box(&candidate))));
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let a = cardioid_matrix(0.5, 0.5);
    let shift = center(&a);
    let sample = cardioid_boundary(0.5, 0.5, 64).unwrap();
    let map = solve_density(&sample.translated(-shift)).unwrap();
    let mapped = map.map_matrix(&(&a - ComplexMatrix::identity(3, 3) * shift)).unwrap();
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("psi_disk_restarts_4", |b| b.iter(|| psi_disk(black_box(&mapped), 4, 0).unwrap()));
    let opts = PsiOptions { n: 64, restarts: 4, seed: 0, ..Default::default() };
    group.bench_function("table1_cell_restarts_4", |b| b.iter(|| psi_from_boundary(black_box(&a), &sample, &opts).unwrap()));
    group.finish();
}

criterion_group!(benches, stages, pipeline);
criterion_main!(benches);
