use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use filippov_bench::fixtures;
use filippov_core::equilibria::{catalog, interior_equilibria};
use filippov_core::integrator::simulate;
use filippov_core::scan::{compute_basins, scan_sp_plane};
use filippov_core::sliding::{pseudo_equilibrium, sliding_bounds};
use filippov_core::{ModelParams, PsiMode, SimOptions, State};

fn equilibria(c: &mut Criterion) {
    let mut g = c.benchmark_group("equilibria");
    for (name, p) in fixtures() {
        g.bench_function(format!("interior_{name}"), |b| {
            b.iter(|| PsiMode::ALL.map(|m| interior_equilibria(black_box(&p), m)))
        });
        g.bench_function(format!("catalog_{name}"), |b| {
            b.iter(|| catalog(black_box(&p)))
        });
    }
    g.finish();
}

fn sliding(c: &mut Criterion) {
    let mut g = c.benchmark_group("sliding");
    for (name, p) in fixtures() {
        g.bench_function(format!("bounds_and_pseudo_{name}"), |b| {
            b.iter(|| {
                (
                    sliding_bounds(black_box(&p)),
                    pseudo_equilibrium(black_box(&p)),
                )
            })
        });
    }
    g.finish();
}

fn integrate(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulate");
    let opts = SimOptions::default();
    let a1 = ModelParams::preset_a1();
    g.bench_function("A1_to_pseudo", |b| {
        b.iter(|| simulate(black_box(State { x: 0.2, y: 1.0 }), &a1, &opts).unwrap())
    });
    let a2 = ModelParams::preset_a2().with_threshold(4.0).unwrap();
    g.bench_function("A2_bistable", |b| {
        b.iter(|| simulate(black_box(State { x: 5.0, y: 0.8 }), &a2, &opts).unwrap())
    });
    g.finish();
}

fn grids(c: &mut Criterion) {
    let mut g = c.benchmark_group("grids");
    g.sample_size(10);
    let a1 = ModelParams::preset_a1();
    g.bench_function("scan_sp_A1_50x50", |b| {
        b.iter(|| scan_sp_plane(&a1, (0.02, 1.98), (0.01, 0.9), (50, 50)).unwrap())
    });
    let a2 = ModelParams::preset_a2().with_threshold(4.0).unwrap();
    let opts = SimOptions {
        t_end: 300.0,
        ..SimOptions::default()
    };
    g.bench_function("basins_A2_16x16", |b| {
        b.iter(|| compute_basins(&a2, (0.0, 9.0), (0.0, 8.4), (16, 16), &opts).unwrap())
    });
    g.finish();
}

criterion_group!(benches, equilibria, sliding, integrate, grids);
criterion_main!(benches);
