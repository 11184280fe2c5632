use std::hint::black_box;

use cmwave_bench::{random_phase, sizes};
use cmwave_core::objective::{evaluate_mismatch, grad_f_lag_of};
use cmwave_core::{synthesize_waveform, Solver, SolverConfig};
use criterion::{criterion_group, criterion_main, Criterion};

fn mismatch(c: &mut Criterion) {
    let mut group = c.benchmark_group("mismatch_eval");
    for (name, scn) in sizes() {
        let x = synthesize_waveform(&random_phase(&scn, 1));
        group.bench_function(name, |b| {
            b.iter(|| evaluate_mismatch(black_box(1.0), x.view(), &scn))
        });
    }
    group.finish();
}

fn lag_gradient(c: &mut Criterion) {
    let mut group = c.benchmark_group("lag_gradient");
    for (name, scn) in sizes() {
        let x = synthesize_waveform(&random_phase(&scn, 2));
        group.bench_function(name, |b| {
            b.iter(|| grad_f_lag_of(x.view(), &scn, black_box(1)))
        });
    }
    group.finish();
}

fn solver_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("solver_step");
    for (name, scn) in sizes() {
        let mut solver = Solver::new(
            &scn,
            SolverConfig {
                rng_seed: 3,
                ..Default::default()
            },
        )
        .expect("solver builds");
        group.bench_function(name, |b| b.iter(|| solver.step().expect("finite step")));
    }
    group.finish();
}

criterion_group!(benches, mismatch, lag_gradient, solver_step);
criterion_main!(benches);
