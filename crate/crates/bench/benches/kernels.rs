use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qfluid_core::force::{fd_quantum_force, gaussian_fit_force, moments};
use qfluid_core::integrator::compute_forces;
use qfluid_core::{cn_step, fluid_to_wave, init_coherent_state, lax_step, Estimator, Scenario};

fn forces(c: &mut Criterion) {
    let s = Scenario::default();
    let state = init_coherent_state(&s.params, &s.grid, 3.0);
    let mut g = c.benchmark_group("force");
    g.bench_function("moments", |b| b.iter(|| moments(black_box(&state), &s.grid)));
    g.bench_function("gaussian_fit", |b| b.iter(|| gaussian_fit_force(black_box(&state), &s.grid, &s.params)));
    g.bench_function("finite_difference", |b| b.iter(|| fd_quantum_force(black_box(&state), &s.grid, &s.params)));
    g.finish();
}

fn steps(c: &mut Criterion) {
    let mut s = Scenario::default();
    s.params.kp = 1.0;
    let state = init_coherent_state(&s.params, &s.grid, 3.0);
    let f = compute_forces(&state, &s.grid, &s.params, Estimator::GaussianFit).unwrap();
    let wave = fluid_to_wave(&state, &s.grid, &s.params);
    let dt = s.config.inner_dt();
    let mut g = c.benchmark_group("step");
    g.bench_function("lax_friedrichs", |b| b.iter(|| lax_step(black_box(&state), &f, &s.grid, dt)));
    g.bench_function("crank_nicolson", |b| b.iter(|| cn_step(black_box(&wave), &s.grid, &s.params, dt)));
    g.finish();
}

criterion_group!(benches, forces, steps);
criterion_main!(benches);
