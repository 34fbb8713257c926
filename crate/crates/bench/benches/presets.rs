use criterion::{criterion_group, criterion_main, Criterion};
use qfluid_core::{init_coherent_state, run, run_reference, Preset, Scenario};

fn presets(c: &mut Criterion) {
    let mut g = c.benchmark_group("preset");
    g.sample_size(10);
    for p in [Preset::Fig1, Preset::Fig3, Preset::Fig6] {
        let s = p.scenario();
        g.bench_function(p.name(), |b| b.iter(|| run(&s.config, &s.params, &s.grid).unwrap()));
    }
    let mut s = Scenario::default();
    s.config.steps = 16;
    let init = init_coherent_state(&s.params, &s.grid, 0.0);
    g.bench_function("reference_quarter_period", |b| {
        b.iter(|| run_reference(&init, &s.config, &s.params, &s.grid).unwrap())
    });
    g.finish();
}

criterion_group!(benches, presets);
criterion_main!(benches);
