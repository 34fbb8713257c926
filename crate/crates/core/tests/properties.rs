use proptest::prelude::*;
use qfluid_core::diagnostics::dispersion_error;
use qfluid_core::force::{fd_quantum_force, gaussian_fit_force, moments, pressure_force};
use qfluid_core::integrator::compute_forces;
use qfluid_core::{
    init_coherent_state, lax_step, perturb_density, run, run_from, Estimator, FluidState, NoiseMode, PhysicalParams,
    Scenario, SpatialGrid,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(kp: f64) -> PhysicalParams {
    PhysicalParams { kp, ..Scenario::default().params }
}

/// Smooth, non-Gaussian log-density with a random centre, width, skew and offset.
fn bumpy_state(grid: &SpatialGrid, m: f64, s: f64, skew: f64, c: f64) -> FluidState {
    let ln_rho = grid
        .positions()
        .map(|x| {
            let u = (x - m) / s;
            c - 0.5 * u * u + skew * u.powi(3) / (1.0 + u * u)
        })
        .collect();
    FluidState::new(0.0, ln_rho, vec![0.0; grid.len()]).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn force_estimators_ignore_density_scale(
        m in -200.0..200.0f64,
        s in 30.0..70.0f64,
        skew in -0.3..0.3f64,
        c in -20.0..20.0f64,
        log_factor in -30.0..30.0f64,
    ) {
        let grid = Scenario::default().grid;
        let p = params(1.0);
        let a = bumpy_state(&grid, m, s, skew, c);
        let mut b = a.clone();
        b.scale_density(log_factor.exp());

        let (ga, gb) = (gaussian_fit_force(&a, &grid, &p).unwrap(), gaussian_fit_force(&b, &grid, &p).unwrap());
        prop_assert!(max_diff(&ga, &gb) <= 1e-12 * max_abs(&ga));
        let (fa, fb) = (fd_quantum_force(&a, &grid, &p), fd_quantum_force(&b, &grid, &p));
        prop_assert!(max_diff(&fa, &fb) <= 1e-12 * max_abs(&fa).max(1.0));
        let (pa, pb) = (pressure_force(&a, &grid, &p), pressure_force(&b, &grid, &p));
        prop_assert!(max_diff(&pa, &pb) <= 1e-12 * max_abs(&pa).max(1.0));
    }

    #[test]
    fn moments_follow_integer_translation(shift in -20i32..20, s in 30.0..60.0f64) {
        let grid = Scenario::default().grid;
        let dx = grid.dx();
        let a = bumpy_state(&grid, 0.0, s, 0.2, 0.0);
        let b = bumpy_state(&grid, shift as f64 * dx, s, 0.2, 0.0);
        let (ma, mb) = (moments(&a, &grid).unwrap(), moments(&b, &grid).unwrap());
        prop_assert!((mb.mean - ma.mean - shift as f64 * dx).abs() < 1e-9);
        prop_assert!((mb.var - ma.var).abs() < 1e-9 * ma.var);
    }

    #[test]
    fn perturbation_raises_log_density_within_amplitude(seed in any::<u64>(), amp in 0.0..3.0f64) {
        let s = Scenario::default();
        let before = init_coherent_state(&s.params, &s.grid, 0.0);
        let mut after = before.clone();
        perturb_density(&mut after, &mut ChaCha8Rng::seed_from_u64(seed), amp);
        for (x, y) in before.ln_rho.iter().zip(&after.ln_rho) {
            prop_assert!(*y >= *x && *y - *x <= amp + 1e-12);
        }
        prop_assert_eq!(&before.v, &after.v);
    }

    #[test]
    fn uniform_fluid_without_force_is_stationary(level in -50.0..50.0f64, v in -3.0..3.0f64, dt in 0.01..1.0f64) {
        let grid = Scenario::default().grid;
        let state = FluidState::new(0.0, vec![level; grid.len()], vec![v; grid.len()]).unwrap();
        let forces = qfluid_core::ForceField::zeros(grid.len());
        let out = lax_step(&state, &forces, &grid, dt);
        prop_assert!(max_diff(&out.state.ln_rho, &state.ln_rho) <= 1e-12 * level.abs().max(1.0));
        prop_assert!(max_diff(&out.state.v, &state.v) <= 1e-12);
    }

    #[test]
    fn total_force_is_finite_on_the_packet(t in 0.0..64.0f64, kp in 0.0..5.0f64) {
        let s = Scenario::default();
        let p = params(kp);
        let state = init_coherent_state(&p, &s.grid, t);
        for est in Estimator::ALL {
            prop_assert!(compute_forces(&state, &s.grid, &p, est).unwrap().is_finite());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// The feedback loop never sees the absolute density level: moments of
    /// every recorded step match between a run and its rescaled twin.
    #[test]
    fn run_trajectory_ignores_density_scale(log_factor in -40.0..40.0f64, kp in 0.0..2.0f64) {
        let mut s = Scenario::default();
        s.params.kp = kp;
        s.config.steps = 8;
        let init = init_coherent_state(&s.params, &s.grid, 0.0);
        let mut scaled = init.clone();
        scaled.scale_density(log_factor.exp());
        let a = run_from(init, &s.config, &s.params, &s.grid).unwrap();
        let b = run_from(scaled, &s.config, &s.params, &s.grid).unwrap();
        prop_assert_eq!(a.rows.len(), b.rows.len());
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            prop_assert!((ra.mean - rb.mean).abs() <= 1e-9 * s.grid.dx());
            prop_assert!((ra.var - rb.var).abs() <= 1e-9 * ra.var);
        }
    }

    #[test]
    fn seeded_runs_are_reproducible(seed in any::<u64>()) {
        let mut s = Scenario::default();
        s.config.noise = NoiseMode::PerStep;
        s.config.seed = seed;
        s.config.steps = 6;
        let a = run(&s.config, &s.params, &s.grid).unwrap();
        let b = run(&s.config, &s.params, &s.grid).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn any_packet_position_gives_matching_dispersion(t0 in 0.0..64.0f64) {
        let s = Scenario::default();
        let state = init_coherent_state(&s.params, &s.grid, t0);
        let m = moments(&state, &s.grid).unwrap();
        prop_assert!((m.mean - s.params.center_at(t0)).abs() < 1e-9 * s.grid.dx());
        let mut rec = qfluid_core::RunRecord::new(s.grid);
        rec.rows.push(qfluid_core::diagnostics::measure(&state, &s.grid, &s.params, 0, qfluid_core::StepStatus::Ok).unwrap());
        prop_assert!(dispersion_error(&rec, &s.params)[0] < 1e-9);
    }
}
