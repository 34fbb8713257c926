//! Lax-Friedrichs FTCS stepping of the (ln ρ, V) system and the feedback loop
//! that drives it: measure the density, compute the force, apply it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Estimator, NoiseMode, RunConfig};
use crate::diagnostics::{measure, RunRecord, Snapshot, StepStatus, Termination};
use crate::error::Result;
use crate::force::{
    extrapolate_margin, external_force, fd_quantum_force, gaussian_fit_force, oracle_quantum_force, pressure_force, ForceField, STENCIL_MARGIN,
};
use crate::grid::SpatialGrid;
use crate::params::PhysicalParams;
use crate::state::{init_coherent_state, mass, FluidState};

/// Variance growth beyond this factor (relative to the first measurement)
/// counts as divergence.
pub const MAX_VARIANCE_GROWTH: f64 = 10.0;
/// Mass change between consecutive recorded steps beyond this factor (either
/// direction) counts as divergence.
pub const MAX_MASS_JUMP: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub status: StepStatus,
    pub state: FluidState,
}

/// One Lax-Friedrichs step.
///
/// Interior points:
///
/// ```text
/// lnρ_j ← (lnρ_{j+1} + lnρ_{j−1})/2 − δt/2δx [(V_{j+1} − V_{j−1}) + V_j (lnρ_{j+1} − lnρ_{j−1})]
/// V_j   ← (V_{j+1} + V_{j−1})/2 + δt [−V_j (V_{j+1} − V_{j−1})/2δx + F_j]
/// ```
///
/// End points are extrapolated from the interior: quadratically for lnρ, so a
/// log-quadratic tail stays log-quadratic, and linearly for V.
pub fn lax_step(state: &FluidState, forces: &ForceField, grid: &SpatialGrid, dt: f64) -> StepOutcome {
    let n = state.len();
    let l = &state.ln_rho;
    let v = &state.v;
    let dx = grid.dx();
    let c = dt / (2.0 * dx);
    let mut ln_rho = vec![0.0; n];
    let mut vel = vec![0.0; n];
    for j in 1..n - 1 {
        let dl = l[j + 1] - l[j - 1];
        let dv = v[j + 1] - v[j - 1];
        ln_rho[j] = 0.5 * (l[j + 1] + l[j - 1]) - c * (dv + v[j] * dl);
        vel[j] = 0.5 * (v[j + 1] + v[j - 1]) + dt * (-v[j] * dv / (2.0 * dx) + forces.total(j));
    }
    ln_rho[0] = 3.0 * (ln_rho[1] - ln_rho[2]) + ln_rho[3];
    ln_rho[n - 1] = 3.0 * (ln_rho[n - 2] - ln_rho[n - 3]) + ln_rho[n - 4];
    vel[0] = 2.0 * vel[1] - vel[2];
    vel[n - 1] = 2.0 * vel[n - 2] - vel[n - 3];

    let next = FluidState { t: state.t + dt, ln_rho, v: vel };
    let status = if !next.is_finite() {
        StepStatus::DivergedNonfinite
    } else if state.max_abs_v() * dt / dx > 1.0 {
        StepStatus::CflWarning
    } else {
        StepStatus::Ok
    };
    StepOutcome { status, state: next }
}

/// Force decomposition for the current state under the chosen estimator.
pub fn compute_forces(
    state: &FluidState,
    grid: &SpatialGrid,
    params: &PhysicalParams,
    estimator: Estimator,
) -> Result<ForceField> {
    let quantum = match estimator {
        Estimator::GaussianFit => gaussian_fit_force(state, grid, params)?,
        Estimator::FiniteDifference => {
            let mut f = fd_quantum_force(state, grid, params);
            extrapolate_margin(&mut f, STENCIL_MARGIN);
            f
        }
        Estimator::OracleExact => oracle_quantum_force(state, grid, params),
        Estimator::None => vec![0.0; grid.len()],
    };
    Ok(ForceField { external: external_force(grid, params), quantum, pressure: pressure_force(state, grid, params) })
}

/// Multiplies ρ(x_j) by `exp(α_j)` with α_j ~ U[0, amplitude], independently per point.
pub fn perturb_density<R: Rng + ?Sized>(state: &mut FluidState, rng: &mut R, amplitude: f64) {
    for l in &mut state.ln_rho {
        *l += amplitude * rng.random::<f64>();
    }
}

/// Runs the feedback loop from the exact coherent packet at t = 0.
pub fn run(config: &RunConfig, params: &PhysicalParams, grid: &SpatialGrid) -> Result<RunRecord> {
    params.validate()?;
    let mut init = init_coherent_state(params, grid, 0.0);
    init.apply_floor(config.rho_floor);
    run_from(init, config, params, grid)
}

/// Runs the feedback loop from a supplied initial state.
///
/// Each recorded step: inject per-step noise if configured, advance
/// `config.substeps` loop iterations (force from the current density,
/// Lax-Friedrichs update, density floor), then measure. The run stops at the first divergence and
/// returns everything recorded up to it.
pub fn run_from(
    initial: FluidState,
    config: &RunConfig,
    params: &PhysicalParams,
    grid: &SpatialGrid,
) -> Result<RunRecord> {
    config.validate()?;
    params.validate()?;
    initial.check_len(grid)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = initial;
    if config.noise == NoiseMode::Initial {
        perturb_density(&mut state, &mut rng, config.noise_amplitude);
    }

    let mut record = RunRecord::new(*grid);
    let row0 = measure(&state, grid, params, 0, StepStatus::Ok)?;
    let var0 = row0.var;
    let mut prev_mass = row0.mass;
    record.rows.push(row0);
    push_snapshot(&mut record, config, 0, &state);

    let inner_dt = config.inner_dt();
    'steps: for step in 1..=config.steps {
        let mut status = StepStatus::Ok;
        if config.noise == NoiseMode::PerStep {
            perturb_density(&mut state, &mut rng, config.noise_amplitude);
        }
        for _ in 0..config.substeps {
            let forces = match compute_forces(&state, grid, params, config.estimator) {
                Ok(f) => f,
                Err(_) => {
                    record.termination = Termination::Diverged { step, status: StepStatus::DivergedDispersion };
                    break 'steps;
                }
            };
            let outcome = lax_step(&state, &forces, grid, inner_dt);
            if outcome.status.is_diverged() {
                record.termination = Termination::Diverged { step, status: outcome.status };
                break 'steps;
            }
            if outcome.status == StepStatus::CflWarning {
                status = StepStatus::CflWarning;
            }
            state = outcome.state;
            state.apply_floor(config.rho_floor);
        }
        // keep t on the recorded grid of times despite substep round-off
        state.t = step as f64 * config.dt;

        let m = mass(&state, grid);
        let jump = if m > 0.0 && prev_mass > 0.0 { (m / prev_mass).max(prev_mass / m) } else { f64::INFINITY };
        let row = match measure(&state, grid, params, step, status) {
            Ok(row) => row,
            Err(_) => {
                record.termination = Termination::Diverged { step, status: StepStatus::DivergedDispersion };
                break;
            }
        };
        let divergence = if !m.is_finite() || !row.var.is_finite() {
            Some(StepStatus::DivergedNonfinite)
        } else if row.var > MAX_VARIANCE_GROWTH * var0 {
            Some(StepStatus::DivergedDispersion)
        } else if jump > MAX_MASS_JUMP {
            Some(StepStatus::DivergedMass)
        } else {
            None
        };
        if let Some(status) = divergence {
            record.termination = Termination::Diverged { step, status };
            break;
        }
        prev_mass = m;
        record.rows.push(row);
        push_snapshot(&mut record, config, step, &state);
    }
    record.final_state = Some(state);
    Ok(record)
}

fn push_snapshot(record: &mut RunRecord, config: &RunConfig, step: usize, state: &FluidState) {
    if config.snapshot_every > 0 && step.is_multiple_of(config.snapshot_every) {
        record.snapshots.push(Snapshot { step, state: state.clone() });
    }
}
