//! Direct integration of the generalized Schrödinger equation
//!
//! ```text
//! D² ψ_xx + i D ψ_t − ((φ + w)/2) ψ = 0,   φ = ½ω²x²,   w = 2 k_p ln|ψ|
//! ```
//!
//! on the fluid grid with Dirichlet ends, used as an independent check of the
//! feedback-driven fluid. Time stepping is Crank-Nicolson; for `k_p > 0` the
//! logarithmic term is evaluated at the half step from a predictor pass.

use num_complex::Complex64;

use crate::config::RunConfig;
use crate::diagnostics::{measure, RunRecord, Snapshot, StepStatus, Termination};
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::params::PhysicalParams;
use crate::state::FluidState;

#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    pub t: f64,
    pub psi: Vec<Complex64>,
}

impl WaveState {
    /// Σ|ψ_j|² δx.
    pub fn norm(&self, grid: &SpatialGrid) -> f64 {
        self.psi.iter().map(|p| p.norm_sqr()).sum::<f64>() * grid.dx()
    }
}

/// Potential `(φ + w) / 2D` multiplying ψ in `i ψ_t = −D ψ_xx + U ψ`.
fn potential(psi: &[Complex64], grid: &SpatialGrid, params: &PhysicalParams, rel_floor: f64) -> Vec<f64> {
    let w2 = params.omega * params.omega;
    let inv_2d = 0.5 / params.d;
    let peak = psi.iter().fold(0.0f64, |m, p| m.max(p.norm_sqr()));
    let floor = peak * rel_floor;
    grid.positions()
        .zip(psi)
        .map(|(x, p)| {
            let phi = 0.5 * w2 * x * x;
            let w = if params.kp > 0.0 { params.kp * p.norm_sqr().max(floor).ln() } else { 0.0 };
            (phi + w) * inv_2d
        })
        .collect()
}

/// Solves `(I + i δt/2 H) ψ⁺ = (I − i δt/2 H) ψ` for the interior points,
/// H = −D ∂²_x + U with the three-point Laplacian.
fn crank_nicolson(psi: &[Complex64], u: &[f64], grid: &SpatialGrid, d: f64, dt: f64) -> Result<Vec<Complex64>> {
    let n = psi.len();
    let i = Complex64::i();
    let k = d / (grid.dx() * grid.dx());
    let half = 0.5 * dt;
    let off = -k;

    let m = n - 2;
    let mut diag = vec![Complex64::new(0.0, 0.0); m];
    let mut rhs = vec![Complex64::new(0.0, 0.0); m];
    for r in 0..m {
        let j = r + 1;
        let h_jj = 2.0 * k + u[j];
        let h_psi = h_jj * psi[j] + off * (psi[j - 1] + psi[j + 1]);
        rhs[r] = psi[j] - i * half * h_psi;
        diag[r] = 1.0 + i * half * h_jj;
    }
    let sub = i * half * off;
    let x = solve_tridiagonal(sub, &diag, sub, &rhs)?;

    let mut out = Vec::with_capacity(n);
    out.push(Complex64::new(0.0, 0.0));
    out.extend(x);
    out.push(Complex64::new(0.0, 0.0));
    Ok(out)
}

/// Thomas algorithm for a tridiagonal system with constant off-diagonals.
fn solve_tridiagonal(
    lower: Complex64,
    diag: &[Complex64],
    upper: Complex64,
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let m = diag.len();
    let mut c = vec![Complex64::new(0.0, 0.0); m];
    let mut d = vec![Complex64::new(0.0, 0.0); m];
    let mut beta = diag[0];
    if beta.norm() < f64::MIN_POSITIVE {
        return Err(Error::SingularSystem(0));
    }
    c[0] = upper / beta;
    d[0] = rhs[0] / beta;
    for r in 1..m {
        beta = diag[r] - lower * c[r - 1];
        if beta.norm() < f64::MIN_POSITIVE {
            return Err(Error::SingularSystem(r));
        }
        c[r] = upper / beta;
        d[r] = (rhs[r] - lower * d[r - 1]) / beta;
    }
    for r in (0..m - 1).rev() {
        d[r] = d[r] - c[r] * d[r + 1];
    }
    Ok(d)
}

/// Advances ψ by `dt`. For `k_p = 0` this is one linear Crank-Nicolson step
/// (unitary up to round-off).
pub fn cn_step(wave: &WaveState, grid: &SpatialGrid, params: &PhysicalParams, dt: f64) -> Result<WaveState> {
    cn_step_with_floor(wave, grid, params, dt, crate::config::RunConfig::default().rho_floor)
}

pub fn cn_step_with_floor(
    wave: &WaveState,
    grid: &SpatialGrid,
    params: &PhysicalParams,
    dt: f64,
    rel_floor: f64,
) -> Result<WaveState> {
    let u0 = potential(&wave.psi, grid, params, rel_floor);
    let psi = if params.kp > 0.0 {
        let predicted = crank_nicolson(&wave.psi, &u0, grid, params.d, dt)?;
        let u1 = potential(&predicted, grid, params, rel_floor);
        let u_half: Vec<f64> = u0.iter().zip(&u1).map(|(a, b)| 0.5 * (a + b)).collect();
        crank_nicolson(&wave.psi, &u_half, grid, params.d, dt)?
    } else {
        crank_nicolson(&wave.psi, &u0, grid, params.d, dt)?
    };
    Ok(WaveState { t: wave.t + dt, psi })
}

/// `ρ = M|ψ|²`, `V = 2D ∂θ` with the phase gradient taken from the central
/// phase difference `arg(ψ_{j+1} ψ*_{j−1}) / 2δx`. Where |ψ|² falls below
/// `rel_floor` times its peak the velocity is set to zero and ρ is clamped.
pub fn wave_to_fluid(wave: &WaveState, grid: &SpatialGrid, params: &PhysicalParams, rel_floor: f64) -> FluidState {
    let psi = &wave.psi;
    let n = psi.len();
    let peak = psi.iter().fold(0.0f64, |m, p| m.max(p.norm_sqr()));
    let floor = peak * rel_floor;
    let ln_rho = psi.iter().map(|p| (params.mass * p.norm_sqr().max(floor)).ln()).collect();
    let mut v = vec![0.0; n];
    let scale = 2.0 * params.d / (2.0 * grid.dx());
    for j in 1..n - 1 {
        if psi[j].norm_sqr() > floor && psi[j - 1].norm_sqr() > floor && psi[j + 1].norm_sqr() > floor {
            v[j] = scale * (psi[j + 1] * psi[j - 1].conj()).arg();
        }
    }
    v[0] = v[1];
    v[n - 1] = v[n - 2];
    FluidState { t: wave.t, ln_rho, v }
}

/// `ψ = √(ρ/M) e^{iθ}` with θ = (1/2D) ∫V dx by the cumulative trapezoid rule,
/// θ = 0 at the left end.
pub fn fluid_to_wave(state: &FluidState, grid: &SpatialGrid, params: &PhysicalParams) -> WaveState {
    let inv_2d = 0.5 / params.d;
    let half_dx = 0.5 * grid.dx();
    let ln_m = params.mass.ln();
    let mut theta = 0.0;
    let mut psi = Vec::with_capacity(state.len());
    for j in 0..state.len() {
        if j > 0 {
            theta += inv_2d * half_dx * (state.v[j - 1] + state.v[j]);
        }
        let amp = (0.5 * (state.ln_rho[j] - ln_m)).exp();
        psi.push(Complex64::from_polar(amp, theta));
    }
    WaveState { t: state.t, psi }
}

/// Integrates the Schrödinger equation from `initial` on the same schedule as
/// the feedback loop (`config.steps` recorded steps of `config.substeps`
/// Crank-Nicolson steps each) and records the same diagnostics.
pub fn run_reference(
    initial: &FluidState,
    config: &RunConfig,
    params: &PhysicalParams,
    grid: &SpatialGrid,
) -> Result<RunRecord> {
    config.validate()?;
    params.validate()?;
    initial.check_len(grid)?;

    let mut wave = fluid_to_wave(initial, grid, params);
    let mut record = RunRecord::new(*grid);
    let fluid = wave_to_fluid(&wave, grid, params, config.rho_floor);
    record.rows.push(measure(&fluid, grid, params, 0, StepStatus::Ok)?);
    if config.snapshot_every > 0 {
        record.snapshots.push(Snapshot { step: 0, state: fluid.clone() });
    }
    let mut fluid = fluid;
    let inner_dt = config.inner_dt();
    for step in 1..=config.steps {
        for _ in 0..config.substeps {
            match cn_step_with_floor(&wave, grid, params, inner_dt, config.rho_floor) {
                Ok(w) => wave = w,
                Err(_) => {
                    record.termination = Termination::Diverged { step, status: StepStatus::DivergedNonfinite };
                    record.final_state = Some(fluid);
                    return Ok(record);
                }
            }
        }
        wave.t = step as f64 * config.dt;
        fluid = wave_to_fluid(&wave, grid, params, config.rho_floor);
        if !fluid.is_finite() {
            record.termination = Termination::Diverged { step, status: StepStatus::DivergedNonfinite };
            break;
        }
        let row = match measure(&fluid, grid, params, step, StepStatus::Ok) {
            Ok(r) => r,
            Err(_) => {
                record.termination = Termination::Diverged { step, status: StepStatus::DivergedDispersion };
                break;
            }
        };
        record.rows.push(row);
        if config.snapshot_every > 0 && step.is_multiple_of(config.snapshot_every) {
            record.snapshots.push(Snapshot { step, state: fluid.clone() });
        }
    }
    record.final_state = Some(fluid);
    Ok(record)
}
