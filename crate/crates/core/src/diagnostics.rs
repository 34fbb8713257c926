//! Per-step measurements, run records and comparison metrics.

use std::fmt;

use crate::error::Result;
use crate::force::{fd_log_gradient, fd_quantum_potential, moments};
use crate::grid::SpatialGrid;
use crate::params::PhysicalParams;
use crate::state::{mass, FluidState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepStatus {
    Ok,
    CflWarning,
    DivergedNonfinite,
    DivergedDispersion,
    DivergedMass,
}

impl StepStatus {
    pub fn is_diverged(&self) -> bool {
        matches!(self, StepStatus::DivergedNonfinite | StepStatus::DivergedDispersion | StepStatus::DivergedMass)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            StepStatus::Ok => "ok",
            StepStatus::CflWarning => "cfl_warning",
            StepStatus::DivergedNonfinite => "diverged_nonfinite",
            StepStatus::DivergedDispersion => "diverged_dispersion",
            StepStatus::DivergedMass => "diverged_mass",
        }
    }
}

impl fmt::Display for StepStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of the diagnostic time series.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRow {
    pub step: usize,
    pub t: f64,
    pub mean: f64,
    pub var: f64,
    pub mass: f64,
    pub max_abs_v: f64,
    pub center_energy: f64,
    pub smoothness: f64,
    pub status: StepStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub state: FluidState,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Completed,
    Diverged { step: usize, status: StepStatus },
}

/// Everything a run produced. `rows` holds the initial measurement plus one
/// row per surviving step.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub grid: SpatialGrid,
    pub rows: Vec<StepRow>,
    pub snapshots: Vec<Snapshot>,
    pub termination: Termination,
    pub final_state: Option<FluidState>,
}

impl RunRecord {
    pub fn new(grid: SpatialGrid) -> Self {
        Self { grid, rows: Vec::new(), snapshots: Vec::new(), termination: Termination::Completed, final_state: None }
    }

    pub fn steps_survived(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn diverged(&self) -> bool {
        matches!(self.termination, Termination::Diverged { .. })
    }

    pub fn snapshot(&self, step: usize) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| s.step == step)
    }

    pub fn smoothness_series(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.smoothness).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub steps_survived: usize,
    pub diverged: bool,
    pub max_center_error: f64,
    pub max_var_error: f64,
    pub final_center_error: f64,
    pub final_var_error: f64,
}

pub fn summarize(record: &RunRecord, params: &PhysicalParams) -> RunSummary {
    let ce = center_error(record, params);
    let de = dispersion_error(record, params);
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    RunSummary {
        steps_survived: record.steps_survived(),
        diverged: record.diverged(),
        max_center_error: max(&ce),
        max_var_error: max(&de),
        final_center_error: ce.last().copied().unwrap_or(f64::NAN),
        final_var_error: de.last().copied().unwrap_or(f64::NAN),
    }
}

/// Measures one diagnostic row from a state.
pub fn measure(
    state: &FluidState,
    grid: &SpatialGrid,
    params: &PhysicalParams,
    step: usize,
    status: StepStatus,
) -> Result<StepRow> {
    let m = moments(state, grid)?;
    Ok(StepRow {
        step,
        t: state.t,
        mean: m.mean,
        var: m.var,
        mass: mass(state, grid),
        max_abs_v: state.max_abs_v(),
        center_energy: center_energy_estimate(state, grid, params)?,
        smoothness: smoothness(state, grid)?,
        status,
    })
}

/// `|x̄(t) − a cos ωt| / a`, or `|x̄(t)|` in length units when `a = 0`.
pub fn center_error(record: &RunRecord, params: &PhysicalParams) -> Vec<f64> {
    record
        .rows
        .iter()
        .map(|r| {
            let err = (r.mean - params.center_at(r.t)).abs();
            if params.a > 0.0 {
                err / params.a
            } else {
                err
            }
        })
        .collect()
}

/// `|σ²(t) / (D/ω) − 1|`.
pub fn dispersion_error(record: &RunRecord, params: &PhysicalParams) -> Vec<f64> {
    let s2 = params.equilibrium_sigma2();
    record.rows.iter().map(|r| (r.var / s2 - 1.0).abs()).collect()
}

/// `½V(x̄)² + ½ω²x̄² + Q(x̄)` with V and the finite-difference Q linearly
/// interpolated at the density mean.
pub fn center_energy_estimate(state: &FluidState, grid: &SpatialGrid, params: &PhysicalParams) -> Result<f64> {
    let xbar = moments(state, grid)?.mean;
    let q = fd_quantum_potential(&fd_log_gradient(state, grid), grid, params);
    // Q is only defined two points in from each end
    let lo = 2;
    let hi = grid.len() - 3;
    let v = interpolate(&state.v, grid, xbar, 0, grid.len() - 1);
    let q = interpolate(&q, grid, xbar, lo, hi);
    Ok(0.5 * v * v + 0.5 * params.omega * params.omega * xbar * xbar + q)
}

fn interpolate(field: &[f64], grid: &SpatialGrid, x: f64, lo: usize, hi: usize) -> f64 {
    let s = ((x - grid.x0()) / grid.dx()).clamp(lo as f64, hi as f64);
    let j = (s.floor() as usize).min(hi - 1);
    let w = s - j as f64;
    (1.0 - w) * field[j] + w * field[j + 1]
}

/// Mean squared second derivative of `ln ρ` over the packet core `|x − x̄| ≤ 3σ`.
pub fn smoothness(state: &FluidState, grid: &SpatialGrid) -> Result<f64> {
    let m = moments(state, grid)?;
    let half = 3.0 * m.var.sqrt();
    let inv_dx2 = 1.0 / (grid.dx() * grid.dx());
    let l = &state.ln_rho;
    let (sum, count) = (1..grid.len() - 1)
        .filter(|&j| (grid.position(j) - m.mean).abs() <= half)
        .map(|j| ((l[j + 1] - 2.0 * l[j] + l[j - 1]) * inv_dx2).powi(2))
        .fold((0.0, 0usize), |(s, c), d| (s + d, c + 1));
    Ok(if count == 0 { 0.0 } else { sum / count as f64 })
}

/// Relative L2 distance between two densities, each normalized to unit mass
/// first: `‖P_a − P_b‖ / ‖P_a‖`.
pub fn density_distance(a: &FluidState, b: &FluidState, grid: &SpatialGrid) -> f64 {
    let pa = normalized(a, grid);
    let pb = normalized(b, grid);
    let num: f64 = pa.iter().zip(&pb).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = pa.iter().map(|x| x * x).sum();
    (num / den).sqrt()
}

fn normalized(state: &FluidState, grid: &SpatialGrid) -> Vec<f64> {
    let peak = state.max_ln_rho();
    let w: Vec<f64> = state.ln_rho.iter().map(|l| (l - peak).exp()).collect();
    let total: f64 = w.iter().sum::<f64>() * grid.dx();
    w.into_iter().map(|x| x / total).collect()
}

/// Per-step density distance over the snapshots both records share, as
/// `(step, distance)` pairs in step order.
pub fn l2_density_distance(a: &RunRecord, b: &RunRecord) -> Vec<(usize, f64)> {
    a.snapshots
        .iter()
        .filter_map(|sa| b.snapshot(sa.step).map(|sb| (sa.step, density_distance(&sa.state, &sb.state, &a.grid))))
        .collect()
}
