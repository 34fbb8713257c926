use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::params::PhysicalParams;

/// Time-stamped fluid fields. Density is stored as `ln ρ` because both the
/// update equations and the force estimators consume the logarithm directly.
#[derive(Debug, Clone, PartialEq)]
pub struct FluidState {
    pub t: f64,
    pub ln_rho: Vec<f64>,
    pub v: Vec<f64>,
}

impl FluidState {
    pub fn new(t: f64, ln_rho: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if ln_rho.len() != v.len() {
            return Err(Error::LengthMismatch { expected: ln_rho.len(), got: v.len() });
        }
        Ok(Self { t, ln_rho, v })
    }

    pub fn len(&self) -> usize {
        self.ln_rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_rho.is_empty()
    }

    pub fn check_len(&self, grid: &SpatialGrid) -> Result<()> {
        if self.ln_rho.len() != grid.len() || self.v.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: self.ln_rho.len().min(self.v.len()),
            });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.ln_rho.iter().chain(&self.v).all(|x| x.is_finite())
    }

    pub fn density(&self) -> Vec<f64> {
        self.ln_rho.iter().map(|l| l.exp()).collect()
    }

    pub fn max_ln_rho(&self) -> f64 {
        self.ln_rho.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs_v(&self) -> f64 {
        self.v.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Clamps `ln ρ` from below at `ln(rel_floor)` relative to the current peak.
    pub fn apply_floor(&mut self, rel_floor: f64) {
        if !(rel_floor > 0.0) {
            return;
        }
        let floor = self.max_ln_rho() + rel_floor.ln();
        for l in &mut self.ln_rho {
            if *l < floor {
                *l = floor;
            }
        }
    }

    /// Multiplies every density value by `factor`.
    pub fn scale_density(&mut self, factor: f64) {
        let shift = factor.ln();
        for l in &mut self.ln_rho {
            *l += shift;
        }
    }
}

/// Exact coherent packet at time `t0`: Gaussian density of variance D/ω centred
/// on `a cos ωt0`, uniform velocity `-aω sin ωt0`.
pub fn init_coherent_state(params: &PhysicalParams, grid: &SpatialGrid, t0: f64) -> FluidState {
    let PhysicalParams { d, omega, a, mass, .. } = *params;
    let center = a * (omega * t0).cos();
    let ln_peak = (mass * (omega / (2.0 * PI * d)).sqrt()).ln();
    let curvature = omega / (2.0 * d);
    let ln_rho = grid.positions().map(|x| ln_peak - curvature * (x - center).powi(2)).collect();
    let v = vec![-a * omega * (omega * t0).sin(); grid.len()];
    FluidState { t: t0, ln_rho, v }
}

/// True when the packet centre ± `n_sigma` standard deviations lies inside the grid.
pub fn packet_fits(params: &PhysicalParams, grid: &SpatialGrid, t0: f64, n_sigma: f64) -> bool {
    let c = params.center_at(t0);
    let half = n_sigma * params.equilibrium_sigma2().sqrt();
    c - half >= grid.x0() && c + half <= grid.x_max()
}

/// Σ ρ_j δx.
pub fn mass(state: &FluidState, grid: &SpatialGrid) -> f64 {
    state.ln_rho.iter().map(|l| l.exp()).sum::<f64>() * grid.dx()
}
