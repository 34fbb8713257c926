//! Force decomposition applied by the feedback loop: external trap force,
//! generalized quantum force and isentropic pressure force.
//!
//! Two quantum-force estimators are provided. The Gaussian fit measures the
//! density's mean and variance and applies the analytic force of the fitted
//! packet, `D²(x − x̄)/σ⁴`, with moments in physical units (so no δx³ factor
//! appears). The finite-difference estimator runs the stencil chain
//! `ln ρ → H = ∂ ln ρ → Q = −D²(∂H + H²/2) → F_Q = −∂Q`.

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::oracle::OracleWave;
use crate::params::PhysicalParams;
use crate::state::FluidState;

/// Outermost points on each side where stencil forces are zero.
pub const STENCIL_MARGIN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub var: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceField {
    pub external: Vec<f64>,
    pub quantum: Vec<f64>,
    pub pressure: Vec<f64>,
}

impl ForceField {
    pub fn zeros(n: usize) -> Self {
        Self { external: vec![0.0; n], quantum: vec![0.0; n], pressure: vec![0.0; n] }
    }

    /// Spatially uniform force `f` carried entirely by the external component.
    pub fn uniform(n: usize, f: f64) -> Self {
        Self { external: vec![f; n], ..Self::zeros(n) }
    }

    #[inline]
    pub fn total(&self, j: usize) -> f64 {
        self.external[j] + self.quantum[j] + self.pressure[j]
    }

    pub fn totals(&self) -> Vec<f64> {
        (0..self.external.len()).map(|j| self.total(j)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.external.iter().chain(&self.quantum).chain(&self.pressure).all(|f| f.is_finite())
    }
}

/// Density-weighted mean and variance of the grid positions.
///
/// Weights are `exp(ln ρ − max ln ρ)` so the result does not depend on the
/// overall density scale and cannot overflow.
pub fn moments(state: &FluidState, grid: &SpatialGrid) -> Result<Moments> {
    state.check_len(grid)?;
    let peak = state.max_ln_rho();
    if !peak.is_finite() {
        return Err(Error::ZeroMass);
    }
    let mut w_sum = 0.0;
    let mut wx_sum = 0.0;
    for (l, x) in state.ln_rho.iter().zip(grid.positions()) {
        let w = (l - peak).exp();
        w_sum += w;
        wx_sum += w * x;
    }
    if !(w_sum > 0.0) {
        return Err(Error::ZeroMass);
    }
    let mean = wx_sum / w_sum;
    let var = state
        .ln_rho
        .iter()
        .zip(grid.positions())
        .map(|(l, x)| (l - peak).exp() * (x - mean).powi(2))
        .sum::<f64>()
        / w_sum;
    let threshold = (0.1 * grid.dx()).powi(2);
    if !(var >= threshold) {
        return Err(Error::DegenerateDensity { var, threshold });
    }
    Ok(Moments { mean, var })
}

/// Analytic force of a Gaussian with the given moments.
pub fn gaussian_force_from_moments(m: Moments, grid: &SpatialGrid, params: &PhysicalParams) -> Vec<f64> {
    let coeff = params.d * params.d / (m.var * m.var);
    grid.positions().map(|x| coeff * (x - m.mean)).collect()
}

pub fn gaussian_fit_force(state: &FluidState, grid: &SpatialGrid, params: &PhysicalParams) -> Result<Vec<f64>> {
    let m = moments(state, grid)?;
    Ok(gaussian_force_from_moments(m, grid, params))
}

/// `H_j = (ln ρ_{j+1} − ln ρ_{j−1}) / 2δx`; the two end points are zero.
pub fn fd_log_gradient(state: &FluidState, grid: &SpatialGrid) -> Vec<f64> {
    central_difference(&state.ln_rho, grid.dx())
}

/// `Q_j = −D² [(H_{j+1} − H_{j−1}) / 2δx + H_j² / 2]`, zero on the two outermost
/// points per side (they would read boundary H values).
pub fn fd_quantum_potential(h: &[f64], grid: &SpatialGrid, params: &PhysicalParams) -> Vec<f64> {
    let n = h.len();
    let d2 = params.d * params.d;
    let inv_2dx = 0.5 / grid.dx();
    let mut q = vec![0.0; n];
    for j in 2..n.saturating_sub(2) {
        q[j] = -d2 * ((h[j + 1] - h[j - 1]) * inv_2dx + 0.5 * h[j] * h[j]);
    }
    q
}

/// `(F_Q)_j = (Q_{j−1} − Q_{j+1}) / 2δx`, zero on the outermost
/// [`STENCIL_MARGIN`] points per side.
pub fn fd_quantum_force(state: &FluidState, grid: &SpatialGrid, params: &PhysicalParams) -> Vec<f64> {
    let h = fd_log_gradient(state, grid);
    let q = fd_quantum_potential(&h, grid, params);
    let n = q.len();
    let inv_2dx = 0.5 / grid.dx();
    let mut f = vec![0.0; n];
    for j in STENCIL_MARGIN..n.saturating_sub(STENCIL_MARGIN) {
        f[j] = (q[j - 1] - q[j + 1]) * inv_2dx;
    }
    f
}

/// Fills the `margin` outermost points per side by linear extrapolation of
/// the two nearest interior values.
pub fn extrapolate_margin(f: &mut [f64], margin: usize) {
    let n = f.len();
    if n < 2 * margin + 2 {
        return;
    }
    let (a, b) = (f[margin], f[margin + 1]);
    for j in 0..margin {
        f[j] = a - (margin - j) as f64 * (b - a);
    }
    let (a, b) = (f[n - 1 - margin], f[n - 2 - margin]);
    for j in n - margin..n {
        f[j] = a - (j - (n - 1 - margin)) as f64 * (b - a);
    }
}

/// `−k_p ∂ ln ρ` by central differences; zero at the end points.
pub fn pressure_force(state: &FluidState, grid: &SpatialGrid, params: &PhysicalParams) -> Vec<f64> {
    if params.kp == 0.0 {
        return vec![0.0; state.len()];
    }
    let mut f = central_difference(&state.ln_rho, grid.dx());
    for v in &mut f {
        *v *= -params.kp;
    }
    f
}

/// External harmonic force `−ω² x`.
pub fn external_force(grid: &SpatialGrid, params: &PhysicalParams) -> Vec<f64> {
    let w2 = params.omega * params.omega;
    grid.positions().map(|x| -w2 * x).collect()
}

/// Closed-form quantum force of the exact packet at the state's time.
pub fn oracle_quantum_force(state: &FluidState, grid: &SpatialGrid, params: &PhysicalParams) -> Vec<f64> {
    let wave = OracleWave::new(*params);
    grid.positions().map(|x| wave.quantum_force(x, state.t)).collect()
}

fn central_difference(field: &[f64], dx: f64) -> Vec<f64> {
    let n = field.len();
    let inv_2dx = 0.5 / dx;
    let mut out = vec![0.0; n];
    for j in 1..n.saturating_sub(1) {
        out[j] = (field[j + 1] - field[j - 1]) * inv_2dx;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::init_coherent_state;
    use approx::assert_relative_eq;

    fn grid() -> SpatialGrid {
        SpatialGrid::centered(1.0, 160).unwrap()
    }

    fn params() -> PhysicalParams {
        let omega = 2.0 * std::f64::consts::PI / 64.0;
        PhysicalParams { d: 16.0 * omega, omega, a: 8.0, kp: 0.0, mass: 1.0 }
    }

    fn from_ln(grid: &SpatialGrid, f: impl Fn(f64) -> f64) -> FluidState {
        FluidState { t: 0.0, ln_rho: grid.positions().map(f).collect(), v: vec![0.0; grid.len()] }
    }

    #[test]
    fn moments_of_simple_densities() {
        let g = SpatialGrid::new(-3.0, 1.0, 7).unwrap();
        // two equal point masses at ±2 (everything else ~ zero)
        let s = from_ln(&g, |x| if x.abs() == 2.0 { 0.0 } else { -800.0 });
        let m = moments(&s, &g).unwrap();
        assert_relative_eq!(m.mean, 0.0, epsilon = 1e-15);
        assert_relative_eq!(m.var, 4.0, max_relative = 1e-14);

        let g = SpatialGrid::new(0.0, 0.5, 21).unwrap();
        let m = moments(&from_ln(&g, |_| 1.3), &g).unwrap();
        assert_relative_eq!(m.mean, 5.0, max_relative = 1e-14);
    }

    #[test]
    fn moments_of_coherent_packet() {
        let p = params();
        let g = grid();
        let m = moments(&init_coherent_state(&p, &g, 0.0), &g).unwrap();
        assert_relative_eq!(m.mean, p.a, max_relative = 1e-10);
        assert_relative_eq!(m.var, p.equilibrium_sigma2(), max_relative = 1e-10);
    }

    #[test]
    fn delta_density_is_degenerate() {
        let g = grid();
        let s = from_ln(&g, |x| if x == 0.0 { 0.0 } else { -700.0 });
        assert!(matches!(moments(&s, &g), Err(Error::DegenerateDensity { .. })));
    }

    #[test]
    fn gaussian_force_at_equilibrium_variance_is_omega_squared() {
        let p = params();
        let g = grid();
        let m = Moments { mean: 0.0, var: p.equilibrium_sigma2() };
        let f = gaussian_force_from_moments(m, &g, &p);
        for (fj, x) in f.iter().zip(g.positions()) {
            assert_relative_eq!(*fj, p.omega * p.omega * x, epsilon = 1e-15, max_relative = 1e-12);
        }
        let m = Moments { mean: 3.0, var: 5.0 };
        let f = gaussian_force_from_moments(m, &g, &p);
        assert_eq!(f[83], 0.0);
    }

    #[test]
    fn index_unit_formula_agrees() {
        // moments in grid-index units with the δx³ factor give the same force
        let p = params();
        let g = SpatialGrid::centered(0.37, 200).unwrap();
        let s = init_coherent_state(&p, &g, 0.0);
        let f = gaussian_fit_force(&s, &g, &p).unwrap();
        let m = moments(&s, &g).unwrap();
        let dx = g.dx();
        let (mean_i, sigma_i) = (m.mean / dx, m.var.sqrt() / dx);
        for (j, x) in g.positions().enumerate() {
            let x_i = x / dx;
            let legacy = p.d * p.d * (x_i - mean_i) / (sigma_i.powi(4) * dx.powi(3));
            assert_relative_eq!(f[j], legacy, epsilon = 1e-14, max_relative = 1e-10);
        }
    }

    #[test]
    fn gaussian_force_is_scale_free() {
        let p = params();
        let g = grid();
        let s = init_coherent_state(&p, &g, 0.4);
        let mut scaled = s.clone();
        for l in &mut scaled.ln_rho {
            *l += 0.3;
        }
        let a = gaussian_fit_force(&s, &g, &p).unwrap();
        let b = gaussian_fit_force(&scaled, &g, &p).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-12));
        }
    }

    #[test]
    fn log_gradient() {
        let g = grid();
        let h = fd_log_gradient(&from_ln(&g, |x| 0.25 * x - 2.0), &g);
        assert_eq!(h[0], 0.0);
        assert_eq!(h[159], 0.0);
        for hj in &h[1..159] {
            assert_relative_eq!(*hj, 0.25, max_relative = 1e-12);
        }
        assert!(fd_log_gradient(&from_ln(&g, |_| 4.0), &g).iter().all(|&h| h == 0.0));

        let p = params();
        let s = init_coherent_state(&p, &g, 0.0);
        let h = fd_log_gradient(&s, &g);
        for j in 1..159 {
            let x = g.position(j);
            assert_relative_eq!(h[j], -(p.omega / p.d) * (x - p.a), epsilon = 1e-12);
        }
    }

    #[test]
    fn quantum_potential() {
        let p = params();
        let g = grid();
        let b = 0.3;
        let h = fd_log_gradient(&from_ln(&g, |x| b * x), &g);
        let q = fd_quantum_potential(&h, &g, &p);
        for qj in &q[2..158] {
            assert_relative_eq!(*qj, -p.d * p.d * b * b / 2.0, max_relative = 1e-12);
        }
        let h = fd_log_gradient(&from_ln(&g, |_| -1.0), &g);
        assert!(fd_quantum_potential(&h, &g, &p).iter().all(|&q| q == 0.0));

        let s = init_coherent_state(&p, &g, 0.0);
        let q = fd_quantum_potential(&fd_log_gradient(&s, &g), &g, &p);
        let j = 88; // x = a
        assert_eq!(g.position(j), p.a);
        assert_relative_eq!(q[j], p.d * p.omega, max_relative = 1e-10);
    }

    #[test]
    fn fd_force_on_simple_densities() {
        let p = params();
        let g = grid();
        assert!(fd_quantum_force(&from_ln(&g, |x| -0.2 * x), &g, &p).iter().all(|f| f.abs() < 1e-12));
        assert!(fd_quantum_force(&from_ln(&g, |_| 2.0), &g, &p).iter().all(|&f| f == 0.0));

        let s = init_coherent_state(&p, &g, 0.0);
        let f = fd_quantum_force(&s, &g, &p);
        let gauss = gaussian_fit_force(&s, &g, &p).unwrap();
        let sigma = p.equilibrium_sigma2().sqrt();
        for j in 0..g.len() {
            if j < STENCIL_MARGIN || j >= g.len() - STENCIL_MARGIN {
                assert_eq!(f[j], 0.0);
            } else if (g.position(j) - p.a).abs() <= 3.0 * sigma {
                assert!((f[j] - gauss[j]).abs() <= 0.01 * gauss[j].abs().max(p.omega * p.omega * sigma * 1e-3));
            }
        }
    }

    #[test]
    fn pressure() {
        let mut p = params();
        let g = grid();
        let s = init_coherent_state(&p, &g, 0.0);
        assert!(pressure_force(&s, &g, &p).iter().all(|&f| f == 0.0));

        p.kp = 2.0;
        let f = pressure_force(&from_ln(&g, |x| 0.1 * x), &g, &p);
        for fj in &f[1..159] {
            assert_relative_eq!(*fj, -0.2, max_relative = 1e-12);
        }
        let f = pressure_force(&s, &g, &p);
        for j in 1..159 {
            let x = g.position(j);
            assert_relative_eq!(f[j], p.kp * p.omega / p.d * (x - p.a), epsilon = 1e-12);
        }
    }

    #[test]
    fn external() {
        let p = params();
        let g = SpatialGrid::new(-2.0, 1.0, 9).unwrap();
        let f = external_force(&g, &p);
        assert_eq!(f[2], 0.0);
        let q = PhysicalParams { omega: 2.0 * p.omega, ..p };
        let f2 = external_force(&g, &q);
        assert_relative_eq!(f2[5], 4.0 * f[5], max_relative = 1e-14);
        let g = SpatialGrid::new(p.a, 1.0, 7).unwrap();
        assert_relative_eq!(external_force(&g, &p)[0], -p.omega * p.omega * p.a);
    }

    #[test]
    fn rigid_transport_identity() {
        let p = params();
        let g = grid();
        let s = init_coherent_state(&p, &g, 0.0);
        let q = gaussian_fit_force(&s, &g, &p).unwrap();
        let e = external_force(&g, &p);
        let xbar = moments(&s, &g).unwrap().mean;
        for j in 0..g.len() {
            assert_relative_eq!(q[j] + e[j], -p.omega * p.omega * xbar, epsilon = 1e-10);
        }
    }
}
