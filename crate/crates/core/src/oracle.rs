//! Closed-form oscillating wave packet of the harmonic trap.
//!
//! The packet keeps the variance D/ω at all times while its centre follows the
//! classical trajectory `a cos ωt`. Everything here is a pure function of
//! `(params, x, t)` and serves as ground truth for the numerical paths.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::params::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleWave {
    pub params: PhysicalParams,
}

impl OracleWave {
    pub fn new(params: PhysicalParams) -> Self {
        Self { params }
    }

    fn offset(&self, x: f64, t: f64) -> f64 {
        x - self.params.center_at(t)
    }

    /// Phase θ of ψ (unwrapped, as a continuous function of x and t).
    pub fn phase(&self, x: f64, t: f64) -> f64 {
        let PhysicalParams { d, omega, a, .. } = self.params;
        let wt = omega * t;
        -(0.5 * wt + omega / (2.0 * d) * a * x * wt.sin() - omega / (8.0 * d) * a * a * (2.0 * wt).sin())
    }

    /// Action S = 2Dθ.
    pub fn action(&self, x: f64, t: f64) -> f64 {
        2.0 * self.params.d * self.phase(x, t)
    }

    pub fn psi(&self, x: f64, t: f64) -> Complex64 {
        let PhysicalParams { d, omega, .. } = self.params;
        let amp = (omega / (2.0 * PI * d)).powf(0.25) * (-omega / (4.0 * d) * self.offset(x, t).powi(2)).exp();
        Complex64::from_polar(amp, self.phase(x, t))
    }

    pub fn density(&self, x: f64, t: f64) -> f64 {
        let PhysicalParams { d, omega, .. } = self.params;
        (omega / (2.0 * PI * d)).sqrt() * (-omega / (2.0 * d) * self.offset(x, t).powi(2)).exp()
    }

    pub fn velocity(&self, t: f64) -> f64 {
        let PhysicalParams { omega, a, .. } = self.params;
        -a * omega * (omega * t).sin()
    }

    pub fn quantum_potential(&self, x: f64, t: f64) -> f64 {
        let PhysicalParams { d, omega, .. } = self.params;
        d * omega - 0.5 * omega * omega * self.offset(x, t).powi(2)
    }

    /// Quantum force −∂Q/∂x.
    pub fn quantum_force(&self, x: f64, t: f64) -> f64 {
        let omega = self.params.omega;
        omega * omega * self.offset(x, t)
    }

    /// External trap potential φ = ½ω²x².
    pub fn external_potential(&self, x: f64) -> f64 {
        0.5 * self.params.omega.powi(2) * x * x
    }

    /// E(x, t) = ½V² + φ + Q in closed form.
    pub fn energy(&self, x: f64, t: f64) -> f64 {
        let PhysicalParams { d, omega, a, .. } = self.params;
        let wt = omega * t;
        d * omega + a * omega * omega * x * wt.cos() - 0.5 * a * a * omega * omega * (2.0 * wt).cos()
    }

    /// Energy at the packet centre: zero-point term Dω plus the pendulum energy.
    pub fn center_energy(&self) -> f64 {
        let PhysicalParams { d, omega, a, .. } = self.params;
        d * omega + 0.5 * a * a * omega * omega
    }
}
