use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Constants defining one physical scenario.
///
/// `d` is the generalized quantum constant (it plays the role of ħ/2m but may
/// take any macroscopic value), `omega` the trap frequency, `a` the amplitude
/// of the packet-centre oscillation, `kp` the isentropic pressure amplitude
/// (a squared sound speed) and `mass` the total fluid mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub d: f64,
    pub omega: f64,
    pub a: f64,
    pub kp: f64,
    pub mass: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [("D", self.d), ("omega", self.omega), ("M", self.mass)];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let non_negative = [("a", self.a), ("kp", self.kp)];
        for (name, v) in non_negative {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be non-negative and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Variance D/ω of the non-spreading packet.
    pub fn equilibrium_sigma2(&self) -> f64 {
        self.d / self.omega
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Classical centre trajectory `a cos ωt`.
    pub fn center_at(&self, t: f64) -> f64 {
        self.a * (self.omega * t).cos()
    }
}
