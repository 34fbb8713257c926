use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How the quantum force is obtained from the measured density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    /// Mean and variance of the density, analytic force of the fitted Gaussian.
    GaussianFit,
    /// Stencil chain ln ρ → H → Q → F_Q.
    FiniteDifference,
    /// Closed-form force of the exact coherent packet (ignores the density).
    OracleExact,
    /// No quantum force: classical fluid in the trap.
    None,
}

impl Estimator {
    pub const ALL: [Estimator; 4] =
        [Estimator::GaussianFit, Estimator::FiniteDifference, Estimator::OracleExact, Estimator::None];

    pub fn as_str(&self) -> &'static str {
        match self {
            Estimator::GaussianFit => "gauss",
            Estimator::FiniteDifference => "fd",
            Estimator::OracleExact => "oracle",
            Estimator::None => "none",
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauss" | "gaussian_fit" | "gaussian-fit" => Ok(Estimator::GaussianFit),
            "fd" | "finite_difference" | "finite-difference" => Ok(Estimator::FiniteDifference),
            "oracle" | "oracle_exact" | "oracle-exact" => Ok(Estimator::OracleExact),
            "none" => Ok(Estimator::None),
            other => Err(Error::InvalidConfig(format!("unknown estimator `{other}`"))),
        }
    }
}

/// When multiplicative `exp(α)` density noise is injected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseMode {
    None,
    Initial,
    PerStep,
}

impl NoiseMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseMode::None => "none",
            NoiseMode::Initial => "initial",
            NoiseMode::PerStep => "per-step",
        }
    }
}

impl fmt::Display for NoiseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(NoiseMode::None),
            "initial" => Ok(NoiseMode::Initial),
            "per-step" | "per_step" | "perstep" => Ok(NoiseMode::PerStep),
            other => Err(Error::InvalidConfig(format!("unknown noise mode `{other}`"))),
        }
    }
}

/// Schedule of one feedback-loop run.
///
/// `dt` is the interval between recorded steps (the measurement cadence).
/// Each recorded step is integrated as `substeps` full
/// measure/compute/apply iterations of length `dt / substeps`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dt: f64,
    pub steps: usize,
    pub substeps: usize,
    pub estimator: Estimator,
    pub noise: NoiseMode,
    /// Upper bound of α in the `exp(α)` perturbation, α ~ U[0, amplitude].
    pub noise_amplitude: f64,
    pub seed: u64,
    /// Density snapshot cadence in recorded steps; 0 disables snapshots.
    pub snapshot_every: usize,
    /// Lower clamp on ρ as a fraction of the current peak density.
    pub rho_floor: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dt: 1.0,
            steps: 64,
            substeps: 32,
            estimator: Estimator::GaussianFit,
            noise: NoiseMode::None,
            noise_amplitude: 1.0,
            seed: 0,
            snapshot_every: 0,
            rho_floor: 1e-200,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if self.steps == 0 {
            return Err(Error::InvalidConfig("steps must be at least 1".into()));
        }
        if self.substeps == 0 {
            return Err(Error::InvalidConfig("substeps must be at least 1".into()));
        }
        if !(self.noise_amplitude >= 0.0) || !self.noise_amplitude.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "noise amplitude must be non-negative, got {}",
                self.noise_amplitude
            )));
        }
        if !(self.rho_floor > 0.0 && self.rho_floor < 1.0) {
            return Err(Error::InvalidConfig(format!("rho_floor must lie in (0, 1), got {}", self.rho_floor)));
        }
        Ok(())
    }

    /// Integrator step length.
    pub fn inner_dt(&self) -> f64 {
        self.dt / self.substeps as f64
    }
}
