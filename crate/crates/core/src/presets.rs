//! Default scenario and the named experiment presets `fig1` to `fig7`.
//!
//! The default scenario is expressed in grid cells: σ = 4 cells, centre
//! amplitude a = 8 cells, 64 recorded steps per oscillation period, so the
//! advective CFL number is aω·δt/δx ≈ 0.79. One cell is 10 length units,
//! which fixes the scale of the pressure amplitude k_p (a squared velocity).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::config::{Estimator, NoiseMode, RunConfig};
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::params::PhysicalParams;

pub const DEFAULT_DX: f64 = 10.0;
pub const DEFAULT_N: usize = 160;
pub const STEPS_PER_PERIOD: usize = 64;
pub const SIGMA_CELLS: f64 = 4.0;
pub const AMPLITUDE_CELLS: f64 = 8.0;
pub const DEFAULT_SEED: u64 = 2007;

/// Grid, physical parameters and run schedule of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub grid: SpatialGrid,
    pub params: PhysicalParams,
    pub config: RunConfig,
}

impl Default for Scenario {
    fn default() -> Self {
        let dx = DEFAULT_DX;
        let dt = 1.0;
        let omega = 2.0 * PI / (STEPS_PER_PERIOD as f64 * dt);
        let sigma = SIGMA_CELLS * dx;
        let params = PhysicalParams { d: sigma * sigma * omega, omega, a: AMPLITUDE_CELLS * dx, kp: 0.0, mass: 1.0 };
        let grid = SpatialGrid::centered(dx, DEFAULT_N).expect("default grid is valid");
        let config = RunConfig { dt, steps: STEPS_PER_PERIOD, seed: DEFAULT_SEED, ..RunConfig::default() };
        Self { grid, params, config }
    }
}

impl Scenario {
    /// Same physics with δx and δt halved (twice the points over the same
    /// extent, twice the recorded steps over the same duration).
    pub fn refined(&self) -> Self {
        let mut config = self.config.clone();
        config.dt *= 0.5;
        config.steps *= 2;
        config.snapshot_every *= 2;
        Self { grid: self.grid.refined(), params: self.params, config }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.config.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl Preset {
    pub const ALL: [Preset; 7] =
        [Preset::Fig1, Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig5, Preset::Fig6, Preset::Fig7];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Preset::Fig1 => "Gaussian-fit force, exact initial packet, 1.2 periods",
            Preset::Fig2 => "Gaussian-fit force, initial exp(U[0,1]) density noise, one period",
            Preset::Fig3 => "Gaussian-fit force, exp(U[0,1]) density noise every step, 25 steps",
            Preset::Fig4 => "Gaussian-fit force with pressure k_p = 5, half a period",
            Preset::Fig5 => "Gaussian-fit force with pressure k_p = 1, one period",
            Preset::Fig6 => "finite-difference force, quarter period",
            Preset::Fig7 => "finite-difference force with pressure k_p = 1, 13 steps",
        }
    }

    pub fn scenario(&self) -> Scenario {
        let mut s = Scenario::default();
        let (estimator, noise, kp, steps) = match self {
            Preset::Fig1 => (Estimator::GaussianFit, NoiseMode::None, 0.0, 77),
            Preset::Fig2 => (Estimator::GaussianFit, NoiseMode::Initial, 0.0, 64),
            Preset::Fig3 => (Estimator::GaussianFit, NoiseMode::PerStep, 0.0, 25),
            Preset::Fig4 => (Estimator::GaussianFit, NoiseMode::None, 5.0, 32),
            Preset::Fig5 => (Estimator::GaussianFit, NoiseMode::None, 1.0, 64),
            Preset::Fig6 => (Estimator::FiniteDifference, NoiseMode::None, 0.0, 16),
            Preset::Fig7 => (Estimator::FiniteDifference, NoiseMode::None, 1.0, 13),
        };
        s.config.estimator = estimator;
        s.config.noise = noise;
        s.config.steps = steps;
        s.params.kp = kp;
        s
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown preset `{s}`")))
    }
}
