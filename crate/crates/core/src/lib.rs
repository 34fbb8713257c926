//! Quantum-like feedback hydrodynamics in one dimension.
//!
//! A classical compressible fluid in a harmonic trap is driven, step by step,
//! by a generalized quantum force computed from its own measured density.
//! The crate provides the fluid integrator and feedback loop, two quantum
//! force estimators, the closed-form oscillating packet used as ground truth,
//! a direct Schrödinger solver for cross-validation, and run diagnostics.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod force;
pub mod grid;
pub mod integrator;
pub mod oracle;
pub mod params;
pub mod presets;
pub mod reference;
pub mod state;

pub use config::{Estimator, NoiseMode, RunConfig};
pub use diagnostics::{RunRecord, RunSummary, Snapshot, StepRow, StepStatus, Termination};
pub use error::{Error, Result};
pub use force::{ForceField, Moments};
pub use grid::{make_grid, SpatialGrid};
pub use integrator::{lax_step, perturb_density, run, run_from, StepOutcome};
pub use oracle::OracleWave;
pub use params::PhysicalParams;
pub use presets::{Preset, Scenario};
pub use reference::{cn_step, fluid_to_wave, run_reference, wave_to_fluid, WaveState};
pub use state::{init_coherent_state, mass, FluidState};
