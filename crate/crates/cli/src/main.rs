//! `qfluid`: run, compare and sweep feedback-hydrodynamics experiments.

mod output;
mod settings;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qfluid_core::diagnostics::{l2_density_distance, summarize};
use qfluid_core::state::packet_fits;
use qfluid_core::{init_coherent_state, run, run_reference, Estimator, Preset, RunRecord, Scenario, Termination};
use rayon::prelude::*;

const EXIT_USAGE: u8 = 1;
const EXIT_DIVERGED: u8 = 2;
const EXIT_COMPARE_FAILED: u8 = 3;
const DEFAULT_OUT: &str = "qfluid-out";
const COMPARE_STEPS: usize = 16;

#[derive(Parser)]
#[command(name = "qfluid", version, about = "Quantum-like feedback hydrodynamics in one dimension")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one feedback simulation and write its diagnostics.
    Run(ScenarioArgs),
    /// Run the feedback loop and a reference solver from the same packet and
    /// compare their densities step by step.
    Compare(CompareArgs),
    /// Repeat a run over several values of one setting.
    Sweep(SweepArgs),
    /// List the built-in presets.
    Presets,
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Start from a named preset (see `qfluid presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Flat `key = value` settings file; flags override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Recorded steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Time between recorded steps.
    #[arg(long)]
    dt: Option<f64>,
    /// Integrator updates per recorded step.
    #[arg(long)]
    substeps: Option<usize>,
    /// Grid spacing (the grid is centred on x = 0).
    #[arg(long)]
    dx: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    n: Option<usize>,
    /// Diffusion-like constant D.
    #[arg(long = "D", value_name = "D")]
    d: Option<f64>,
    /// Trap angular frequency.
    #[arg(long)]
    omega: Option<f64>,
    /// Initial displacement of the packet centre.
    #[arg(long)]
    a: Option<f64>,
    /// Pressure amplitude.
    #[arg(long)]
    kp: Option<f64>,
    #[arg(long, value_parser = ["gauss", "fd", "oracle", "none"])]
    estimator: Option<String>,
    #[arg(long, value_parser = ["none", "initial", "per-step"])]
    noise: Option<String>,
    /// Upper bound of the uniform log-density perturbation.
    #[arg(long = "noise-amp")]
    noise_amp: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write a density snapshot every N recorded steps (0 = never).
    #[arg(long = "snapshot-every")]
    snapshot_every: Option<usize>,
    /// Output directory [default: $QFLUID_OUT, else ./qfluid-out].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the resolved settings and exit.
    #[arg(long = "print-config")]
    print_config: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Largest acceptable relative L2 density distance.
    #[arg(long, default_value_t = 0.05)]
    tol: f64,
    /// Solver to compare against.
    #[arg(long, default_value = "schrodinger", value_parser = ["schrodinger", "feedback"])]
    reference: String,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Setting to vary, e.g. D, kp, noise_amp, seed.
    #[arg(long)]
    param: String,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', conflicts_with = "range")]
    values: Vec<String>,
    /// Evenly spaced values as `start:stop:count`.
    #[arg(long)]
    range: Option<String>,
}

impl ScenarioArgs {
    fn flag_settings(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut push = |k: &'static str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k, v));
            }
        };
        push("steps", self.steps.map(|v| v.to_string()));
        push("dt", self.dt.map(|v| format!("{v:?}")));
        push("substeps", self.substeps.map(|v| v.to_string()));
        push("dx", self.dx.map(|v| format!("{v:?}")));
        push("n", self.n.map(|v| v.to_string()));
        push("D", self.d.map(|v| format!("{v:?}")));
        push("omega", self.omega.map(|v| format!("{v:?}")));
        push("a", self.a.map(|v| format!("{v:?}")));
        push("kp", self.kp.map(|v| format!("{v:?}")));
        push("estimator", self.estimator.clone());
        push("noise", self.noise.clone());
        push("noise_amp", self.noise_amp.map(|v| format!("{v:?}")));
        push("seed", self.seed.map(|v| v.to_string()));
        push("snapshot_every", self.snapshot_every.map(|v| v.to_string()));
        out
    }

    fn resolve(&self, base: Scenario) -> Result<(Scenario, Option<Preset>)> {
        settings::resolve(base, self.preset.as_deref(), self.config.as_deref(), &self.flag_settings())
    }

    fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os("QFLUID_OUT").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    }
}

/// Failure classes that map onto distinct exit codes.
enum Failure {
    Usage(anyhow::Error),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn usage<T>(r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(Failure::Usage)
}

fn prepare_out(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn warn_if_cramped(s: &Scenario) {
    if !packet_fits(&s.params, &s.grid, 0.0, 5.0) {
        eprintln!("warning: the packet's ±5σ excursion does not fit inside the grid");
    }
}

fn cmd_run(args: &ScenarioArgs) -> std::result::Result<u8, Failure> {
    let (s, preset) = usage(args.resolve(Scenario::default()))?;
    if args.print_config {
        print!("{}", settings::render(&s, preset));
        return Ok(0);
    }
    warn_if_cramped(&s);
    let record = run(&s.config, &s.params, &s.grid).map_err(|e| Failure::Usage(e.into()))?;
    let dir = args.out_dir();
    prepare_out(&dir)?;
    output::write_diagnostics(&dir.join("diagnostics.csv"), &record)?;
    output::write_snapshots(&dir.join("snapshots"), &record)?;
    output::write_text(&dir.join("config.txt"), &settings::render(&s, preset))?;
    let summary = summarize(&record, &s.params);
    let line = output::summary_fields(&summary);
    output::write_text(&dir.join("summary.csv"), &format!("{}\n{line}\n", output::SUMMARY_HEADER))?;
    println!("{}", output::SUMMARY_HEADER);
    println!("{line}");
    if let Termination::Diverged { step, status } = record.termination {
        eprintln!("diverged at step {step} ({status})");
        return Ok(EXIT_DIVERGED);
    }
    Ok(0)
}

fn cmd_compare(args: &CompareArgs) -> std::result::Result<u8, Failure> {
    let mut base = Scenario::default();
    base.config.steps = COMPARE_STEPS;
    base.config.estimator = Estimator::OracleExact;
    let (mut s, preset) = usage(args.scenario.resolve(base))?;
    if args.scenario.print_config {
        print!("{}", settings::render(&s, preset));
        println!("tol = {}", args.tol);
        return Ok(0);
    }
    if !(args.tol >= 0.0) {
        return Err(Failure::Usage(anyhow::anyhow!("--tol must be non-negative")));
    }
    warn_if_cramped(&s);
    s.config.snapshot_every = s.config.snapshot_every.max(1);
    let feedback = run(&s.config, &s.params, &s.grid).map_err(|e| Failure::Usage(e.into()))?;
    let reference: RunRecord = match args.reference.as_str() {
        "feedback" => run(&s.config, &s.params, &s.grid),
        _ => {
            let init = init_coherent_state(&s.params, &s.grid, 0.0);
            run_reference(&init, &s.config, &s.params, &s.grid)
        }
    }
    .map_err(|e| Failure::Other(e.into()))?;

    let dir = args.scenario.out_dir();
    prepare_out(&dir)?;
    output::write_diagnostics(&dir.join("feedback.csv"), &feedback)?;
    output::write_diagnostics(&dir.join("reference.csv"), &reference)?;
    let distances = l2_density_distance(&feedback, &reference);
    let mut table = String::from("step,t,distance\n");
    for &(step, d) in &distances {
        table.push_str(&format!("{step},{:?},{d:?}\n", step as f64 * s.config.dt));
    }
    output::write_text(&dir.join("distance.csv"), &table)?;
    print!("{table}");

    let worst = distances.iter().map(|p| p.1).fold(0.0, f64::max);
    if feedback.diverged() {
        println!("FAIL feedback run diverged after {} steps", feedback.steps_survived());
        return Ok(EXIT_DIVERGED);
    }
    let pass = worst <= args.tol;
    println!("{} max distance {worst:?} (tol {:?})", if pass { "PASS" } else { "FAIL" }, args.tol);
    Ok(if pass { 0 } else { EXIT_COMPARE_FAILED })
}

fn sweep_values(args: &SweepArgs) -> Result<Vec<String>> {
    if let Some(range) = &args.range {
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, count] = parts[..] else {
            bail!("--range expects start:stop:count");
        };
        let (start, stop): (f64, f64) = (start.trim().parse()?, stop.trim().parse()?);
        let count: usize = count.trim().parse()?;
        return Ok(match count {
            0 => Vec::new(),
            1 => vec![format!("{start:?}")],
            _ => (0..count).map(|i| format!("{:?}", start + (stop - start) * i as f64 / (count - 1) as f64)).collect(),
        });
    }
    Ok(args.values.iter().map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect())
}

fn cmd_sweep(args: &SweepArgs) -> std::result::Result<u8, Failure> {
    let (s, preset) = usage(args.scenario.resolve(Scenario::default()))?;
    let values = usage(sweep_values(args))?;
    if values.is_empty() {
        return Err(Failure::Usage(anyhow::anyhow!("the sweep range is empty")));
    }
    let mut scenarios = Vec::with_capacity(values.len());
    for v in &values {
        let mut sv = s.clone();
        usage(settings::apply(&mut sv, &args.param, v))?;
        usage(sv.validate().map_err(Into::into))?;
        scenarios.push(sv);
    }
    if args.scenario.print_config {
        print!("{}", settings::render(&s, preset));
        println!("# sweep {} over {}", args.param, values.join(","));
        return Ok(0);
    }
    let rows: Vec<std::result::Result<String, qfluid_core::Error>> = scenarios
        .par_iter()
        .map(|sv| {
            let rec = run(&sv.config, &sv.params, &sv.grid)?;
            Ok(output::summary_fields(&summarize(&rec, &sv.params)))
        })
        .collect();
    let mut table = format!("{},{}\n", args.param, output::SUMMARY_HEADER);
    for (v, row) in values.iter().zip(rows) {
        let row = row.unwrap_or_else(|e| {
            eprintln!("{} = {v}: run could not start: {e}", args.param);
            "0,true,NaN,NaN,NaN,NaN".to_string()
        });
        table.push_str(&format!("{v},{row}\n"));
    }
    let dir = args.scenario.out_dir();
    prepare_out(&dir)?;
    output::write_text(&dir.join("sweep.csv"), &table)?;
    print!("{table}");
    Ok(0)
}

fn cmd_presets() -> u8 {
    for p in Preset::ALL {
        let s = p.scenario();
        println!(
            "{:<5} estimator={:<6} noise={:<8} kp={:<3} steps={:<3} {}",
            p.name(),
            s.config.estimator,
            s.config.noise,
            s.params.kp,
            s.config.steps,
            p.description()
        );
    }
    0
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Presets => Ok(cmd_presets()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
