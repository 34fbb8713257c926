//! Scenario assembly from presets, `key = value` files and flags.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use qfluid_core::{Estimator, NoiseMode, Preset, Scenario, SpatialGrid};

/// Keys accepted in config files and as sweep parameters, in print order.
pub const KEYS: [&str; 16] = [
    "preset",
    "steps",
    "dt",
    "substeps",
    "dx",
    "n",
    "D",
    "omega",
    "a",
    "kp",
    "estimator",
    "noise",
    "noise_amp",
    "seed",
    "snapshot_every",
    "rho_floor",
];

fn normalize(key: &str) -> String {
    let k = key.trim().replace('-', "_");
    if k.eq_ignore_ascii_case("d") {
        "D".into()
    } else {
        k
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| anyhow!("invalid value `{value}` for `{key}`"))
}

/// Sets one scenario field from its textual form. `preset` is not accepted
/// here because it replaces the whole scenario; see [`resolve`].
pub fn apply(s: &mut Scenario, key: &str, value: &str) -> Result<()> {
    let key = normalize(key);
    let v = value.trim();
    match key.as_str() {
        "steps" => s.config.steps = num(&key, v)?,
        "dt" => s.config.dt = num(&key, v)?,
        "substeps" => s.config.substeps = num(&key, v)?,
        "dx" => s.grid = SpatialGrid::centered(num(&key, v)?, s.grid.len())?,
        "n" => s.grid = SpatialGrid::centered(s.grid.dx(), num(&key, v)?)?,
        "D" => s.params.d = num(&key, v)?,
        "omega" => s.params.omega = num(&key, v)?,
        "a" => s.params.a = num(&key, v)?,
        "kp" => s.params.kp = num(&key, v)?,
        "estimator" => s.config.estimator = v.parse::<Estimator>()?,
        "noise" => s.config.noise = v.parse::<NoiseMode>()?,
        "noise_amp" => s.config.noise_amplitude = num(&key, v)?,
        "seed" => s.config.seed = num(&key, v)?,
        "snapshot_every" => s.config.snapshot_every = num(&key, v)?,
        "rho_floor" => s.config.rho_floor = num(&key, v)?,
        "preset" => bail!("`preset` cannot be changed here"),
        other => bail!("unknown setting `{other}`"),
    }
    Ok(())
}

/// Parses flat `key = value` text. Blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected `key = value`", i + 1))?;
        let k = normalize(k);
        if !KEYS.contains(&k.as_str()) {
            bail!("line {}: unknown setting `{k}`", i + 1);
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

/// Builds the scenario: base (preset or `base`), then file settings, then
/// flag settings, each later source overriding earlier ones.
pub fn resolve(
    base: Scenario,
    preset_flag: Option<&str>,
    file: Option<&Path>,
    flags: &[(&str, String)],
) -> Result<(Scenario, Option<Preset>)> {
    let file_settings = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => Vec::new(),
    };
    let preset_name =
        preset_flag.map(str::to_string).or_else(|| file_settings.iter().find(|(k, _)| k == "preset").map(|(_, v)| v.clone()));
    let preset = preset_name.as_deref().map(str::parse::<Preset>).transpose()?;
    let mut s = preset.map(|p| p.scenario()).unwrap_or(base);
    for (k, v) in file_settings.iter().filter(|(k, _)| k != "preset") {
        apply(&mut s, k, v)?;
    }
    for (k, v) in flags {
        apply(&mut s, k, v)?;
    }
    s.validate()?;
    Ok((s, preset))
}

/// Resolved settings in config-file syntax; feeding the text back in
/// reproduces the same scenario.
pub fn render(s: &Scenario, preset: Option<Preset>) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    if let Some(p) = preset {
        line("# preset", p.to_string());
    }
    line("steps", s.config.steps.to_string());
    line("dt", format!("{:?}", s.config.dt));
    line("substeps", s.config.substeps.to_string());
    line("dx", format!("{:?}", s.grid.dx()));
    line("n", s.grid.len().to_string());
    line("D", format!("{:?}", s.params.d));
    line("omega", format!("{:?}", s.params.omega));
    line("a", format!("{:?}", s.params.a));
    line("kp", format!("{:?}", s.params.kp));
    line("estimator", s.config.estimator.to_string());
    line("noise", s.config.noise.to_string());
    line("noise_amp", format!("{:?}", s.config.noise_amplitude));
    line("seed", s.config.seed.to_string());
    line("snapshot_every", s.config.snapshot_every.to_string());
    line("rho_floor", format!("{:?}", s.config.rho_floor));
    out
}
