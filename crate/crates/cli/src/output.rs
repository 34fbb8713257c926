//! CSV writers. Floats are written in their shortest round-trip form
//! (`{:?}`), so equal runs produce equal bytes and values parse back exactly.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use qfluid_core::{RunRecord, RunSummary, SpatialGrid, Snapshot};

pub const DIAGNOSTICS_HEADER: &str = "step,t,mean,var,mass,max_abs_V,center_energy,status";
pub const SNAPSHOT_HEADER: &str = "j,x,rho,V";
pub const SUMMARY_HEADER: &str =
    "steps_survived,diverged,max_center_error,max_var_error,final_center_error,final_var_error";

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

pub fn write_diagnostics(path: &Path, record: &RunRecord) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{DIAGNOSTICS_HEADER}")?;
    for r in &record.rows {
        writeln!(
            w,
            "{},{:?},{:?},{:?},{:?},{:?},{:?},{}",
            r.step, r.t, r.mean, r.var, r.mass, r.max_abs_v, r.center_energy, r.status
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_snapshots(dir: &Path, record: &RunRecord) -> Result<()> {
    if record.snapshots.is_empty() {
        return Ok(());
    }
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for snap in &record.snapshots {
        write_snapshot(&dir.join(format!("step_{:05}.csv", snap.step)), snap, &record.grid)?;
    }
    Ok(())
}

fn write_snapshot(path: &Path, snap: &Snapshot, grid: &SpatialGrid) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{SNAPSHOT_HEADER}")?;
    for (j, x) in grid.positions().enumerate() {
        writeln!(w, "{j},{x:?},{:?},{:?}", snap.state.ln_rho[j].exp(), snap.state.v[j])?;
    }
    w.flush()?;
    Ok(())
}

pub fn summary_fields(s: &RunSummary) -> String {
    format!(
        "{},{},{:?},{:?},{:?},{:?}",
        s.steps_survived, s.diverged, s.max_center_error, s.max_var_error, s.final_center_error, s.final_var_error
    )
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
