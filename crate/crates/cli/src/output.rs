use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use landau_core::{GridSpec, PhysicalParams};

/// Seventeen significant digits, so every value round-trips exactly.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Buffered CSV sink over a file or stdout.
pub struct Csv {
    inner: Box<dyn Write>,
}

impl Csv {
    pub fn create(path: Option<&Path>, header: &[&str]) -> io::Result<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        let mut csv = Csv { inner };
        csv.raw(&header.join(","))?;
        Ok(csv)
    }

    pub fn raw(&mut self, line: &str) -> io::Result<()> {
        writeln!(self.inner, "{line}")
    }

    pub fn row(&mut self, cells: &[String]) -> io::Result<()> {
        self.raw(&cells.join(","))
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

pub fn derived_constants(p: &PhysicalParams) -> Value {
    json!({
        "omega_c": p.omega_c(),
        "omega_l": p.omega_l(),
        "l_b": p.l_b(),
    })
}

pub fn grid_json(g: &GridSpec) -> Value {
    json!({
        "x_min": g.x_min,
        "x_max": g.x_max,
        "y_min": g.y_min,
        "y_max": g.y_max,
        "nx": g.nx,
        "ny": g.ny,
        "dx": g.dx(),
        "dy": g.dy(),
    })
}

/// Writes `{config, derived, results}` next to the CSV. Nothing is written
/// when the CSV went to stdout.
pub fn write_sidecar<C: Serialize>(
    csv: Option<&Path>,
    config: &C,
    derived: Value,
    results: Value,
) -> anyhow::Result<()> {
    let Some(csv) = csv else {
        return Ok(());
    };
    let doc = json!({
        "config": config,
        "derived": derived,
        "results": results,
    });
    let mut f = BufWriter::new(File::create(sidecar_path(csv))?);
    serde_json::to_writer_pretty(&mut f, &doc)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}
