//! Report output shared by the subcommands.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use confcolor::arbdefective::ArbdefectiveConstants;
use confcolor::lca::{C_GENERAL, C_HIGH_RATIO};
use confcolor::linial::LINIAL_K;
use serde::Serialize;
use serde_json::{json, Value};

/// Frozen constants, embedded in every report.
pub fn constants() -> Value {
    let c = ArbdefectiveConstants::default();
    let base_degree = confcolor::SolverConfig::default().base_degree;
    json!({
        "linial_k": LINIAL_K,
        "c_k": c.c_k,
        "c_a": c.c_a,
        "base_degree": base_degree,
        "lca_c_general": C_GENERAL,
        "lca_c_high_ratio": C_HIGH_RATIO,
    })
}

/// Pretty JSON to `path`, or to stdout.
pub fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(std::io::stdout().write_all(text.as_bytes())?),
    }
}

/// CSV rows to `path`, or to stdout.
pub fn write_csv<T: Serialize>(path: &Option<PathBuf>, rows: &[T]) -> Result<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
