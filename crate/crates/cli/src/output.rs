//! Rendering of reports as CSV or versioned JSON.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::run::Report;

pub const SCHEMA: u32 = 1;

/// `ψ(t,x) = ∫dp e^{-iE(p)t + ipx} φ(p)` with `ħ = 1`.
pub const CONVENTIONS: &str =
    "hbar=1; psi(t,x)=int dp exp(-i E(p) t + i p x) phi(p); norm of psi(t) is 2pi int |phi|^2";

pub fn to_json(config: &RunConfig, report: &Report) -> Value {
    let results: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = report
                .columns
                .iter()
                .map(|c| c.to_string())
                .zip(row.iter().cloned())
                .collect();
            Value::Object(obj)
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "version": timeobs_core::VERSION,
        "conventions": CONVENTIONS,
        "config": config,
        "summary": report.summary,
        "results": results,
    })
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn to_csv(report: &Report) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(&report.columns).map_err(io)?;
    for row in &report.rows {
        w.write_record(row.iter().map(cell)).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn render(config: &RunConfig, report: &Report) -> Result<Vec<u8>, CliError> {
    match config.format {
        Format::Csv => to_csv(report),
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(&to_json(config, report))
                .map_err(|e| CliError::Io(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
    }
}

/// Writes to the configured path, or to stdout when none is set.
pub fn emit(config: &RunConfig, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match &config.output {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).map_err(io)?;
            out.flush().map_err(io)
        }
    }
}
