//! Output plumbing shared by the subcommands.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::args::OutputArgs;

pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration; exit status 2.
    Usage(String),
    /// A computation failed; exit status 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<modspace::Error> for CliError {
    fn from(e: modspace::Error) -> Self {
        match e {
            modspace::Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn write_to(path: Option<&Path>, body: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Failed(format!("cannot write to stdout: {e}"))),
    }
}

pub fn emit(out: &OutputArgs, body: &str) -> CliResult<()> {
    write_to(out.out.as_deref(), body)
}

pub fn json<T: Serialize>(doc: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| CliError::Failed(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Header row plus one row per record.
pub fn csv<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Failed(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Failed(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Failed(e.to_string()))
}

pub fn check_power_of_two(name: &str, n: usize) -> CliResult<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(usage(format!("--{name} must be a power of two of at least 2, got {n}")));
    }
    Ok(())
}

pub fn check_positive(name: &str, v: f64) -> CliResult<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(usage(format!("--{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

/// Positive values, strictly increasing when `increasing` is set.
pub fn check_grid(name: &str, values: &[f64], increasing: bool) -> CliResult<()> {
    if values.is_empty() {
        return Err(usage(format!("--{name} needs at least one value")));
    }
    for &v in values {
        check_positive(name, v)?;
    }
    if increasing && !values.windows(2).all(|p| p[0] < p[1]) {
        return Err(usage(format!("--{name} must be strictly increasing")));
    }
    Ok(())
}
