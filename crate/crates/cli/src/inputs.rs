use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context, Result};

use steerbound::quantum::builtin::builtin_set;
use steerbound::quantum::io::{parse_measurement_set, parse_state};
use steerbound::quantum::{werner_state, DensityState, MeasurementSet, WernerFamily};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_set(path: &Path) -> Result<MeasurementSet> {
    let text = read(path)?;
    parse_measurement_set(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

pub fn load_state(path: &Path) -> Result<DensityState> {
    let text = read(path)?;
    parse_state(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

/// A set named either by file or by builtin; the file wins. Records the
/// source in `inputs`.
pub fn resolve_set(
    file: Option<&Path>,
    builtin: Option<&str>,
    role: &str,
    inputs: &mut Vec<String>,
) -> Result<Option<MeasurementSet>> {
    match (file, builtin) {
        (Some(p), _) => {
            inputs.push(p.display().to_string());
            load_set(p).map(Some)
        }
        (None, Some(name)) => {
            inputs.push(format!("builtin:{name}"));
            builtin_set(name).map(Some).map_err(|e| anyhow!("{role} set: {e}"))
        }
        (None, None) => Ok(None),
    }
}

/// Parses `qubit:0.8` / `qutrit:0.4`.
pub fn parse_werner(spec: &str) -> Result<(WernerFamily, f64, DensityState)> {
    let (family, p) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("expected FAMILY:P for --werner, got '{spec}'"))?;
    let family: WernerFamily = family.parse().map_err(|e| anyhow!("{e}"))?;
    let p: f64 = p.trim().parse().map_err(|_| anyhow!("bad Werner weight '{p}'"))?;
    let state = werner_state(family, p).map_err(|e| anyhow!("{e}"))?;
    Ok((family, p, state))
}

pub fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| anyhow!("bad {what} entry '{}'", s.trim())))
        .collect()
}

/// Rows separated by ';', entries by ','.
pub fn parse_matrix(text: &str, what: &str) -> Result<Vec<Vec<f64>>> {
    text.split(';').map(|row| parse_list(row, what)).collect()
}
