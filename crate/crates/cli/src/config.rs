//! `key = value` configuration for caps and tolerances, plus the thread-count
//! environment variable.

use std::path::Path;

use ulamlab_core::Limits;

use crate::CliError;

pub const THREADS_ENV: &str = "ULAMLAB_THREADS";

/// Applies `key = value` lines to the default limits. Blank lines and lines
/// starting with `#` are skipped; keys are the [`Limits`] field names.
pub fn parse_limits(text: &str) -> Result<Limits, CliError> {
    let mut limits = Limits::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| CliError::Config(format!("line {}: {msg}: {raw:?}", lineno + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
        let (key, value) = (key.trim(), value.trim());
        let int = || value.parse::<u64>().map_err(|_| bad("expected an integer"));
        match key {
            "exact_cap" => limits.exact_cap = int()?,
            "perm_cap" => limits.perm_cap = int()? as usize,
            "walk_cap" => limits.walk_cap = int()? as usize,
            "series_cap" => limits.series_cap = int()? as usize,
            "mc_n_cap" => limits.mc_n_cap = int()? as usize,
            "mc_k_cap" => limits.mc_k_cap = int()? as usize,
            "contour_min_nodes" => limits.contour_min_nodes = int()? as usize,
            "contour_max_nodes" => limits.contour_max_nodes = int()? as usize,
            "contour_tol" => {
                limits.contour_tol = value.parse::<f64>().map_err(|_| bad("expected a number"))?
            }
            _ => return Err(bad("unknown key")),
        }
    }
    Ok(limits)
}

pub fn load_limits(path: Option<&Path>) -> Result<Limits, CliError> {
    match path {
        None => Ok(Limits::default()),
        Some(p) => parse_limits(&std::fs::read_to_string(p)?),
    }
}

/// Thread count from `ULAMLAB_THREADS`, if set.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{THREADS_ENV} must be a positive integer (got {v:?})"))),
        },
    }
}
