//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys use the long
//! flag names with `_` for `-`; unknown or repeated keys are errors.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;

use crate::{config_error, CliError};

pub const KNOWN_KEYS: &[&str] = &[
    "n", "eps", "trunc", "theorem", "r_grid", "r_min", "r_max", "r_points", "a_min", "a_max", "a_points",
    "profile", "output", "format", "domain", "r", "q", "tol", "max_iter", "damping", "nodes", "radial_order",
    "grading", "init", "a", "seed",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_error(format!("line {}: expected key=value", k + 1)))?;
            let key = key.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(config_error(format!("line {}: unknown key {key:?}", k + 1)));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(config_error(format!("line {}: repeated key {key:?}", k + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.raw(key)
            .map(|v| v.parse().map_err(|_| config_error(format!("cannot parse {key} = {v:?}"))))
            .transpose()
    }

    pub fn get_enum<T: ValueEnum>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.raw(key)
            .map(|v| T::from_str(v, true).map_err(|_| config_error(format!("invalid {key} = {v:?}"))))
            .transpose()
    }

    /// Explicit flag, else config entry, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }

    pub fn pick_enum<T: ValueEnum>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(match flag {
            Some(v) => v,
            None => self.get_enum(key)?.unwrap_or(default),
        })
    }

    /// Like [`Self::pick`] but with no default.
    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, CliError> {
        match flag {
            Some(v) => Ok(v),
            None => self.get(key)?.ok_or_else(|| config_error(format!("missing --{}", key.replace('_', "-")))),
        }
    }
}

/// `3`, `3,5,7` or the inclusive range `3..8`.
pub fn parse_n_list(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || config_error(format!("invalid dimension list {s:?}"));
    let list: Vec<usize> = if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        (lo..=hi).collect()
    } else {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if list.is_empty() || list.iter().any(|n| *n < 3) {
        return Err(config_error(format!("dimensions in {s:?} must be at least 3")));
    }
    Ok(list)
}

/// Comma-separated reals; the empty string gives an empty list.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| config_error(format!("invalid number {t:?} in {s:?}"))))
        .collect()
}

/// `points` values spaced evenly in `ln` between `lo` and `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if !(lo > 0.0 && hi >= lo) {
        return Err(config_error(format!("log grid needs 0 < min <= max, got [{lo}, {hi}]")));
    }
    Ok(match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let mut g: Vec<f64> = (0..points).map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp()).collect();
            // endpoints exactly as given
            g[0] = lo;
            g[points - 1] = hi;
            g
        }
    })
}
