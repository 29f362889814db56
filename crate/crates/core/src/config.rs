//! Run configuration. Values resolve in the order flag, environment, config
//! file, built-in default; the first two are merged by the CLI parser.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cd_sets::GridSpec;
use crate::error::{Error, Result};
use crate::geometry::Tolerance;
use crate::metrics::MetricKind;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_REPS: usize = 1000;
pub const DEFAULT_GRID: &str = "-5,5,-5,5,41";

const KEYS: [&str; 6] = ["metric", "tol", "seed", "reps", "grid", "out"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub metric: MetricKind,
    pub tol: Tolerance,
    pub seed: u64,
    pub reps: usize,
    pub grid: GridSpec,
    pub out: Option<PathBuf>,
}

/// Values supplied on the command line (or through the environment).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub metric: Option<String>,
    pub tol: Option<String>,
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub grid: Option<String>,
    pub out: Option<PathBuf>,
}

/// Flat `key = value` file; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value", k + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!("line {}: unknown key `{key}`", k + 1)));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// `eps` for both components or `eps_abs,eps_rel`.
pub fn parse_tolerance(s: &str) -> Result<Tolerance> {
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| Error::Config(format!("tolerance `{s}`: {e}")));
    match s.split_once(',') {
        Some((a, r)) => Tolerance::new(num(a)?, num(r)?),
        None => Tolerance::uniform(num(s)?),
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>().map_err(|e| Error::Config(format!("{key} `{v}`: {e}")))
}

impl RunConfig {
    pub fn resolve(over: &Overrides, file: Option<&Path>) -> Result<Self> {
        let from_file = match file {
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        Self::from_parts(over, &from_file)
    }

    pub fn from_parts(over: &Overrides, file: &BTreeMap<String, String>) -> Result<Self> {
        let pick = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.get(key).cloned());
        let metric = match pick(&over.metric, "metric") {
            Some(m) => m.parse::<MetricKind>()?,
            None => MetricKind::Radial,
        };
        let tol = match pick(&over.tol, "tol") {
            Some(t) => parse_tolerance(&t)?,
            None => Tolerance::default(),
        };
        let seed = match over.seed {
            Some(s) => s,
            None => file.get("seed").map(|v| parse_value("seed", v)).transpose()?.unwrap_or(DEFAULT_SEED),
        };
        let reps = match over.reps {
            Some(r) => r,
            None => file.get("reps").map(|v| parse_value("reps", v)).transpose()?.unwrap_or(DEFAULT_REPS),
        };
        if reps == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        let grid = pick(&over.grid, "grid").unwrap_or_else(|| DEFAULT_GRID.to_string()).parse()?;
        let out = over.out.clone().or_else(|| file.get("out").map(PathBuf::from));
        Ok(Self { metric, tol, seed, reps, grid, out })
    }
}
