use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

use frac_gauss_iso::inequality::{ConstantParams, DEFAULT_C_MAX};
use frac_gauss_iso::spectral::DEFAULT_TRUNCATION;
use frac_gauss_iso::{Convention, FractionalOrder};

use crate::args::{ConventionArg, Options};
use crate::output::Format;
use crate::parse::{parse_set, SetExpression};

/// Bad flags, config or grids; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Config file contents; every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub sets: Option<Vec<String>>,
    pub s_grid: Option<Vec<f64>>,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub convention: Option<ConventionArg>,
    pub c: Option<f64>,
    pub c_max: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub sets: Vec<SetExpression>,
    /// `None` lets each command pick its own grid.
    pub s_grid: Option<Vec<FractionalOrder>>,
    pub k: usize,
    /// `None` lets each command pick its own convention.
    pub convention: Option<Convention>,
    pub params: ConstantParams,
    pub c_max: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Inclusive grid a:b:step.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || usage(format!("grid `{spec}` is not of the form a:b:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    let (a, b, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(usage(format!("grid `{spec}` has too many points")));
    }
    Ok((0..=n).map(|i| a + i as f64 * step).collect())
}

fn convention_of(c: ConventionArg) -> Convention {
    match c {
        ConventionArg::WithConstant => Convention::WithConstant,
        ConventionArg::Remark => Convention::Remark,
    }
}

impl RunConfig {
    /// Merges the optional config file with the flags, flags winning.
    pub fn resolve(opts: &Options) -> Result<Self> {
        let file = match &opts.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let set_texts = if opts.sets.is_empty() {
            file.sets.unwrap_or_default()
        } else {
            opts.sets.clone()
        };
        let sets = set_texts
            .iter()
            .map(|t| parse_set(t))
            .collect::<std::result::Result<Vec<_>, _>>()?;

        let s_values = if let Some(g) = &opts.s_grid {
            let mut v = parse_grid(g)?;
            v.extend(&opts.s);
            Some(v)
        } else if !opts.s.is_empty() {
            Some(opts.s.clone())
        } else {
            file.s_grid
        };
        let s_grid = match s_values {
            Some(v) if v.is_empty() => return Err(usage("the s-grid is empty")),
            Some(v) => Some(
                v.into_iter()
                    .map(FractionalOrder::new)
                    .collect::<std::result::Result<Vec<_>, _>>()?,
            ),
            None => None,
        };

        let k = opts.k.or(file.k).unwrap_or(DEFAULT_TRUNCATION);
        if k < 1 {
            return Err(usage("K must be at least 1"));
        }
        let c = opts.c.or(file.c).unwrap_or(ConstantParams::default().c);
        let params = ConstantParams::new(c).map_err(|_| usage(format!("c must be positive, got {c}")))?;
        let c_max = opts.c_max.or(file.c_max).unwrap_or(DEFAULT_C_MAX);
        if !(c_max >= c) {
            return Err(usage(format!("c-max {c_max} must be at least c {c}")));
        }
        Ok(Self {
            sets,
            s_grid,
            k,
            convention: opts.convention.or(file.convention).map(convention_of),
            params,
            c_max,
            seed: opts.seed.or(file.seed).unwrap_or(7),
            out: opts.out.clone().or(file.out),
            format: opts.format.or(file.format).unwrap_or(Format::Csv),
        })
    }

    pub fn orders_or(&self, default: &[f64]) -> Vec<FractionalOrder> {
        self.s_grid.clone().unwrap_or_else(|| {
            default
                .iter()
                .map(|&s| FractionalOrder::new(s).expect("default orders are valid"))
                .collect()
        })
    }

    pub fn require_sets(&self) -> Result<&[SetExpression]> {
        if self.sets.is_empty() {
            Err(usage("at least one --set is required"))
        } else {
            Ok(&self.sets)
        }
    }
}
