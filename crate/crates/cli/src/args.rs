use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "fgi", version, about = "Fractional Gaussian perimeters and isoperimetric deficits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionArg {
    WithConstant,
    Remark,
}

#[derive(Debug, Default, Args)]
pub struct Options {
    /// JSON file with run configuration; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// A set such as "(-inf,0)|(1,2)"; repeatable.
    #[arg(long = "set", global = true)]
    pub sets: Vec<String>,
    /// Orders s in (0, 1); repeatable or comma separated.
    #[arg(long = "s", global = true, value_delimiter = ',')]
    pub s: Vec<f64>,
    /// Orders as an inclusive grid a:b:step.
    #[arg(long = "s-grid", global = true)]
    pub s_grid: Option<String>,
    /// Spectral truncation.
    #[arg(long = "K", global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub convention: Option<ConventionArg>,
    /// The absolute constant assumed in the main inequality.
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Largest c tried before a main-theorem violation counts.
    #[arg(long = "c-max", global = true)]
    pub c_max: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// P_s(E) by the spectral series.
    Perimeter,
    /// Deficit, asymmetry and the explicit right-hand side.
    Deficit,
    /// Fraenkel asymmetry and the optimal halfline.
    Asymmetry,
    /// Values of the truncated extension U_E(x, z).
    ExtensionEval {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<f64>,
    },
    /// Randomized suites for the lemmas and the main theorem.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Number of random sets (pairs for the transfer suite).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Halfspace perimeters over an r-grid and the s-grid.
    Sweep {
        /// Inclusive grid a:b:step of halfline endpoints.
        #[arg(long = "r-grid", allow_hyphen_values = true, default_value = "-2:2:0.5")]
        r_grid: String,
    },
    /// (1 − s)·P_s(H_r) against the s → 1 limit.
    Asymptotic {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        r: f64,
    },
}
