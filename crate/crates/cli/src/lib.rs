//! Command-line front end: set parsing, run configuration, the subcommands,
//! and CSV/JSON emission.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;
pub mod parse;

use std::io::Write;

use anyhow::Result;

pub use args::Cli;
pub use config::{RunConfig, UsageError};
pub use parse::{parse_set, SetExpression};

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs a parsed command line, writing the table to `--out` or `stdout`.
/// Returns the exit code for a run that produced output.
pub fn execute<W: Write>(cli: &Cli, stdout: &mut W) -> Result<i32> {
    let cfg = RunConfig::resolve(&cli.options)?;
    let outcome = commands::run(&cli.command, &cfg)?;
    match &cfg.out {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            outcome.table.write(cfg.format, &mut f)?;
            f.flush()?;
        }
        None => outcome.table.write(cfg.format, stdout)?,
    }
    Ok(if outcome.failed { EXIT_FAILED } else { EXIT_OK })
}

/// Exit code for an error: bad input is a usage error, anything else a
/// failed run.
pub fn error_code(err: &anyhow::Error) -> i32 {
    use frac_gauss_iso::Error as E;
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<E>() {
        Some(E::Parse { .. } | E::Semantic { .. } | E::Domain { .. } | E::DegenerateSet { .. } | E::Truncation(_)) => {
            EXIT_USAGE
        }
        _ => EXIT_FAILED,
    }
}
