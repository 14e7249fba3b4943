use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {what}: {value} is outside {expected}")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("degenerate set: measure {measure} must lie strictly between 0 and 1")]
    DegenerateSet { measure: f64 },

    #[error("{what} failed to converge ({detail})")]
    Convergence { what: &'static str, detail: String },

    #[error("level set at t={t}, z={z} has {crossings} crossings (limit 64)")]
    Resolution { t: f64, z: f64, crossings: usize },

    #[error("invalid truncation K={0}: must be at least 1")]
    Truncation(usize),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid interval at byte {offset}: {message}")]
    Semantic { offset: usize, message: String },

    #[error("linear solve failed ({detail})")]
    LinearSolve { detail: String },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            expected,
        }
    }
}
