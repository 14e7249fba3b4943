//! The isoperimetric deficit, the explicit constant C_{s,m}, and checks of
//! the intermediate lemmas on concrete sets.
//!
//! Every check compares exact interval arithmetic under Φ with truncated
//! spectral quantities, so each one carries a numerical budget that is
//! reported next to the verdict rather than folded into it.

mod constants;
mod lemmas;
mod report;
mod suites;

pub use constants::{
    constant_c, f_weight, f_weight_floor, sigma_min, z_thresholds, ConstantParams, ZThresholds,
};
pub use lemmas::{
    closeness_height_bound, verify_levelset_bounds, verify_levelset_closeness,
    verify_transfer_lemma, BoundsCheck, ClosenessCheck, LemmaOutcome, TransferCheck,
    EMPTY_DIFFERENCE, TRANSFER_TOL,
};
pub use report::{verify_main, Branch, DeficitReport, SetAnalysis};
pub use suites::{
    random_family, random_set, run_suite, Suite, SuiteConfig, SuiteFailure, SuiteOutcome,
    BOUNDS_HEIGHTS, DEFAULT_C_MAX, FAMILY_MEASURE, FAMILY_RANGE, LEVELSET_ALPHA,
    LEVELSET_HEIGHTS, LEVELSET_ORDER, LEVELS, MAIN_ORDERS, TAIL_PROBABILITY,
};
