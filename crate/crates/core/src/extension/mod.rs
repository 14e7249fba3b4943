//! The Ornstein–Uhlenbeck extension of characteristic functions.
//!
//! In the Hermite basis the extension acts mode by mode: h_k is multiplied
//! by ψ_σ(√k·z) with σ = s/2. This module evaluates the truncated field,
//! the trace gap, the boundary flux, superlevel sets, and (as an
//! independent check) a finite-element minimizer of the weighted energy.

mod field;
mod level_set;
mod mehler;
mod pde;
mod profile;

pub use field::{
    boundary_flux_check, boundary_flux_limit, evaluate_extension, trace_gap, trace_gap_of,
    ExtensionField, ExtensionSlice, FLUX_HEIGHTS,
};
pub use level_set::{
    level_set, resolution_budget, LevelSetRecord, LevelSetSampler, BISECTION_TOL, GRID_MAX,
    GRID_MIN, GRID_STEP, MAX_CROSSINGS, TAIL_TOLERANCE, TRUSTED_LEVELS,
};
pub use pde::{pde_energy, pde_energy_cylinder, PdeMesh, DEFAULT_X_GRADING};
pub use profile::{profile_psi, profile_psi_derivative, SubordinationProfile};

#[allow(unused_imports)]
pub(crate) use mehler::exact_extension;
