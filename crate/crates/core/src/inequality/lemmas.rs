use crate::error::{Error, Result};
use crate::extension::{ExtensionField, LevelSetRecord, LevelSetSampler};
use crate::gauss_core::{constants, FractionalOrder};
use crate::set_model::{asymmetry, GaussianSet};
use crate::spectral::Convention;

use super::report::SetAnalysis;

/// Rounding slack on the transfer inequality, whose inputs are exact
/// interval arithmetic under Φ.
pub const TRANSFER_TOL: f64 = 1e-12;
/// Below this mass E \ F counts as empty when choosing c_κ.
pub const EMPTY_DIFFERENCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaOutcome {
    Holds,
    Violated,
    /// The hypothesis of the lemma is not met.
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferCheck {
    pub outcome: LemmaOutcome,
    pub kappa: f64,
    /// γ(E Δ F)/γ(F).
    pub closeness: f64,
    pub asym_e: f64,
    pub asym_f: f64,
    pub c_kappa: f64,
    /// ((1 − 2κ)/c_κ)·A(F).
    pub required: f64,
}

/// If γ(E Δ F)/γ(F) ≤ κ A(F), then A(E) ≥ ((1 − 2κ)/c_κ) A(F), where
/// c_κ = 1 when E ⊆ F up to null sets and 1 + 2κ otherwise.
pub fn verify_transfer_lemma(e: &GaussianSet, f: &GaussianSet, kappa: f64) -> Result<TransferCheck> {
    if !(kappa > 0.0 && kappa < 0.5) {
        return Err(Error::domain("kappa", kappa, "(0, ½)"));
    }
    let asym_f = asymmetry(f)?.value;
    let asym_e = asymmetry(e)?.value;
    let closeness = e.symm_diff(f).measure() / f.measure();
    let c_kappa = if e.difference(f).measure() < EMPTY_DIFFERENCE {
        1.0
    } else {
        1.0 + 2.0 * kappa
    };
    let required = (1.0 - 2.0 * kappa) / c_kappa * asym_f;
    let outcome = if asym_f == 0.0 {
        // A(F) = 0 makes the conclusion A(E) ≥ 0.
        LemmaOutcome::Holds
    } else if closeness > kappa * asym_f {
        LemmaOutcome::Inapplicable
    } else if asym_e >= required - TRANSFER_TOL {
        LemmaOutcome::Holds
    } else {
        LemmaOutcome::Violated
    };
    Ok(TransferCheck {
        outcome,
        kappa,
        closeness,
        asym_e,
        asym_f,
        c_kappa,
        required,
    })
}

fn check_level(t: f64) -> Result<()> {
    if (0.25..=0.75).contains(&t) {
        Ok(())
    } else {
        Err(Error::domain("level t", t, "[¼, ¾]"))
    }
}

/// Upper end of the admissible heights, (1/(8 α β_s P))^{1/s}.
pub fn closeness_height_bound(s: FractionalOrder, alpha: f64, perimeter: f64) -> f64 {
    (1.0 / (8.0 * alpha * constants(s).beta_s * perimeter)).powf(1.0 / s.value())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosenessCheck {
    pub t: f64,
    pub z: f64,
    pub alpha: f64,
    /// γ(E \ E_{t,z}).
    pub lost: f64,
    /// γ(E_{t,z} \ E).
    pub gained: f64,
    pub budget: f64,
    pub holds: bool,
    pub level: LevelSetRecord,
}

/// γ(E \ E_{t,z}) ≤ 1/α and γ(E_{t,z} \ E) ≤ 1/α for t ∈ [¼, ¾] and
/// 0 < z < (1/(8 α β_s P_s(E)))^{1/s}, with P_s(E) taken at its upper
/// estimate. Each side may exceed 1/α by the level-set resolution budget.
pub fn verify_levelset_closeness(
    e: &GaussianSet,
    s: FractionalOrder,
    t: f64,
    z: f64,
    alpha: f64,
    k: usize,
) -> Result<ClosenessCheck> {
    let a = SetAnalysis::new(e, s, k, Convention::WithConstant)?;
    let field = ExtensionField::new(a.coeffs.clone(), s);
    let sampler = LevelSetSampler::new(&field, z)?;
    closeness_on(&a, &field, &sampler, t, alpha)
}

pub(crate) fn closeness_on(
    a: &SetAnalysis,
    field: &ExtensionField,
    sampler: &LevelSetSampler,
    t: f64,
    alpha: f64,
) -> Result<ClosenessCheck> {
    check_level(t)?;
    if !(alpha > 0.0) {
        return Err(Error::domain("alpha", alpha, "(0, ∞)"));
    }
    let z = sampler.z();
    let bound = closeness_height_bound(a.s, alpha, a.p_e.upper());
    if !(z > 0.0 && z < bound) {
        return Err(Error::domain("height z", z, "(0, (8 α β_s P)^{-1/s})"));
    }
    let level = sampler.extract(t)?;
    let budget = sampler.resolution_budget(field, t)? + level.unresolved;
    let lost = a.set().difference(&level.set).measure();
    let gained = level.set.difference(a.set()).measure();
    let cap = 1.0 / alpha + budget;
    Ok(ClosenessCheck {
        t,
        z,
        alpha,
        lost,
        gained,
        budget,
        holds: lost <= cap && gained <= cap,
        level,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsCheck {
    pub t: f64,
    pub z: f64,
    pub z0: f64,
    pub m: f64,
    pub asym: f64,
    pub mu: f64,
    pub asym_level: f64,
    pub budget: f64,
    /// |μ_z(t) − m| ≤ (2/9)·m·A(E).
    pub measure_ok: bool,
    /// A(E_{t,z}) ≥ (5/13)·A(E).
    pub asym_ok: bool,
    /// (5/9)m < μ_z(t) < (13/9)m.
    pub sandwich_ok: bool,
    /// A(E) = 0: the admissible z-range is empty.
    pub vacuous: bool,
}

impl BoundsCheck {
    pub fn holds(&self) -> bool {
        self.vacuous || (self.measure_ok && self.asym_ok && self.sandwich_ok)
    }
}

/// The level-set bounds for t ∈ [¼, ¾] and z ∈ (0, z0], with z0 evaluated
/// from the upper perimeter estimate. Measure comparisons may miss by the
/// resolution budget b, the asymmetry comparison by 4b/μ.
pub fn verify_levelset_bounds(
    e: &GaussianSet,
    s: FractionalOrder,
    t: f64,
    z: f64,
    k: usize,
) -> Result<BoundsCheck> {
    let a = SetAnalysis::new(e, s, k, Convention::WithConstant)?;
    if a.asym.value == 0.0 {
        return Ok(vacuous_bounds(&a, t, z));
    }
    let field = ExtensionField::new(a.coeffs.clone(), s);
    let sampler = LevelSetSampler::new(&field, z)?;
    bounds_on(&a, &field, &sampler, t)
}

fn vacuous_bounds(a: &SetAnalysis, t: f64, z: f64) -> BoundsCheck {
    BoundsCheck {
        t,
        z,
        z0: 0.0,
        m: a.m,
        asym: 0.0,
        mu: f64::NAN,
        asym_level: f64::NAN,
        budget: 0.0,
        measure_ok: true,
        asym_ok: true,
        sandwich_ok: true,
        vacuous: true,
    }
}

pub(crate) fn bounds_on(
    a: &SetAnalysis,
    field: &ExtensionField,
    sampler: &LevelSetSampler,
    t: f64,
) -> Result<BoundsCheck> {
    check_level(t)?;
    let z = sampler.z();
    if a.asym.value == 0.0 {
        return Ok(vacuous_bounds(a, t, z));
    }
    let z0 = a.conservative_thresholds()?.z0;
    if !(z > 0.0 && z <= z0) {
        return Err(Error::domain("height z", z, "(0, z0]"));
    }
    let level = sampler.extract(t)?;
    let budget = sampler.resolution_budget(field, t)? + level.unresolved;
    let (m, asym, mu) = (a.m, a.asym.value, level.mu);
    let asym_level = if mu > 0.0 && mu < 1.0 {
        asymmetry(&level.set)?.value
    } else {
        f64::NAN
    };
    Ok(BoundsCheck {
        t,
        z,
        z0,
        m,
        asym,
        mu,
        asym_level,
        budget,
        measure_ok: (mu - m).abs() <= 2.0 / 9.0 * m * asym + budget,
        asym_ok: asym_level >= 5.0 / 13.0 * asym - 4.0 * budget / mu,
        sandwich_ok: 5.0 / 9.0 * m - budget < mu && mu < 13.0 / 9.0 * m + budget,
        vacuous: false,
    })
}
