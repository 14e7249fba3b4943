//! The extension constant K and the trace constant β.
//!
//! Both are written in terms of the extension order σ ∈ (0, 1). A perimeter
//! of fractional order s uses σ = s/2, so `K_s = extension_constant(s/2)`.

use crate::error::{Error, Result};

use super::special::gamma_fn;

/// A fractional order s ∈ (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(s: f64) -> Result<Self> {
        if s > 0.0 && s < 1.0 {
            Ok(Self(s))
        } else {
            Err(Error::domain("fractional order", s, "(0, 1)"))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The extension order σ = s/2.
    #[inline]
    pub fn sigma(self) -> f64 {
        0.5 * self.0
    }
}

impl std::fmt::Display for FractionalOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// K_s and β_s for a fixed order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsTable {
    pub s: FractionalOrder,
    pub k_s: f64,
    pub beta_s: f64,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("extension order", sigma, "(0, 1)"))
    }
}

/// K_{2σ} = 2σ|Γ(−σ)| / (4^σ Γ(σ)).
///
/// This is also the limit of −ξ^{1−2σ}ψ_σ'(ξ) as ξ → 0⁺, so it converts the
/// boundary flux of the extension into (−Δ_γ)^σ.
pub fn extension_constant(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let g_neg = gamma_fn(-sigma)?;
    let g = gamma_fn(sigma)?;
    Ok(2.0 * sigma * g_neg.abs() / (4f64.powf(sigma) * g))
}

/// β_{2σ} = Γ(1−σ) / (4^σ K_{2σ} Γ(1+σ)).
pub fn trace_constant(sigma: f64) -> Result<f64> {
    let k = extension_constant(sigma)?;
    Ok(gamma_fn(1.0 - sigma)? / (4f64.powf(sigma) * k * gamma_fn(1.0 + sigma)?))
}

pub fn constants(s: FractionalOrder) -> ConstantsTable {
    let sigma = s.sigma();
    // σ ∈ (0, ½) here, so neither call can hit a pole.
    let k_s = extension_constant(sigma).expect("σ = s/2 lies in (0, 1)");
    let beta_s = trace_constant(sigma).expect("σ = s/2 lies in (0, 1)");
    ConstantsTable { s, k_s, beta_s }
}
