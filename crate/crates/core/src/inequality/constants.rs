use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::gauss_core::{constants, iso_function, phi_inv, FractionalOrder};

/// Free parameters of the explicit constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantParams {
    /// The absolute constant of the Gaussian quantitative isoperimetric
    /// inequality for the classical perimeter. Its true value is unknown;
    /// every report states the value that was assumed.
    pub c: f64,
}

impl ConstantParams {
    pub fn new(c: f64) -> Result<Self> {
        if c > 0.0 && c.is_finite() {
            Ok(Self { c })
        } else {
            Err(Error::domain("absolute constant c", c, "(0, ∞)"))
        }
    }
}

impl Default for ConstantParams {
    fn default() -> Self {
        Self { c: 1.0 }
    }
}

/// min of I over [5m/9, 13m/9], attained at an endpoint since I is
/// unimodal.
pub fn sigma_min(m: f64) -> Result<f64> {
    if !(m > 0.0 && 13.0 * m / 9.0 < 1.0) {
        return Err(Error::domain("sigma_min mass m", m, "(0, 9/13)"));
    }
    Ok(iso_function(5.0 * m / 9.0)?.min(iso_function(13.0 * m / 9.0)?))
}

/// f(m) = e^{Φ⁻¹(m)²/2} / (1 + Φ⁻¹(m)²).
pub fn f_weight(m: f64) -> Result<f64> {
    let r = phi_inv(m)?;
    Ok((0.5 * r * r).exp() / (1.0 + r * r))
}

/// The lower bound √e/2 of [`f_weight`].
pub fn f_weight_floor() -> f64 {
    E.sqrt() / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZThresholds {
    pub z0: f64,
    pub z1: f64,
    /// Zero asymmetry: both thresholds are zero and every z-range is empty.
    pub degenerate: bool,
}

/// z0 = (A·m / (72 β_s P_E))^{1/s} and z1 = (A·m / (144 β_s P_H))^{1/s}.
pub fn z_thresholds(
    asym: f64,
    m: f64,
    s: FractionalOrder,
    p_e: f64,
    p_h: f64,
) -> Result<ZThresholds> {
    if !(asym >= 0.0) {
        return Err(Error::domain("asymmetry", asym, "[0, 2)"));
    }
    if asym == 0.0 {
        return Ok(ZThresholds {
            z0: 0.0,
            z1: 0.0,
            degenerate: true,
        });
    }
    if !(p_e > 0.0 && p_h > 0.0) {
        return Err(Error::domain("perimeter", p_e.min(p_h), "(0, ∞)"));
    }
    let beta = constants(s).beta_s;
    let inv_s = 1.0 / s.value();
    Ok(ZThresholds {
        z0: (asym * m / (72.0 * beta * p_e)).powf(inv_s),
        z1: (asym * m / (144.0 * beta * p_h)).powf(inv_s),
        degenerate: false,
    })
}

/// C_{s,m} = 3^{4−4/s}·5² / (13² c) · (½)^{8/s+2} · √e/(2−s)
///         · σ_m m^{2/s−2} / (β_s P_H)^{2/s−1},
/// with m replaced by min(m, 1 − m).
pub fn constant_c(s: FractionalOrder, m: f64, params: ConstantParams, p_h: f64) -> Result<f64> {
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::domain("constant mass m", m, "(0, 1)"));
    }
    if !(p_h > 0.0) {
        return Err(Error::domain("halfspace perimeter", p_h, "(0, ∞)"));
    }
    let m = m.min(1.0 - m);
    let sv = s.value();
    let beta = constants(s).beta_s;
    let two_over_s = 2.0 / sv;
    let numeric = 3f64.powf(4.0 - 4.0 / sv) * 25.0 / (169.0 * params.c)
        * 0.5f64.powf(8.0 / sv + 2.0)
        * E.sqrt()
        / (2.0 - sv);
    Ok(numeric * sigma_min(m)? * m.powf(two_over_s - 2.0) / (beta * p_h).powf(two_over_s - 1.0))
}
