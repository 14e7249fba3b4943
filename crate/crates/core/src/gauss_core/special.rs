use std::f64::consts::{FRAC_1_SQRT_2, PI};

use libm::{erfc, tgamma};
use statrs::function::erf::erfc_inv;

use crate::error::{Error, Result};

/// Euler's Γ. Negative non-integer arguments go through the reflection
/// formula; nonpositive integers are poles.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || (x <= 0.0 && x == x.round()) {
        return Err(Error::domain("gamma", x, "the reals minus the nonpositive integers"));
    }
    Ok(tgamma(x))
}

/// Standard normal density.
#[inline]
pub fn gauss_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Φ(r) = γ₁((−∞, r)).
#[inline]
pub fn phi(r: f64) -> f64 {
    0.5 * erfc(-r * FRAC_1_SQRT_2)
}

/// Upper tail 1 − Φ(r), computed without cancellation.
#[inline]
pub fn phi_upper(r: f64) -> f64 {
    0.5 * erfc(r * FRAC_1_SQRT_2)
}

/// Φ extended to ±∞.
#[inline]
pub fn phi_ext(r: f64) -> f64 {
    if r == f64::INFINITY {
        1.0
    } else if r == f64::NEG_INFINITY {
        0.0
    } else {
        phi(r)
    }
}

/// γ₁((a, b)) for extended-real a ≤ b, evaluated on whichever tail avoids
/// cancellation.
pub fn gauss_mass(a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    if a >= 0.0 {
        let qa = if a.is_infinite() { 0.0 } else { phi_upper(a) };
        let qb = if b.is_infinite() { 0.0 } else { phi_upper(b) };
        qa - qb
    } else {
        phi_ext(b) - phi_ext(a)
    }
}

/// Φ⁻¹ on (0, 1): erfc⁻¹ starting value polished by safeguarded Newton.
pub fn phi_inv(m: f64) -> Result<f64> {
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::domain("phi_inv", m, "(0, 1)"));
    }
    if m == 0.5 {
        return Ok(0.0);
    }
    if m > 0.5 {
        // 1 − m is exact here.
        return Ok(-lower_quantile(1.0 - m));
    }
    Ok(lower_quantile(m))
}

fn lower_quantile(m: f64) -> f64 {
    debug_assert!(m > 0.0 && m < 0.5);
    // Newton on ln Φ(x) = ln m, which stays well conditioned deep in the
    // tail where Φ itself is tiny.
    let target = m.ln();
    let mut x = -std::f64::consts::SQRT_2 * erfc_inv(2.0 * m);
    if !x.is_finite() {
        x = -(-2.0 * target).sqrt();
    }
    let (mut lo, mut hi) = (-40.0_f64, 0.0_f64);
    for _ in 0..100 {
        let p = phi(x);
        let f = p.ln() - target;
        if f > 0.0 {
            hi = hi.min(x);
        } else {
            lo = lo.max(x);
        }
        let d = gauss_density(x);
        let mut next = if d > 0.0 && p > 0.0 { x - f * p / d } else { 0.5 * (lo + hi) };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x.abs().max(1.0) {
            x = next;
            break;
        }
        x = next;
    }
    x
}

/// Gaussian isoperimetric profile I(m) = exp(−Φ⁻¹(m)²/2).
pub fn iso_function(m: f64) -> Result<f64> {
    let r = phi_inv(m)?;
    Ok((-0.5 * r * r).exp())
}
