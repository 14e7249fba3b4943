//! The extension of an interval set written through the Mehler kernel,
//! without spectral truncation.
//!
//! Subordination gives U(x, z) = Γ(σ)⁻¹ ∫₀^∞ e^{−u} u^{σ−1} (P_{z²/4u} χ_E)(x) du,
//! and after w = u^σ the integrand is bounded on w ∈ (0, 40^σ]. For a halfline,
//! P_t χ_{(−∞,r)}(x) = Φ((r − e^{−t} x) / √(1 − e^{−2t})).

use crate::error::Result;
use crate::gauss_core::{gamma_fn, integrate, phi};
use crate::set_model::GaussianSet;

/// e^{−u} below e^{−40} is negligible against the 1e−12 target.
const U_MAX: f64 = 40.0;

fn semigroup_halfline(r: f64, x: f64, t: f64) -> f64 {
    // r − e^{−t}x without cancellation when t is tiny.
    let shift = (r - x) - (-t).exp_m1() * x;
    let spread = (-(-2.0 * t).exp_m1()).sqrt();
    phi(shift / spread)
}

/// (P_t χ_E)(x) for t > 0.
fn semigroup_set(e: &GaussianSet, x: f64, t: f64) -> f64 {
    e.intervals()
        .iter()
        .map(|&(a, b)| {
            let hi = if b.is_finite() { semigroup_halfline(b, x, t) } else { 1.0 };
            let lo = if a.is_finite() { semigroup_halfline(a, x, t) } else { 0.0 };
            hi - lo
        })
        .sum()
}

/// U_E(x, z) for extension order σ.
pub(crate) fn exact_extension(e: &GaussianSet, sigma: f64, x: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        let on_edge = e.signed_endpoints().iter().any(|&(p, _)| p == x);
        return Ok(if on_edge {
            0.5
        } else if e.contains(x) {
            1.0
        } else {
            0.0
        });
    }
    let inv_sigma = 1.0 / sigma;
    let integrand = |w: f64| {
        if w <= 0.0 {
            return e.measure();
        }
        let u = w.powf(inv_sigma);
        let t = z * z / (4.0 * u);
        (-u).exp() * semigroup_set(e, x, t)
    };
    let w_max = U_MAX.powf(sigma);
    // The kernel switches from P_t χ_E ≈ χ_E to its mean near u = z²/4;
    // breaking the range there keeps the adaptive rule from stalling when
    // z is tiny.
    let w_star = (0.25 * z * z).powf(sigma);
    let mut cuts = vec![0.0];
    for scale in [1e-4, 1e-2, 1.0, 1e2, 1e4] {
        let w = w_star * scale;
        if w < w_max && w > *cuts.last().unwrap() {
            cuts.push(w);
        }
    }
    cuts.push(w_max);
    let mut v = 0.0;
    for pair in cuts.windows(2) {
        v += integrate(integrand, pair[0], pair[1], 1e-13, 1e-12)?;
    }
    Ok(v / gamma_fn(sigma + 1.0)?)
}
