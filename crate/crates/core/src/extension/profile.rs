//! The subordination profile
//! ψ_σ(ξ) = Γ(σ)⁻¹ ∫₀^∞ e^{−u − ξ²/(4u)} u^{σ−1} du = (2/Γ(σ)) (ξ/2)^σ K_σ(ξ),
//! the multiplier that the extension applies to the mode h_k at height z,
//! with ξ = √k·z.

use crate::error::{Error, Result};
use crate::gauss_core::gamma_fn;

/// Relative change between successive trapezoid refinements at which the
/// integral is accepted.
const REL_TOL: f64 = 1e-13;

/// log of the integrand ratio below the peak at which the range is cut.
const LOG_CUTOFF: f64 = 50.0;

/// Below this ξ the power series is used instead of the quadrature.
const SERIES_LIMIT: f64 = 1.0;
/// Largest Γ(1−σ) for which the two series cancel mildly enough.
const SERIES_MAX_GAMMA: f64 = 10.0;

/// ψ_σ(ξ) = Γ(1−σ) Σ_m q^m/(m! Γ(m+1−σ)) − Γ(1−σ)(ξ/2)^{2σ} Σ_m q^m/(m! Γ(m+1+σ)),
/// q = ξ²/4, from K_σ = π(I_{−σ} − I_σ)/(2 sin σπ).
fn psi_series(sigma: f64, xi: f64, ratio: f64) -> f64 {
    let q = 0.25 * xi * xi;
    let mut a = 1.0;
    let mut ta = 1.0;
    let mut b = 1.0;
    let mut tb = 1.0;
    for m in 0..60 {
        let m1 = (m + 1) as f64;
        ta *= q / (m1 * (m1 - sigma));
        tb *= q / (m1 * (m1 + sigma));
        a += ta;
        b += tb;
        if ta < 1e-17 * a && tb < 1e-17 * b {
            break;
        }
    }
    a - ratio * (0.5 * xi).powf(2.0 * sigma) * b
}

/// ∫₀^∞ e^{−u − b/u} u^{ν−1} du for b > 0 (or b = 0, ν > 0), returned as
/// (log scale, mantissa) so that the value is mantissa·e^{log scale}.
///
/// In y = ln u the integrand is e^{g(y)} with g(y) = νy − e^y − b e^{−y},
/// smooth, unimodal and doubly-exponentially decaying on both sides, so the
/// trapezoid rule converges geometrically.
fn bessel_integral(nu: f64, b: f64) -> Result<(f64, f64)> {
    let g = |y: f64| nu * y - y.exp() - b * (-y).exp();
    // g'(y) = ν − e^y + b e^{−y} = 0 → e^{y*} = (ν + √(ν² + 4b))/2.
    let root = (nu * nu + 4.0 * b).sqrt();
    let peak_u = if nu >= 0.0 {
        0.5 * (nu + root)
    } else {
        2.0 * b / (root - nu)
    };
    if !(peak_u > 0.0) {
        return Err(Error::Convergence {
            what: "subordination integral",
            detail: format!("no interior peak for nu={nu}, b={b}"),
        });
    }
    let y0 = peak_u.ln();
    let g0 = g(y0);
    let curvature = peak_u + b / peak_u;
    let mut h = (0.5 / curvature.sqrt()).min(0.25);

    // Walk outwards until the integrand has dropped by e^{−LOG_CUTOFF}.
    let find_edge = |dir: f64| -> Result<f64> {
        let mut step = h.max(1e-3);
        let mut y = y0;
        for _ in 0..10_000 {
            y += dir * step;
            if g(y) - g0 < -LOG_CUTOFF {
                return Ok(y);
            }
            step *= 1.5;
        }
        Err(Error::Convergence {
            what: "subordination integral",
            detail: format!("integrand does not decay for nu={nu}, b={b}"),
        })
    };
    let lo = find_edge(-1.0)?;
    let hi = find_edge(1.0)?;

    let n0 = ((hi - lo) / h).ceil().max(8.0) as usize;
    h = (hi - lo) / n0 as f64;
    let f = |y: f64| (g(y) - g0).exp();
    let mut sum: f64 = (0..=n0).map(|i| f(lo + i as f64 * h)).sum();
    let mut value = sum * h;
    for _ in 0..12 {
        let n = ((hi - lo) / h).round() as usize;
        let mid: f64 = (0..n).map(|i| f(lo + (i as f64 + 0.5) * h)).sum();
        sum += mid;
        h *= 0.5;
        let next = sum * h;
        if (next - value).abs() <= REL_TOL * next.abs() {
            return Ok((g0, next));
        }
        value = next;
    }
    Err(Error::Convergence {
        what: "subordination integral",
        detail: format!("trapezoid refinement stalled for nu={nu}, b={b}"),
    })
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("profile order sigma", sigma, "(0, 1)"))
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if xi >= 0.0 && xi.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("profile argument xi", xi, "[0, ∞)"))
    }
}

/// ψ_σ(ξ).
pub fn profile_psi(sigma: f64, xi: f64) -> Result<f64> {
    check_sigma(sigma)?;
    check_xi(xi)?;
    if xi == 0.0 {
        return Ok(1.0);
    }
    // 1 − ψ_σ(ξ) ≈ Γ(1−σ)/Γ(1+σ)·(ξ/2)^{2σ} for small ξ; below one ulp of
    // 1 the answer is 1 in double precision.
    let gamma_minus = gamma_fn(1.0 - sigma)?;
    let ratio = gamma_minus / gamma_fn(1.0 + sigma)?;
    let small = ratio * (0.5 * xi).powf(2.0 * sigma);
    if small < 1e-17 {
        return Ok(1.0);
    }
    if xi <= SERIES_LIMIT && gamma_minus <= SERIES_MAX_GAMMA {
        return Ok(psi_series(sigma, xi, ratio).min(1.0));
    }
    let (log_scale, mantissa) = bessel_integral(sigma, 0.25 * xi * xi).map_err(|e| annotate(e, sigma, xi))?;
    let v = mantissa * (log_scale - gamma_fn(sigma)?.ln()).exp();
    Ok(v.min(1.0))
}

/// dψ_σ/dξ = −(ξ/2)·Γ(σ)⁻¹·∫₀^∞ e^{−u − ξ²/(4u)} u^{σ−2} du, for ξ > 0.
pub fn profile_psi_derivative(sigma: f64, xi: f64) -> Result<f64> {
    check_sigma(sigma)?;
    check_xi(xi)?;
    if xi == 0.0 {
        return Err(Error::domain("profile derivative argument xi", xi, "(0, ∞)"));
    }
    let (log_scale, mantissa) =
        bessel_integral(sigma - 1.0, 0.25 * xi * xi).map_err(|e| annotate(e, sigma, xi))?;
    Ok(-0.5 * xi * mantissa * (log_scale - gamma_fn(sigma)?.ln()).exp())
}

fn annotate(e: Error, sigma: f64, xi: f64) -> Error {
    match e {
        Error::Convergence { what, detail } => Error::Convergence {
            what,
            detail: format!("{detail} (sigma={sigma}, xi={xi})"),
        },
        other => other,
    }
}

/// A profile of fixed order σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubordinationProfile {
    sigma: f64,
}

impl SubordinationProfile {
    pub fn new(sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn psi(&self, xi: f64) -> Result<f64> {
        profile_psi(self.sigma, xi)
    }

    pub fn derivative(&self, xi: f64) -> Result<f64> {
        profile_psi_derivative(self.sigma, xi)
    }

    /// ψ_σ(√k·z) for k = 0..=kmax.
    pub fn mode_multipliers(&self, kmax: usize, z: f64) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            let xi = (k as f64).sqrt() * z;
            // ψ underflows to zero well before ξ = 800; skip the quadrature.
            if xi > 800.0 {
                out.push(0.0);
            } else {
                out.push(self.psi(xi)?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_is_exponential() {
        for xi in [0.01f64, 0.1, 1.0, 5.0, 10.0, 40.0] {
            let v = profile_psi(0.5, xi).unwrap();
            assert!((v - (-xi).exp()).abs() <= 1e-12 * (-xi).exp().max(1e-3), "xi={xi}");
            let d = profile_psi_derivative(0.5, xi).unwrap();
            assert!((d + (-xi).exp()).abs() <= 1e-11 * (-xi).exp(), "xi={xi}");
        }
    }

    #[test]
    fn normalisation_and_decrease() {
        assert_eq!(profile_psi(0.3, 0.0).unwrap(), 1.0);
        let a = profile_psi(0.3, 0.5).unwrap();
        let b = profile_psi(0.3, 1.0).unwrap();
        let c = profile_psi(0.3, 2.0).unwrap();
        assert!(c < b && b < a && a < 1.0);
        assert!(profile_psi(0.0, 1.0).is_err());
        assert!(profile_psi(0.5, -1.0).is_err());
    }

    #[test]
    fn series_matches_quadrature() {
        for sigma in [0.1, 0.25, 0.4, 0.5, 0.75] {
            for xi in [1e-4, 0.01, 0.3, 0.7, 1.0] {
                let series = profile_psi(sigma, xi).unwrap();
                let (ls, mant) = bessel_integral(sigma, 0.25 * xi * xi).unwrap();
                let quad = mant * (ls - gamma_fn(sigma).unwrap().ln()).exp();
                assert!((series - quad).abs() < 1e-13, "sigma={sigma} xi={xi}: {series} vs {quad}");
            }
        }
    }

    #[test]
    fn small_argument_expansion() {
        // 1 − ψ ≈ Γ(1−σ)/Γ(1+σ) (ξ/2)^{2σ} to leading order.
        let sigma = 0.25;
        let xi: f64 = 1e-6;
        let lead = gamma_fn(0.75).unwrap() / gamma_fn(1.25).unwrap() * (0.5 * xi).powf(0.5);
        let v = 1.0 - profile_psi(sigma, xi).unwrap();
        assert!((v - lead).abs() < 1e-3 * lead);
    }
}
