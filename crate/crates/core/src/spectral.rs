//! Hermite coefficients of characteristic functions and the spectral series
//! for the fractional Gaussian perimeter.
//!
//! For k ≥ 1 the coefficient of χ_E on h_k is a sum over the finite
//! endpoints of E of ±A_k, where A_k(x) = e^{−x²/2} h_{k−1}(x) / √(2πk) is the
//! γ₁-antiderivative of h_k. The perimeter is
//! P = (K_s/2) Σ_{k≥1} k^{s/2} f_k², and the remark convention drops K_s.
//!
//! Each summand behaves like C·k^{−1−ε}·cos²(…) with ε = (1−s)/2, so the
//! truncated series converges slowly; every value carries an explicit bound
//! on the discarded tail.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gauss_core::{constants, weighted_hermite_values, FractionalOrder};
use crate::set_model::GaussianSet;
use crate::summation::CompensatedSum;

/// Truncation used when the caller does not choose one.
pub const DEFAULT_TRUNCATION: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// ½ [χ_E]² with the K_s-weighted seminorm.
    WithConstant,
    /// The same series without the factor K_s.
    Remark,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::WithConstant => "with-constant",
            Convention::Remark => "remark",
        }
    }

    /// Multiplier applied to a remark-convention value.
    pub fn factor(self, s: FractionalOrder) -> f64 {
        match self {
            Convention::WithConstant => constants(s).k_s,
            Convention::Remark => 1.0,
        }
    }
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn check_truncation(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::Truncation(k))
    } else {
        Ok(())
    }
}

/// A_k(x) for k = 1..=kmax, stored at index k (index 0 unused, set to 0).
fn antiderivative_values(x: f64, kmax: usize) -> Vec<f64> {
    let log_w = -0.5 * x * x - 0.5 * (2.0 * PI).ln();
    let w = weighted_hermite_values(kmax - 1, x, log_w);
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(0.0);
    for (j, v) in w.into_iter().enumerate() {
        out.push(v / ((j + 1) as f64).sqrt());
    }
    out
}

/// f_k of the halfline (−∞, r).
pub fn coeff_halfline(r: f64, k: usize) -> f64 {
    if k == 0 {
        return crate::gauss_core::phi(r);
    }
    -antiderivative_values(r, k)[k]
}

/// f_k of χ_E.
pub fn coeff_set(e: &GaussianSet, k: usize) -> f64 {
    if k == 0 {
        return e.measure();
    }
    let mut acc = CompensatedSum::new();
    for (x, sign) in e.signed_endpoints() {
        acc.add(sign * antiderivative_values(x, k)[k]);
    }
    acc.value()
}

/// f_0, …, f_K of a set's characteristic function.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    set: GaussianSet,
    f: Vec<f64>,
}

impl SpectralCoefficients {
    pub fn new(set: &GaussianSet, k: usize) -> Result<Self> {
        check_truncation(k)?;
        let mut f = vec![0.0; k + 1];
        f[0] = set.measure();
        let endpoints = set.signed_endpoints();
        if endpoints.len() == 1 {
            let (x, sign) = endpoints[0];
            let a = antiderivative_values(x, k);
            for j in 1..=k {
                f[j] = sign * a[j];
            }
        } else if !endpoints.is_empty() {
            let mut acc = vec![CompensatedSum::new(); k + 1];
            for (x, sign) in endpoints {
                let a = antiderivative_values(x, k);
                for j in 1..=k {
                    acc[j].add(sign * a[j]);
                }
            }
            for j in 1..=k {
                f[j] = acc[j].value();
            }
        }
        Ok(Self {
            set: set.clone(),
            f,
        })
    }

    pub fn set(&self) -> &GaussianSet {
        &self.set
    }

    /// The truncation index K.
    pub fn truncation(&self) -> usize {
        self.f.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    /// Coefficients of the complement: (1 − f_0, −f_1, …, −f_K).
    pub fn complement(&self) -> Self {
        let mut f: Vec<f64> = self.f.iter().map(|v| -v).collect();
        f[0] = self.set.complement().measure();
        Self {
            set: self.set.complement(),
            f,
        }
    }
}

/// A truncated perimeter series with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerimeterValue {
    /// Partial sum up to K.
    pub value: f64,
    pub s: FractionalOrder,
    pub k: usize,
    /// Upper estimate of the discarded tail Σ_{k>K}.
    pub tail_bound: f64,
    /// Expected size of the discarded tail (the oscillation averaged out).
    pub tail_estimate: f64,
    pub convention: Convention,
}

impl PerimeterValue {
    /// Partial sum plus the expected tail.
    pub fn extrapolated(&self) -> f64 {
        self.value + self.tail_estimate
    }

    /// Partial sum plus the tail bound: an upper estimate of the full series.
    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }
}

/// Amplitude of k^{1+ε}·(½k^{s/2}A_k(x)²) as k → ∞: e^{−x²/2}·√(2/π)/(4π).
fn envelope_amplitude(x: f64) -> f64 {
    (-0.5 * x * x).exp() * (2.0 / PI).sqrt() / (4.0 * PI)
}

/// Tail bound and tail estimate for remark-convention summands `terms[k]`,
/// k = 1..=K, of a set with the given finite endpoints.
fn tail_diagnostics(terms: &[f64], s: f64, endpoints: &[f64]) -> (f64, f64) {
    let k = terms.len() - 1;
    if endpoints.is_empty() {
        return (0.0, 0.0);
    }
    let eps = 0.5 * (1.0 - s);
    let kf = k as f64;
    // Cross terms between endpoints can add coherently: the envelope of
    // (Σ ±A)² is (Σ |A|)².
    let env_root: f64 = endpoints.iter().map(|&x| envelope_amplitude(x).sqrt()).sum();
    let c_env = env_root * env_root;
    let start = (k - k / 10).max(1);
    let c_obs = (start..=k)
        .map(|j| terms[j] * (j as f64).powf(1.0 + eps))
        .fold(0.0, f64::max);
    let bound = c_env.max(c_obs) * kf.powf(-eps) / eps * (1.0 + 1.0 / kf).sqrt();
    // On average cos² = ½ and the cross terms cancel.
    let c_avg: f64 = 0.5 * endpoints.iter().map(|&x| envelope_amplitude(x)).sum::<f64>();
    let estimate = c_avg * (kf + 0.5).powf(-eps) / eps;
    (bound, estimate)
}

fn finite_endpoints(e: &GaussianSet) -> Vec<f64> {
    e.signed_endpoints().into_iter().map(|(x, _)| x).collect()
}

fn perimeter_from_coefficients(
    c: &SpectralCoefficients,
    s: FractionalOrder,
    convention: Convention,
) -> PerimeterValue {
    let k = c.truncation();
    let half_s = 0.5 * s.value();
    let f = c.values();
    let mut terms = vec![0.0; k + 1];
    let mut acc = CompensatedSum::new();
    for j in 1..=k {
        let t = 0.5 * (j as f64).powf(half_s) * f[j] * f[j];
        terms[j] = t;
        acc.add(t);
    }
    let (tb, te) = tail_diagnostics(&terms, s.value(), &finite_endpoints(c.set()));
    let factor = convention.factor(s);
    PerimeterValue {
        value: factor * acc.value(),
        s,
        k,
        tail_bound: factor * tb,
        tail_estimate: factor * te,
        convention,
    }
}

/// P_s(E) from the spectral series truncated at K.
pub fn perimeter_spectral(
    e: &GaussianSet,
    s: FractionalOrder,
    k: usize,
    convention: Convention,
) -> Result<PerimeterValue> {
    let c = SpectralCoefficients::new(e, k)?;
    Ok(perimeter_from_coefficients(&c, s, convention))
}

/// Same as [`perimeter_spectral`] for coefficients already computed.
pub fn perimeter_of(
    c: &SpectralCoefficients,
    s: FractionalOrder,
    convention: Convention,
) -> PerimeterValue {
    perimeter_from_coefficients(c, s, convention)
}

/// P_s(H_r) for H_r = (−∞, r) from the closed-form halfspace series
/// (1/4π) e^{−r²} Σ_{k=1}^{K} k^{s/2−1} h_{k−1}(r)².
pub fn halfspace_series(
    r: f64,
    s: FractionalOrder,
    k: usize,
    convention: Convention,
) -> Result<PerimeterValue> {
    check_truncation(k)?;
    if !r.is_finite() {
        return Err(Error::domain("halfspace_series", r, "finite thresholds"));
    }
    let w = weighted_hermite_values(k - 1, r, -0.5 * r * r);
    let expo = 0.5 * s.value() - 1.0;
    let mut terms = vec![0.0; k + 1];
    let mut acc = CompensatedSum::new();
    for j in 1..=k {
        let t = (j as f64).powf(expo) * w[j - 1] * w[j - 1] / (4.0 * PI);
        terms[j] = t;
        acc.add(t);
    }
    let (tb, te) = tail_diagnostics(&terms, s.value(), &[r]);
    let factor = convention.factor(s);
    Ok(PerimeterValue {
        value: factor * acc.value(),
        s,
        k,
        tail_bound: factor * tb,
        tail_estimate: factor * te,
        convention,
    })
}

/// Perimeter of the cylinder ℝ × E₁ ⊂ ℝ², summed over the tensor basis
/// h_j ⊗ h_k (eigenvalue j + k) with total degree at most K.
pub fn cylinder_perimeter_2d(
    e1: &GaussianSet,
    s: FractionalOrder,
    k: usize,
    convention: Convention,
) -> Result<PerimeterValue> {
    let c = SpectralCoefficients::new(e1, k)?;
    let f = c.values();
    let half_s = 0.5 * s.value();
    // χ_{ℝ×E₁}(x₁, x₂) = 1·χ_{E₁}(x₂): only the h_0 factor survives in x₁.
    let coeff = |j: usize, l: usize| if j == 0 { f[l] } else { 0.0 };
    let mut by_degree = vec![0.0; k + 1];
    let mut acc = CompensatedSum::new();
    for j in 0..=k {
        for l in 0..=(k - j) {
            let a = coeff(j, l);
            let n = j + l;
            if n == 0 || a == 0.0 {
                continue;
            }
            let t = 0.5 * (n as f64).powf(half_s) * a * a;
            by_degree[n] += t;
            acc.add(t);
        }
    }
    let (tb, te) = tail_diagnostics(&by_degree, s.value(), &finite_endpoints(e1));
    let factor = convention.factor(s);
    Ok(PerimeterValue {
        value: factor * acc.value(),
        s,
        k,
        tail_bound: factor * tb,
        tail_estimate: factor * te,
        convention,
    })
}

/// √(π/2)·π⁻²·e^{−r²/2}: the stated approximate limit of (1−s)·P_s(H_r) as
/// s → 1⁻ in the remark convention.
pub fn asymptotic_limit(r: f64) -> f64 {
    (PI / 2.0).sqrt() / (PI * PI) * (-0.5 * r * r).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: f64) -> FractionalOrder {
        FractionalOrder::new(v).unwrap()
    }

    #[test]
    fn halfline_coefficient_anchors() {
        assert_eq!(coeff_halfline(0.0, 0), 0.5);
        assert!(coeff_halfline(0.0, 2).abs() < 1e-16);
        assert!((coeff_halfline(0.0, 1) + 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn set_and_halfline_paths_agree() {
        let h = GaussianSet::left_halfline(0.3);
        let c = SpectralCoefficients::new(&h, 50).unwrap();
        for k in 0..=50 {
            assert!((coeff_set(&h, k) - coeff_halfline(0.3, k)).abs() < 1e-15);
            assert!((c.values()[k] - coeff_halfline(0.3, k)).abs() < 1e-15);
        }
    }

    #[test]
    fn empty_set_has_zero_perimeter() {
        let p = perimeter_spectral(&GaussianSet::empty(), s(0.5), 100, Convention::WithConstant)
            .unwrap();
        assert_eq!(p.value, 0.0);
        assert_eq!(p.tail_bound, 0.0);
        assert!(perimeter_spectral(&GaussianSet::empty(), s(0.5), 0, Convention::Remark).is_err());
    }

    #[test]
    fn first_halfspace_summand() {
        let p = halfspace_series(0.0, s(0.37), 1, Convention::Remark).unwrap();
        assert!((p.value - 1.0 / (4.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn asymptotic_anchor() {
        assert!((asymptotic_limit(0.0) - 0.126_987).abs() < 5e-7);
    }
}
