use crate::error::Result;
use crate::gauss_core::{extension_constant, FractionalOrder};
use crate::set_model::GaussianSet;
use crate::spectral::SpectralCoefficients;
use crate::summation::CompensatedSum;

use super::profile::SubordinationProfile;

/// U_E(x, z) = f_0 + Σ_{k≥1} f_k ψ_{s/2}(√k z) h_k(x), truncated at K.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionField {
    coeffs: SpectralCoefficients,
    s: FractionalOrder,
    profile: SubordinationProfile,
}

impl ExtensionField {
    pub fn new(coeffs: SpectralCoefficients, s: FractionalOrder) -> Self {
        let profile = SubordinationProfile::new(s.sigma()).expect("s/2 lies in (0, ½)");
        Self { coeffs, s, profile }
    }

    pub fn from_set(e: &GaussianSet, s: FractionalOrder, k: usize) -> Result<Self> {
        Ok(Self::new(SpectralCoefficients::new(e, k)?, s))
    }

    pub fn coeffs(&self) -> &SpectralCoefficients {
        &self.coeffs
    }

    pub fn s(&self) -> FractionalOrder {
        self.s
    }

    pub fn profile(&self) -> &SubordinationProfile {
        &self.profile
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.truncation()
    }

    /// The field of the complement, U_{E^c} = 1 − U_E.
    pub fn complement(&self) -> Self {
        Self::new(self.coeffs.complement(), self.s)
    }

    /// ψ_{s/2}(√k z) for every retained mode.
    pub fn multipliers(&self, z: f64) -> Result<Vec<f64>> {
        let k = self.truncation();
        if z == 0.0 {
            Ok(vec![1.0; k + 1])
        } else {
            self.profile.mode_multipliers(k, z)
        }
    }

    /// The field restricted to height z.
    pub fn slice(&self, z: f64) -> Result<ExtensionSlice> {
        Ok(self.slice_with(z, &self.multipliers(z)?))
    }

    /// As [`Self::slice`], with multipliers from [`Self::multipliers`].
    pub fn slice_with(&self, z: f64, psi: &[f64]) -> ExtensionSlice {
        let c = self.coeffs.values().iter().zip(psi).map(|(f, p)| f * p).collect();
        ExtensionSlice::from_modal(z, c)
    }

    pub fn evaluate(&self, x: f64, z: f64) -> Result<f64> {
        Ok(self.slice(z)?.evaluate(x))
    }
}

/// Free-function form of [`ExtensionField::evaluate`].
pub fn evaluate_extension(field: &ExtensionField, x: f64, z: f64) -> Result<f64> {
    field.evaluate(x, z)
}

const LANES: usize = 8;
/// Beyond this |x| the lane kernel could overflow for very large K, so
/// evaluation falls back to the rescaling scalar loop.
const LANE_LIMIT: f64 = 20.0;

/// Σ_k c_k h_k(x) at one height.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionSlice {
    z: f64,
    c: Vec<f64>,
    /// √k and 1/√(k+1) for the recurrence.
    root: Vec<f64>,
    inv_root_next: Vec<f64>,
}

impl ExtensionSlice {
    pub fn from_modal(z: f64, c: Vec<f64>) -> Self {
        let n = c.len();
        let root = (0..n).map(|k| (k as f64).sqrt()).collect();
        let inv_root_next = (0..n).map(|k| 1.0 / ((k + 1) as f64).sqrt()).collect();
        Self {
            z,
            c,
            root,
            inv_root_next,
        }
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// The modal coefficients c_k = f_k ψ(√k z).
    pub fn modal(&self) -> &[f64] {
        &self.c
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let n = self.c.len();
        let mut acc = self.c[0];
        let (mut prev, mut cur) = (0.0_f64, 1.0_f64);
        let mut log_scale = 0.0_f64;
        for k in 0..n - 1 {
            let next = (x * cur - self.root[k] * prev) * self.inv_root_next[k];
            prev = cur;
            cur = next;
            if cur.abs() > 1e250 {
                cur *= 1e-250;
                prev *= 1e-250;
                log_scale += 250.0 * std::f64::consts::LN_10;
            }
            let t = self.c[k + 1] * cur;
            acc += if log_scale == 0.0 || t == 0.0 {
                t
            } else {
                t.signum() * (t.abs().ln() + log_scale).exp()
            };
        }
        acc
    }

    /// Evaluates at many points, eight recurrences at a time.
    pub fn evaluate_many(&self, xs: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(xs.len());
        let n = self.c.len();
        for chunk in xs.chunks(LANES) {
            if chunk.len() < LANES || chunk.iter().any(|x| x.abs() > LANE_LIMIT) {
                out.extend(chunk.iter().map(|&x| self.evaluate(x)));
                continue;
            }
            let mut x = [0.0; LANES];
            x.copy_from_slice(chunk);
            let mut acc = [self.c[0]; LANES];
            let mut prev = [0.0; LANES];
            let mut cur = [1.0; LANES];
            for k in 0..n - 1 {
                let (a, b, ck) = (self.root[k], self.inv_root_next[k], self.c[k + 1]);
                for l in 0..LANES {
                    let next = (x[l] * cur[l] - a * prev[l]) * b;
                    prev[l] = cur[l];
                    cur[l] = next;
                    acc[l] += ck * next;
                }
            }
            out.extend_from_slice(&acc);
        }
        out
    }
}

/// ∫_E (1 − U_E(·, z)) dγ = Σ_{k≥1} f_k² (1 − ψ_{s/2}(√k z)).
pub fn trace_gap(e: &GaussianSet, s: FractionalOrder, z: f64, k: usize) -> Result<f64> {
    trace_gap_of(&ExtensionField::from_set(e, s, k)?, z)
}

/// [`trace_gap`] for a field that is already built.
pub fn trace_gap_of(field: &ExtensionField, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(0.0);
    }
    let f = field.coeffs().values();
    let psi = field.profile().mode_multipliers(field.truncation(), z)?;
    let mut acc = CompensatedSum::new();
    for k in 1..f.len() {
        acc.add(f[k] * f[k] * (1.0 - psi[k]));
    }
    Ok(acc.value().max(0.0))
}

/// (−z^{1−2σ} ∂_z ψ_σ(√k z), K_{2σ} k^σ) for a single mode.
pub fn boundary_flux_check(sigma: f64, k: usize, z: f64) -> Result<(f64, f64)> {
    let profile = SubordinationProfile::new(sigma)?;
    if k == 0 {
        return Ok((0.0, 0.0));
    }
    let root = (k as f64).sqrt();
    let flux = -z.powf(1.0 - 2.0 * sigma) * root * profile.derivative(root * z)?;
    Ok((flux, extension_constant(sigma)? * (k as f64).powf(sigma)))
}

/// Heights used for the Richardson extrapolation of the boundary flux.
pub const FLUX_HEIGHTS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// The z → 0⁺ limit of the boundary flux by two Richardson steps, removing
/// the z^{2−2σ} and z² terms of the small-z expansion, next to K_{2σ} k^σ.
pub fn boundary_flux_limit(sigma: f64, k: usize) -> Result<(f64, f64)> {
    let mut f = [0.0; 3];
    let mut exact = 0.0;
    for (slot, &z) in f.iter_mut().zip(&FLUX_HEIGHTS) {
        let (v, e) = boundary_flux_check(sigma, k, z)?;
        *slot = v;
        exact = e;
    }
    let r1 = 10f64.powf(2.0 - 2.0 * sigma);
    let a = (r1 * f[1] - f[0]) / (r1 - 1.0);
    let b = (r1 * f[2] - f[1]) / (r1 - 1.0);
    Ok(((100.0 * b - a) / 99.0, exact))
}
