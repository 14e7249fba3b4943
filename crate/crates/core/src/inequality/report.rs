use crate::error::{Error, Result};
use crate::gauss_core::{phi_inv, FractionalOrder};
use crate::set_model::{asymmetry, Asymmetry, GaussianSet};
use crate::spectral::{
    halfspace_series, perimeter_of, Convention, PerimeterValue, SpectralCoefficients,
};

use super::constants::{constant_c, z_thresholds, ConstantParams, ZThresholds};

/// Everything the checks need to know about one set at one order s.
#[derive(Debug, Clone)]
pub struct SetAnalysis {
    pub coeffs: SpectralCoefficients,
    pub s: FractionalOrder,
    pub m: f64,
    pub asym: Asymmetry,
    pub p_e: PerimeterValue,
    /// Perimeter of the halfline with the same measure.
    pub p_h: PerimeterValue,
}

impl SetAnalysis {
    pub fn new(e: &GaussianSet, s: FractionalOrder, k: usize, convention: Convention) -> Result<Self> {
        Self::from_coefficients(SpectralCoefficients::new(e, k)?, s, convention)
    }

    pub fn from_coefficients(
        coeffs: SpectralCoefficients,
        s: FractionalOrder,
        convention: Convention,
    ) -> Result<Self> {
        let asym = asymmetry(coeffs.set())?;
        let m = coeffs.set().measure();
        let k = coeffs.truncation();
        let p_e = perimeter_of(&coeffs, s, convention);
        let p_h = halfspace_series(phi_inv(m)?, s, k, convention)?;
        Ok(Self {
            coeffs,
            s,
            m,
            asym,
            p_e,
            p_h,
        })
    }

    pub fn set(&self) -> &GaussianSet {
        self.coeffs.set()
    }

    pub fn deficit(&self) -> f64 {
        self.p_e.value - self.p_h.value
    }

    /// Twice the summed tail bounds of both perimeters.
    pub fn budget(&self) -> f64 {
        2.0 * (self.p_e.tail_bound + self.p_h.tail_bound)
    }

    /// z0 and z1 evaluated with P + tail bound, which can only shrink them.
    pub fn conservative_thresholds(&self) -> Result<ZThresholds> {
        z_thresholds(self.asym.value, self.m, self.s, self.p_e.upper(), self.p_h.upper())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Main,
    /// P(E) > 2 P(H): the bound P(H)/2^{2/s} · A^{2/s} is used.
    LargePerimeter,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Main => "main",
            Branch::LargePerimeter => "large_perimeter",
        }
    }
}

/// One evaluation of the quantitative inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct DeficitReport {
    pub set: GaussianSet,
    pub s: FractionalOrder,
    pub m: f64,
    pub p_e: PerimeterValue,
    pub p_h: PerimeterValue,
    pub deficit: f64,
    /// Asymmetry of E, or of E^c when γ(E) > ½.
    pub asym: f64,
    /// The value of c assumed for this report.
    pub c_assumed: f64,
    /// Multiplier of A^{2/s} on the branch taken.
    pub constant: f64,
    pub rhs: f64,
    pub budget: f64,
    pub satisfied: bool,
    pub branch: Branch,
    pub z0: f64,
    pub z1: f64,
}

impl DeficitReport {
    pub fn from_analysis(a: &SetAnalysis, params: ConstantParams) -> Result<Self> {
        let sv = a.s.value();
        let deficit = a.deficit();
        // The inequality is stated for γ(E) ≤ ½; larger sets are replaced by
        // their complement, which has the same perimeter and deficit.
        let (m_norm, asym) = if a.m > 0.5 {
            (1.0 - a.m, asymmetry(&a.set().complement())?.value)
        } else {
            (a.m, a.asym.value)
        };
        let pow = asym.powf(2.0 / sv);
        let (branch, constant) = if a.p_e.value > 2.0 * a.p_h.value {
            (Branch::LargePerimeter, a.p_h.value / 2f64.powf(2.0 / sv))
        } else {
            (Branch::Main, constant_c(a.s, a.m, params, a.p_h.value)?)
        };
        let rhs = constant * pow;
        let budget = a.budget();
        let z = z_thresholds(asym, m_norm, a.s, a.p_e.value, a.p_h.value)?;
        Ok(Self {
            set: a.set().clone(),
            s: a.s,
            m: a.m,
            p_e: a.p_e,
            p_h: a.p_h,
            deficit,
            asym,
            c_assumed: params.c,
            constant,
            rhs,
            budget,
            satisfied: deficit >= rhs - budget,
            branch,
            z0: z.z0,
            z1: z.z1,
        })
    }
}

/// Runs the deficit inequality for E at order s with truncation K in the
/// with-constant convention.
pub fn verify_main(
    e: &GaussianSet,
    s: FractionalOrder,
    params: ConstantParams,
    k: usize,
) -> Result<DeficitReport> {
    let m = e.measure();
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::DegenerateSet { measure: m });
    }
    let a = SetAnalysis::new(e, s, k, Convention::WithConstant)?;
    DeficitReport::from_analysis(&a, params)
}
