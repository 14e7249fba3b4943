//! Finite unions of open intervals under the standard Gaussian measure.
//!
//! A [`GaussianSet`] is kept in canonical form: intervals sorted, disjoint and
//! not touching, with ±∞ stored as IEEE infinities. Since γ₁ has no atoms,
//! dropping or adding single points never changes a measure, and the
//! canonical form makes set equality a plain comparison.

use std::fmt;

use crate::error::{Error, Result};
use crate::gauss_core::{gauss_mass, phi_inv};
use crate::summation::compensated_sum;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GaussianSet {
    intervals: Vec<(f64, f64)>,
}

impl GaussianSet {
    /// Builds the canonical union of the given open intervals.
    ///
    /// Each interval needs a < b, no NaN, and a < +∞, b > −∞. Overlapping or
    /// touching intervals are merged.
    pub fn new<I: IntoIterator<Item = (f64, f64)>>(intervals: I) -> Result<Self> {
        let mut v: Vec<(f64, f64)> = Vec::new();
        for (a, b) in intervals {
            if a.is_nan() || b.is_nan() {
                return Err(Error::domain("interval endpoint", f64::NAN, "the extended reals"));
            }
            if !(a < b) || a == f64::INFINITY || b == f64::NEG_INFINITY {
                return Err(Error::domain("interval", a, "a left endpoint below the right one"));
            }
            v.push((a, b));
        }
        Ok(Self::from_unsorted(v))
    }

    fn from_unsorted(mut v: Vec<(f64, f64)>) -> Self {
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self { intervals: out }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn real_line() -> Self {
        Self {
            intervals: vec![(f64::NEG_INFINITY, f64::INFINITY)],
        }
    }

    /// (a, b); panics unless a < b.
    pub fn interval(a: f64, b: f64) -> Self {
        Self::new([(a, b)]).expect("interval needs a < b")
    }

    /// The left halfline (−∞, r).
    pub fn left_halfline(r: f64) -> Self {
        Self::interval(f64::NEG_INFINITY, r)
    }

    /// The right halfline (r, ∞).
    pub fn right_halfline(r: f64) -> Self {
        Self::interval(r, f64::INFINITY)
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        compensated_sum(self.intervals.iter().map(|&(a, b)| gauss_mass(a, b)))
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a < x && x < b)
    }

    /// Finite endpoints with their orientation: `+1` where the set starts
    /// (a left endpoint a_i), `−1` where it ends (a right endpoint b_i).
    pub fn signed_endpoints(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(2 * self.intervals.len());
        for &(a, b) in &self.intervals {
            if a.is_finite() {
                out.push((a, 1.0));
            }
            if b.is_finite() {
                out.push((b, -1.0));
            }
        }
        out
    }

    pub fn complement(&self) -> Self {
        self.combine(&Self::empty(), |x, _| !x)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x || y)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x && y)
    }

    /// self \ other.
    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x && !y)
    }

    pub fn symm_diff(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x != y)
    }

    /// The image under x ↦ −x.
    pub fn reflect(&self) -> Self {
        Self::from_unsorted(self.intervals.iter().map(|&(a, b)| (-b, -a)).collect())
    }

    /// Pointwise boolean combination, evaluated on the elementary gaps
    /// between all endpoints of both sets.
    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let mut cuts: Vec<f64> = self
            .intervals
            .iter()
            .chain(&other.intervals)
            .flat_map(|&(a, b)| [a, b])
            .filter(|x| x.is_finite())
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut bounds = Vec::with_capacity(cuts.len() + 2);
        bounds.push(f64::NEG_INFINITY);
        bounds.extend(cuts);
        bounds.push(f64::INFINITY);
        let mut out: Vec<(f64, f64)> = Vec::new();
        for w in bounds.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let probe = match (lo.is_finite(), hi.is_finite()) {
                (true, true) => 0.5 * (lo + hi),
                (false, true) => hi - 1.0,
                (true, false) => lo + 1.0,
                (false, false) => 0.0,
            };
            if op(self.contains(probe), other.contains(probe)) {
                match out.last_mut() {
                    Some(last) if last.1 == lo => last.1 = hi,
                    _ => out.push((lo, hi)),
                }
            }
        }
        Self { intervals: out }
    }
}

fn fmt_bound(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        // Shortest representation that round-trips.
        format!("{x:?}")
    }
}

impl fmt::Display for GaussianSet {
    /// The CLI grammar: `(a,b)|(c,d)`; the empty set prints as `{}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        for (i, &(a, b)) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "({},{})", fmt_bound(a), fmt_bound(b))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// (−∞, r)
    Left,
    /// (r, ∞)
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfline {
    pub orientation: Orientation,
    pub r: f64,
}

impl Halfline {
    pub fn left(r: f64) -> Self {
        Self {
            orientation: Orientation::Left,
            r,
        }
    }

    pub fn right(r: f64) -> Self {
        Self {
            orientation: Orientation::Right,
            r,
        }
    }

    pub fn to_set(self) -> GaussianSet {
        match self.orientation {
            Orientation::Left => GaussianSet::left_halfline(self.r),
            Orientation::Right => GaussianSet::right_halfline(self.r),
        }
    }

    pub fn measure(self) -> f64 {
        self.to_set().measure()
    }
}

fn nondegenerate_measure(e: &GaussianSet) -> Result<f64> {
    let m = e.measure();
    if m > 0.0 && m < 1.0 {
        Ok(m)
    } else {
        Err(Error::DegenerateSet { measure: m })
    }
}

impl GaussianSet {
    /// The set as a halfline, if it is one.
    pub fn as_halfline(&self) -> Option<Halfline> {
        match *self.intervals.as_slice() {
            [(a, b)] if a == f64::NEG_INFINITY && b.is_finite() => Some(Halfline::left(b)),
            [(a, b)] if a.is_finite() && b == f64::INFINITY => Some(Halfline::right(a)),
            _ => None,
        }
    }
}

/// The left halfline with the same Gaussian measure as `e`. Halflines map
/// exactly, without a round trip through Φ⁻¹.
pub fn ehrhard_symmetrize(e: &GaussianSet) -> Result<Halfline> {
    let m = nondegenerate_measure(e)?;
    Ok(match e.as_halfline() {
        Some(Halfline { orientation: Orientation::Left, r }) => Halfline::left(r),
        Some(Halfline { orientation: Orientation::Right, r }) => Halfline::left(-r),
        None => Halfline::left(phi_inv(m)?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymmetry {
    pub value: f64,
    pub halfline: Halfline,
}

/// Gaussian Fraenkel asymmetry γ(E Δ H)/γ(E), minimized over the left and
/// right halflines H with γ(H) = γ(E). Ties go to the left halfline.
/// The ratio is at most 2, reached when E misses both halflines.
pub fn asymmetry(e: &GaussianSet) -> Result<Asymmetry> {
    let m = nondegenerate_measure(e)?;
    if let Some(halfline) = e.as_halfline() {
        return Ok(Asymmetry { value: 0.0, halfline });
    }
    let r = phi_inv(m)?;
    let left = Halfline::left(r);
    let right = Halfline::right(-r);
    let dl = (e.symm_diff(&left.to_set()).measure() / m).min(2.0);
    let dr = (e.symm_diff(&right.to_set()).measure() / m).min(2.0);
    Ok(if dl <= dr {
        Asymmetry {
            value: dl,
            halfline: left,
        }
    } else {
        Asymmetry {
            value: dr,
            halfline: right,
        }
    })
}
