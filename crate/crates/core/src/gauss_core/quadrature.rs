//! Gauss–Hermite rules against γ₁, Gauss–Legendre rules on intervals, and an
//! adaptive Gauss–Kronrod integrator.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

/// Nodes and weights of an interpolatory rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Σ w_i f(x_i).
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let mut acc = CompensatedSum::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(x));
        }
        acc.value()
    }
}

pub const MAX_HERMITE_ORDER: usize = 500;

/// n-point Gauss–Hermite rule for ∫ f dγ₁.
///
/// Eigenvalues of the Jacobi matrix of the orthonormal family give starting
/// nodes, which Newton's method on h_n then polishes; weights follow from
/// w_i = 1 / (n·h_{n−1}(x_i)²). For large n the outermost weights underflow
/// to zero, which is harmless.
pub fn gauss_hermite_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_HERMITE_ORDER {
        return Err(Error::Convergence {
            what: "gauss_hermite_rule",
            detail: format!("order n={n} outside 1..={MAX_HERMITE_ORDER}"),
        });
    }
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64).sqrt()
        } else {
            0.0
        }
    });
    let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    guesses.sort_by(f64::total_cmp);

    let nf = n as f64;
    let half = n.div_ceil(2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // Polish the nonnegative half and mirror it.
    for i in 0..half {
        let idx = n - 1 - i;
        let mut x = guesses[idx].abs();
        if n % 2 == 1 && i == half - 1 {
            x = 0.0;
        }
        let mut converged = x == 0.0;
        for _ in 0..50 {
            if converged {
                break;
            }
            let (hn, hn1) = hermite_pair(n, x);
            let dx = hn / (nf.sqrt() * hn1);
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                converged = true;
            }
        }
        if !converged || !x.is_finite() {
            return Err(Error::Convergence {
                what: "gauss_hermite_rule",
                detail: format!("Newton polish of node {idx} for order n={n}"),
            });
        }
        let (_, hn1) = hermite_pair(n, x);
        let w = 1.0 / (nf * hn1 * hn1);
        nodes[idx] = x;
        nodes[n - 1 - idx] = -x;
        weights[idx] = w;
        weights[n - 1 - idx] = w;
    }
    Ok(QuadratureRule {
        order: n,
        nodes,
        weights,
    })
}

/// (h_n(x), h_{n−1}(x)).
fn hermite_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// n-point Gauss–Legendre rule on [a, b].
pub fn gauss_legendre_rule(n: usize, a: f64, b: f64) -> QuadratureRule {
    assert!(n >= 1, "Gauss–Legendre order must be positive");
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() <= 1e-15 {
                break;
            }
        }
        let wgt = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = mid - half * z;
        nodes[n - 1 - i] = mid + half * z;
        weights[i] = half * wgt;
        weights[n - 1 - i] = half * wgt;
    }
    if n % 2 == 1 {
        nodes[n / 2] = mid;
    }
    QuadratureRule {
        order: n,
        nodes,
        weights,
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs_k = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        let s = f1 + f2;
        k += WGK[j] * s;
        abs_k += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    // Rounding floor on the estimate, as in QUADPACK.
    let floor = 50.0 * f64::EPSILON * (abs_k * h).abs();
    (k * h, ((k - g) * h).abs().max(floor))
}

/// Adaptive 15-point Gauss–Kronrod quadrature of f over a finite [a, b].
///
/// Stops when the summed error estimate is below max(abs_tol, rel_tol·|I|).
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate", if a.is_finite() { b } else { a }, "finite limits"));
    }
    if a == b {
        return Ok(0.0);
    }
    const MAX_INTERVALS: usize = 2000;
    let (v, e) = kronrod15(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            let mut acc = CompensatedSum::new();
            for p in &pieces {
                acc.add(p.2);
            }
            return Ok(acc.value());
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::Convergence {
                what: "integrate",
                detail: format!("error estimate {err:.3e} after {MAX_INTERVALS} subintervals on [{a}, {b}]"),
            });
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::Convergence {
                what: "integrate",
                detail: format!("subinterval [{lo}, {hi}] cannot be bisected further"),
            });
        }
        let (v1, e1) = kronrod15(&f, lo, mid);
        let (v2, e2) = kronrod15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}
