//! Orthonormal probabilists' Hermite polynomials, h_n = He_n / √(n!),
//! generated by the three-term recurrence
//! h_{n+1}(x) = (x·h_n(x) − √n·h_{n−1}(x)) / √(n+1).

/// h_n(x).
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    cur
}

/// h_0(x), …, h_n(x).
pub fn hermite_values(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let (mut prev, mut cur) = (0.0, 1.0);
    out.push(cur);
    for k in 0..n {
        let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

const RESCALE_ABOVE: f64 = 1e100;
const LN_RESCALE: f64 = 230.258_509_299_404_6; // ln(1e100)

/// e^{log_weight}·h_k(x) for k = 0..=n.
///
/// The recurrence runs on rescaled values with the exponent carried
/// separately, so the product is finite whenever the true value is, even
/// when h_k(x) alone would overflow or e^{log_weight} alone would underflow.
pub fn weighted_hermite_values(n: usize, x: f64, log_weight: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut log_scale = log_weight;
    let mut factor = log_scale.exp();
    let emit = |p: f64, log_scale: f64, factor: f64| -> f64 {
        if p == 0.0 {
            0.0
        } else if factor > 1e-290 && factor.is_finite() {
            p * factor
        } else {
            p.signum() * (log_scale + p.abs().ln()).exp()
        }
    };
    let (mut prev, mut cur) = (0.0_f64, 1.0_f64);
    out.push(emit(cur, log_scale, factor));
    for k in 0..n {
        let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur *= 1e-100;
            prev *= 1e-100;
            log_scale += LN_RESCALE;
            factor = log_scale.exp();
        }
        out.push(emit(cur, log_scale, factor));
    }
    out
}
