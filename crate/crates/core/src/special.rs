//! Special functions on the real line: Laguerre and Hermite families.
//!
//! Everything here is evaluated by three-term recurrences. The normalized
//! variants fold the growing prefactors into the recurrence so that large
//! arguments neither overflow nor lose precision.

use std::f64::consts::PI;

/// `ln(n!)` by direct summation; exact enough for the small orders used here.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub fn factorial(n: usize) -> f64 {
    (2..=n).map(|k| k as f64).product()
}

/// Generalized Laguerre polynomial `L_n^{(a)}(x)`.
pub fn laguerre(n: usize, a: f64, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `[L_0^{(a)}(x), …, L_{len-1}^{(a)}(x)]`.
pub fn laguerre_all(len: usize, a: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..len {
        out.push(cur);
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    out
}

/// Normalized Laguerre functions
/// `g_n = sqrt(n!/(n+k)!) · x^{k/2} · e^{-x/2} · L_n^{(k)}(x)` for `n < len`.
///
/// These are the moduli of displacement matrix elements, bounded by one in
/// absolute value, and the recurrence below stays well scaled for any `x ≥ 0`.
pub fn normalized_laguerre(len: usize, k: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let g0 = if x == 0.0 {
        if k == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        (0.5 * k as f64 * x.ln() - 0.5 * x - 0.5 * ln_factorial(k)).exp()
    };
    let kf = k as f64;
    let mut prev = 0.0;
    let mut cur = g0;
    for n in 0..len {
        out.push(cur);
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + kf - x) * cur - (nf * (nf + kf)).sqrt() * prev)
            / ((nf + 1.0) * (nf + kf + 1.0)).sqrt();
        prev = cur;
        cur = next;
    }
    out
}

/// Orthonormal Hermite functions `ψ_0(x) … ψ_{len-1}(x)`.
pub fn hermite_functions(len: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    hermite_functions_into(x, len, &mut out);
    out
}

/// Same as [`hermite_functions`], reusing a buffer.
pub fn hermite_functions_into(x: f64, len: usize, out: &mut Vec<f64>) {
    out.clear();
    if len == 0 {
        return;
    }
    let psi0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(psi0);
    if len == 1 {
        return;
    }
    out.push(std::f64::consts::SQRT_2 * x * psi0);
    for n in 1..len - 1 {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite_poly(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Smooth step that is 1 below `lo`, 0 above `hi`, and C-infinity in between.
pub fn smooth_cutoff(x: f64, lo: f64, hi: f64) -> f64 {
    if x <= lo {
        return 1.0;
    }
    if x >= hi {
        return 0.0;
    }
    let t = (x - lo) / (hi - lo);
    let h = |u: f64| if u <= 0.0 { 0.0 } else { (-1.0 / u).exp() };
    let a = h(1.0 - t);
    a / (a + h(t))
}
