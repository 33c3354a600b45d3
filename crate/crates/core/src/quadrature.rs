//! One-dimensional quadrature rules and a deterministic parallel reduction.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform axis with inclusive endpoints, integrated by the trapezoid rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidConfig(format!("axis needs at least 2 points, got {count}")));
        }
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::InvalidConfig(format!("axis extent {lo}:{hi} is empty")));
        }
        Ok(Self { lo, hi, count })
    }

    /// Symmetric axis `[-half, half]`.
    pub fn symmetric(half: f64, count: usize) -> Result<Self> {
        Self::new(-half, half, count)
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.count - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.node(i)).collect()
    }

    pub fn weight(&self, i: usize) -> f64 {
        let h = self.spacing();
        if i == 0 || i + 1 == self.count {
            0.5 * h
        } else {
            h
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.weight(i)).collect()
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.count)
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// Parses `lo:hi:count`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidConfig(format!("axis `{s}` is not lo:hi:count")));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("axis `{s}`: bad number `{t}`")))
        };
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidConfig(format!("axis `{s}`: bad count")))?;
        Axis::new(num(parts[0])?, num(parts[1])?, count)
    }
}

/// Nodes and weights of an n-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = mid - half * z;
        x[n - 1 - i] = mid + half * z;
        w[i] = half * wi;
        w[n - 1 - i] = half * wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre: `panels` equal panels of `order` nodes on `[a, b]`.
pub fn composite_gauss_legendre(order: usize, panels: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (z, wz) = gauss_legendre(order, -1.0, 1.0);
    let h = (b - a) / panels as f64;
    let mut x = Vec::with_capacity(order * panels);
    let mut w = Vec::with_capacity(order * panels);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (zi, wi) in z.iter().zip(&wz) {
            x.push(lo + 0.5 * h * (zi + 1.0));
            w.push(0.5 * h * wi);
        }
    }
    (x, w)
}

/// Equispaced periodic rule on `[0, 2π)`.
pub fn periodic(n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 * PI / n as f64;
    ((0..n).map(|j| j as f64 * h).collect(), vec![h; n])
}

const CHUNK: usize = 256;

/// Sum of `f(i)` for `i < n`, evaluated in parallel with a reduction tree that
/// depends only on `n`, so results are bit-identical across thread counts.
pub fn par_sum<F>(n: usize, f: F) -> C64
where
    F: Fn(usize) -> C64 + Sync,
{
    let partials: Vec<C64> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            (lo..hi).map(&f).fold(C64::new(0.0, 0.0), |a, b| a + b)
        })
        .collect();
    partials.into_iter().fold(C64::new(0.0, 0.0), |a, b| a + b)
}

/// Real-valued counterpart of [`par_sum`].
pub fn par_sum_real<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    par_sum(n, |i| C64::new(f(i), 0.0)).re
}

/// Richardson extrapolation to `h → 0` for samples `values[j] = F(h_j)` of a
/// function with a regular power series in `h`.
pub fn richardson(hs: &[f64], values: &[C64]) -> C64 {
    // Neville's scheme evaluated at zero.
    let mut p = values.to_vec();
    let n = hs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (a, b) = (hs[i], hs[i + level]);
            p[i] = (p[i + 1] * a - p[i] * b) / (a - b);
        }
    }
    p[0]
}
