//! Transforms from symplectic and optical tomograms to photon-number
//! tomograms, the characteristic function of an optical tomogram and its
//! moments.
//!
//! The transform kernel is
//! `K(X, μ, ν, n, α) = (1/2π) ⟨n| D(α) e^{i(X − μq − νp)} D(−α) |n⟩`,
//! which in closed form reads
//! `(1/2π) exp[iX + ((ν+iμ)/√2)α − ((ν−iμ)/√2)α*] e^{−(μ²+ν²)/4} L_n((μ²+ν²)/2)`.
//! The displacement order matches the photon tomogram
//! `⟨n| D(α) ρ D(α)⁻¹ |n⟩`.

use std::f64::consts::{PI, SQRT_2};

use log::warn;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, periodic, Axis};
use crate::scheme::{LabelPoint, SymbolGrid};
use crate::special::{factorial, laguerre};
use crate::symplectic::fock_tomogram_closed;

/// One evaluation of the symplectic-to-photon kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformKernelSample {
    pub x: f64,
    pub mu: f64,
    pub nu: f64,
    pub n: usize,
    pub alpha: C64,
    pub value: C64,
}

impl TransformKernelSample {
    pub fn new(x: f64, mu: f64, nu: f64, n: usize, alpha: C64) -> Self {
        Self { x, mu, nu, n, alpha, value: symplectic_to_photon_kernel(x, mu, nu, n, alpha) }
    }
}

/// Closed-form transform kernel.
pub fn symplectic_to_photon_kernel(x: f64, mu: f64, nu: f64, n: usize, alpha: C64) -> C64 {
    let gamma = C64::new(nu, mu) / SQRT_2;
    let r2 = 0.5 * (mu * mu + nu * nu);
    let shift = gamma * alpha - gamma.conj() * alpha.conj();
    (C64::new(0.0, x) + shift).exp() * ((-0.5 * r2).exp() * laguerre(n, 0.0, r2) / (2.0 * PI))
}

/// A transformed value with its imaginary residue and an optional warning
/// about the input grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MappedValue {
    pub value: f64,
    pub imag: f64,
    pub warning: Option<String>,
}

/// Frames beyond this radius contribute less than `e^{−R²/2}` relative weight.
pub const SYMPLECTIC_REACH: f64 = 6.0;

/// `w(n, α) = ∫ K(X, μ, ν, n, α) w(X, μ, ν) dX dμ dν` by the quadrature
/// carried by the grid.
pub fn photon_from_symplectic(w: &SymbolGrid, n: usize, alpha: C64) -> Result<MappedValue> {
    let mut reach: f64 = 0.0;
    for x in w.labels() {
        match *x {
            LabelPoint::Symplectic { mu, nu, .. } => reach = reach.max(mu.hypot(nu)),
            _ => return Err(Error::LabelMismatch { label: format!("{x:?}"), scheme: "symplectic" }),
        }
    }
    let labels = w.labels();
    let weights = w.weights();
    let values = w.values();
    let total: C64 = (0..labels.len())
        .into_par_iter()
        .with_min_len(1024)
        .map(|i| match labels[i] {
            LabelPoint::Symplectic { x, mu, nu } => values[i] * symplectic_to_photon_kernel(x, mu, nu, n, alpha) * weights[i],
            _ => unreachable!(),
        })
        .sum();
    let mut warning = None;
    if reach < SYMPLECTIC_REACH {
        warning = Some(format!("frame radius {reach:.2} below {SYMPLECTIC_REACH}; Gaussian tail not negligible"));
    } else if total.im.abs() > 1e-3 {
        warning = Some(format!("imaginary residue {:.2e}; grid under-resolved", total.im));
    }
    if let Some(msg) = &warning {
        warn!("photon_from_symplectic: {msg}");
    }
    Ok(MappedValue { value: total.re, imag: total.im, warning })
}

/// Quadrature for the optical route.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpticalQuadrature {
    /// Upper limit of the `k` integral.
    pub k_max: f64,
    /// Gauss–Legendre nodes on `[0, k_max]`.
    pub k_nodes: usize,
    /// Periodic nodes in `θ`.
    pub angles: usize,
    /// Trapezoid axis for the `X` integral.
    pub x: Axis,
}

impl Default for OpticalQuadrature {
    fn default() -> Self {
        Self { k_max: 8.0, k_nodes: 256, angles: 64, x: Axis { lo: -12.0, hi: 12.0, count: 481 } }
    }
}

impl OpticalQuadrature {
    fn check(&self) -> Option<String> {
        if self.k_max < 8.0 || self.k_nodes < 256 {
            Some(format!("k quadrature [0, {}] with {} nodes is below [0, 8] with 256", self.k_max, self.k_nodes))
        } else {
            None
        }
    }
}

/// Characteristic function of an optical tomogram tabulated on a
/// `(k, θ)` quadrature, ready to be mapped to photon-number tomograms.
#[derive(Clone, Debug)]
pub struct OpticalTransform {
    ks: Vec<f64>,
    wk: Vec<f64>,
    thetas: Vec<f64>,
    wt: Vec<f64>,
    /// `F(k_i, θ_j)` at index `j * ks.len() + i`.
    table: Vec<C64>,
    warning: Option<String>,
}

impl OpticalTransform {
    pub fn new(w_opt: &(dyn Fn(f64, f64) -> f64 + Sync), quad: &OpticalQuadrature) -> Self {
        let (ks, wk) = gauss_legendre(quad.k_nodes, 0.0, quad.k_max);
        let (thetas, wt) = periodic(quad.angles);
        let xs = quad.x.nodes();
        let wx = quad.x.weights();
        let table: Vec<C64> = thetas
            .par_iter()
            .flat_map_iter(|&t| {
                let sampled: Vec<f64> = xs.iter().zip(&wx).map(|(&x, &w)| w * w_opt(x, t)).collect();
                let xs = &xs;
                ks.iter()
                    .map(move |&k| {
                        sampled.iter().zip(xs).map(|(&f, &x)| C64::from_polar(f, k * x)).sum::<C64>()
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let warning = quad.check();
        if let Some(msg) = &warning {
            warn!("optical transform: {msg}");
        }
        Self { ks, wk, thetas, wt, table, warning }
    }

    /// `F(k, θ)` at a quadrature node.
    pub fn characteristic_at(&self, k_index: usize, theta_index: usize) -> C64 {
        self.table[theta_index * self.ks.len() + k_index]
    }

    /// `(1/2π) ∫dθ ∫k dk e^{ik√2(α1 cos θ + α2 sin θ) − k²/4} L_n(k²/2) F(k, θ)`.
    pub fn photon(&self, n: usize, alpha: C64) -> MappedValue {
        let nk = self.ks.len();
        let radial: Vec<f64> = self
            .ks
            .iter()
            .zip(&self.wk)
            .map(|(&k, &w)| w * k * (-0.25 * k * k).exp() * laguerre(n, 0.0, 0.5 * k * k))
            .collect();
        let mut total = C64::new(0.0, 0.0);
        for (j, (&t, &w)) in self.thetas.iter().zip(&self.wt).enumerate() {
            let proj = SQRT_2 * (alpha.re * t.cos() + alpha.im * t.sin());
            let row = &self.table[j * nk..(j + 1) * nk];
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..nk {
                acc += row[i] * C64::from_polar(radial[i], self.ks[i] * proj);
            }
            total += acc * w;
        }
        total /= 2.0 * PI;
        let mut warning = self.warning.clone();
        if warning.is_none() && total.im.abs() > 1e-3 {
            warning = Some(format!("imaginary residue {:.2e}", total.im));
        }
        MappedValue { value: total.re, imag: total.im, warning }
    }
}

/// Photon-number tomogram from an optical tomogram `w_opt(X, θ)`.
pub fn photon_from_optical(
    w_opt: &(dyn Fn(f64, f64) -> f64 + Sync),
    n: usize,
    alpha: C64,
    quad: &OpticalQuadrature,
) -> MappedValue {
    OpticalTransform::new(w_opt, quad).photon(n, alpha)
}

/// An optical tomogram known only at samples, for example read from a file.
///
/// Each angle keeps its samples sorted in `X` and is interpolated with a cubic
/// Hermite spline; between angles the interpolation is linear and periodic.
/// With a single angle the tomogram is taken to be phase-invariant.
#[derive(Clone, Debug)]
pub struct OpticalSamples {
    /// `(θ, xs, values)` sorted by `θ ∈ [0, 2π)`.
    angles: Vec<(f64, Vec<f64>, Vec<f64>)>,
}

impl OpticalSamples {
    /// Collect samples from symplectic labels; a frame of scale `s` is mapped
    /// to the unit frame by `w_opt(X/s, θ) = s·w(X, μ, ν)`.
    pub fn from_grid(w: &SymbolGrid) -> Result<Self> {
        let mut by_angle: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
        for (x, v) in w.labels().iter().zip(w.values()) {
            let (xv, mu, nu) = match *x {
                LabelPoint::Symplectic { x, mu, nu } => (x, mu, nu),
                _ => return Err(Error::LabelMismatch { label: format!("{x:?}"), scheme: "optical" }),
            };
            let s = mu.hypot(nu);
            if s == 0.0 {
                return Err(Error::SingularFrame);
            }
            let theta = nu.atan2(mu).rem_euclid(2.0 * PI);
            let slot = match by_angle.iter().position(|(t, _)| (t - theta).abs() < 1e-12) {
                Some(i) => i,
                None => {
                    by_angle.push((theta, Vec::new()));
                    by_angle.len() - 1
                }
            };
            by_angle[slot].1.push((xv / s, v.re * s));
        }
        if by_angle.is_empty() {
            return Err(Error::InvalidConfig("optical tomogram has no samples".into()));
        }
        by_angle.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut angles = Vec::with_capacity(by_angle.len());
        for (t, mut pts) in by_angle {
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            pts.dedup_by(|a, b| a.0 == b.0);
            if pts.len() < 2 {
                return Err(Error::InvalidConfig(format!("angle {t} has fewer than two samples")));
            }
            let (xs, vs) = pts.into_iter().unzip();
            angles.push((t, xs, vs));
        }
        Ok(Self { angles })
    }

    pub fn angle_count(&self) -> usize {
        self.angles.len()
    }

    fn along(xs: &[f64], vs: &[f64], x: f64) -> f64 {
        let n = xs.len();
        if x < xs[0] || x > xs[n - 1] {
            return 0.0;
        }
        let i = match xs.partition_point(|&v| v <= x) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let slope = |k: usize| -> f64 {
            let (a, b) = (k.saturating_sub(1), (k + 1).min(n - 1));
            (vs[b] - vs[a]) / (xs[b] - xs[a])
        };
        let h = xs[i + 1] - xs[i];
        let t = (x - xs[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        (2.0 * t3 - 3.0 * t2 + 1.0) * vs[i]
            + (t3 - 2.0 * t2 + t) * h * slope(i)
            + (-2.0 * t3 + 3.0 * t2) * vs[i + 1]
            + (t3 - t2) * h * slope(i + 1)
    }

    pub fn eval(&self, x: f64, theta: f64) -> f64 {
        if self.angles.len() == 1 {
            let (_, xs, vs) = &self.angles[0];
            return Self::along(xs, vs, x);
        }
        let theta = theta.rem_euclid(2.0 * PI);
        let n = self.angles.len();
        let hi = self.angles.partition_point(|a| a.0 <= theta) % n;
        let lo = (hi + n - 1) % n;
        let (ta, tb) = (self.angles[lo].0, self.angles[hi].0);
        let span = (tb - ta).rem_euclid(2.0 * PI);
        let frac = if span == 0.0 { 0.0 } else { (theta - ta).rem_euclid(2.0 * PI) / span };
        let a = Self::along(&self.angles[lo].1, &self.angles[lo].2, x);
        let b = Self::along(&self.angles[hi].1, &self.angles[hi].2, x);
        a * (1.0 - frac) + b * frac
    }
}

/// `F(k, θ) = ∫ e^{ikX} w_opt(X, θ) dX`.
pub fn characteristic_function(w_opt: &dyn Fn(f64, f64) -> f64, k: f64, theta: f64, x: &Axis) -> Result<C64> {
    if k < 0.0 {
        return Err(Error::InvalidConfig(format!("characteristic function needs k >= 0, got {k}")));
    }
    Ok(x.nodes()
        .into_iter()
        .enumerate()
        .map(|(i, xv)| C64::from_polar(x.weight(i) * w_opt(xv, theta), k * xv))
        .sum())
}

/// `⟨X^m⟩_θ = ∫ w_opt(X, θ) X^m dX`.
pub fn optical_moments(w_opt: &dyn Fn(f64, f64) -> f64, m: u32, theta: f64, x: &Axis) -> f64 {
    x.nodes()
        .into_iter()
        .enumerate()
        .map(|(i, xv)| x.weight(i) * w_opt(xv, theta) * xv.powi(m as i32))
        .sum()
}

/// Truncated moment series `Σ_{m ≤ order} (ik)^m ⟨X^m⟩_θ / m!`.
pub fn characteristic_from_moments(w_opt: &dyn Fn(f64, f64) -> f64, k: f64, theta: f64, order: u32, x: &Axis) -> C64 {
    (0..=order)
        .map(|m| C64::i().powu(m) * (k.powi(m as i32) / factorial(m as usize) * optical_moments(w_opt, m, theta, x)))
        .sum()
}

/// Quadrature for the Hermite–Laguerre identity, in the scaled polar
/// coordinates `X = sξ, μ = s cos θ, ν = s sin θ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityQuadrature {
    pub radial: usize,
    pub radius: f64,
    pub angles: usize,
    pub xi: Axis,
}

impl Default for IdentityQuadrature {
    fn default() -> Self {
        Self { radial: 96, radius: 12.0, angles: 64, xi: Axis { lo: -10.0, hi: 10.0, count: 256 } }
    }
}

/// Both sides of the Hermite–Laguerre integral identity for `m ≤ n`:
/// the photon tomogram of `|m⟩` in closed form and the transform of its
/// symplectic tomogram.
pub fn hermite_laguerre_sides(m: usize, n: usize, gamma: C64, quad: &IdentityQuadrature) -> Result<(f64, C64)> {
    if m > n {
        return Err(Error::InvalidConfig(format!("identity needs m <= n, got m={m} n={n}")));
    }
    let g2 = gamma.norm_sqr();
    let l = laguerre(m, (n - m) as f64, g2);
    let lhs = factorial(m) / factorial(n) * g2.powi((n - m) as i32) * (-g2).exp() * l * l;

    let (rs, wr) = gauss_legendre(quad.radial, 0.0, quad.radius);
    let (ts, wt) = periodic(quad.angles);
    let xi = quad.xi.nodes();
    let wxi = quad.xi.weights();
    let rhs: C64 = (0..rs.len())
        .into_par_iter()
        .map(|i| {
            let s = rs[i];
            // The X integral does not depend on θ for a number state.
            let mut gx = C64::new(0.0, 0.0);
            for (k, &y) in xi.iter().enumerate() {
                let w = fock_tomogram_closed(m, s * y, s, 0.0).expect("s > 0");
                gx += C64::from_polar(wxi[k] * w, s * y);
            }
            let mut acc = C64::new(0.0, 0.0);
            for (j, &t) in ts.iter().enumerate() {
                let k = symplectic_to_photon_kernel(0.0, s * t.cos(), s * t.sin(), n, gamma);
                acc += k * wt[j];
            }
            acc * gx * (s * s * wr[i])
        })
        .sum();
    Ok((lhs, rhs))
}

/// `|LHS − RHS|` of the Hermite–Laguerre identity.
pub fn hermite_laguerre_identity_residual(m: usize, n: usize, gamma: C64) -> Result<f64> {
    let (lhs, rhs) = hermite_laguerre_sides(m, n, gamma, &IdentityQuadrature::default())?;
    Ok((rhs - lhs).norm())
}
