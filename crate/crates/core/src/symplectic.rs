//! Symplectic and optical tomography.
//!
//! The tomogram `w(X, μ, ν)` is the density of the quadrature `μq + νp` at the
//! value `X`. With `s = √(μ²+ν²)` and `θ = atan2(ν, μ)` it is evaluated from the
//! rotated Hermite-function expansion
//! `w = (1/s) Σ ρ_mn ψ_m(X/s) ψ_n(X/s) e^{i(n−m)θ}`.
//!
//! The quantizer is `Q(X,μ,ν) = e^{iX} e^{−i(μq+νp)} / 2π` and the
//! dequantizer is the spectral projector `δ(X − μq − νp)` realized through the
//! same Hermite functions.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use log::warn;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{quadrature_exponential_projected, FockOperator, QuantumState};
use crate::quadrature::{gauss_legendre, par_sum, periodic, Axis};
use crate::scheme::{AssociativitySample, LabelPoint, Measure, Scheme, SymbolGrid};
use crate::special::{factorial, hermite_functions, hermite_functions_into, hermite_poly};

/// Frame scale and angle `(s, θ)` of `(μ, ν)`.
pub fn frame(mu: f64, nu: f64) -> Result<(f64, f64)> {
    let s = mu.hypot(nu);
    if s == 0.0 {
        return Err(Error::SingularFrame);
    }
    Ok((s, nu.atan2(mu)))
}

/// Symbol `Tr(A·δ(X − μq − νp))` of an arbitrary operator.
pub fn symplectic_symbol(a: &FockOperator, x: f64, mu: f64, nu: f64) -> Result<C64> {
    let (s, theta) = frame(mu, nu)?;
    let n = a.dim();
    let psi = hermite_functions(n, x / s);
    let u: Vec<C64> = (0..n).map(|m| C64::from_polar(psi[m], -(m as f64) * theta)).collect();
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..n {
        let col: C64 = u.iter().enumerate().map(|(i, ui)| ui * a.get(i, j)).sum();
        acc += col * u[j].conj();
    }
    Ok(acc / s)
}

/// Symplectic tomogram of a state.
pub fn symplectic_tomogram(rho: &QuantumState, x: f64, mu: f64, nu: f64) -> Result<f64> {
    Ok(symplectic_symbol(rho.rho(), x, mu, nu)?.re)
}

/// Optical tomogram: the symplectic tomogram on the frame `(cos θ, sin θ)`.
pub fn optical_tomogram(rho: &QuantumState, x: f64, theta: f64) -> f64 {
    symplectic_tomogram(rho, x, theta.cos(), theta.sin()).expect("unit frame is regular")
}

/// Symplectic tomogram from an optical one: `(1/s)·w_opt(X/s, atan2(ν, μ))`.
pub fn symplectic_from_optical(optical: impl Fn(f64, f64) -> f64, x: f64, mu: f64, nu: f64) -> Result<f64> {
    let (s, theta) = frame(mu, nu)?;
    Ok(optical(x / s, theta) / s)
}

/// Tomogram of the number state `|m⟩` in closed form:
/// `e^{−X²/s²} H_m(X/s)² / (s √π 2^m m!)`.
pub fn fock_tomogram_closed(m: usize, x: f64, mu: f64, nu: f64) -> Result<f64> {
    let (s, _) = frame(mu, nu)?;
    let y = x / s;
    let h = hermite_poly(m, y);
    Ok((-y * y).exp() / (s * PI.sqrt()) * h * h / (factorial(m) * 2f64.powi(m as i32)))
}

/// Label grid for the symplectic scheme.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SymplecticGrid {
    /// Tensor trapezoid grid over `(X, μ, ν)`.
    Cartesian { x: Axis, mu: Axis, nu: Axis },
    /// Scaled polar coordinates `X = s·ξ, μ = s cos θ, ν = s sin θ`, with
    /// Gauss–Legendre in `s ∈ [0, radius]`, a periodic rule in `θ` and a
    /// trapezoid rule in `ξ`. The volume element is `s² ds dθ dξ`.
    Polar { radial: usize, radius: f64, angles: usize, xi: Axis },
    /// Optical section: `(X, θ)` with `μ = cos θ, ν = sin θ`.
    Optical { x: Axis, angles: usize },
}

impl SymplecticGrid {
    /// Grid used for round trips and mean values at moderate cutoffs.
    pub fn polar_default(dim: usize) -> Self {
        let reach = (2.0 * dim as f64).sqrt();
        SymplecticGrid::Polar {
            radial: 64,
            radius: (2.0 * reach + 4.0).max(12.0),
            angles: (4 * dim).clamp(48, 128),
            xi: Axis { lo: -(reach + 5.0), hi: reach + 5.0, count: 256 },
        }
    }

    pub fn measure(&self) -> Measure {
        let mut labels = Vec::new();
        let mut weights = Vec::new();
        let desc = match *self {
            SymplecticGrid::Cartesian { x, mu, nu } => {
                let (xs, wx) = (x.nodes(), x.weights());
                let mut skipped = 0;
                for (i, m) in mu.nodes().into_iter().enumerate() {
                    for (j, n) in nu.nodes().into_iter().enumerate() {
                        if m == 0.0 && n == 0.0 {
                            skipped += 1;
                            continue;
                        }
                        let wf = mu.weight(i) * nu.weight(j);
                        for (k, &xv) in xs.iter().enumerate() {
                            labels.push(LabelPoint::symplectic(xv, m, n));
                            weights.push(wf * wx[k]);
                        }
                    }
                }
                if skipped > 0 {
                    warn!("cartesian symplectic grid contains the singular frame; dropped it");
                }
                format!("symplectic cartesian X={x} mu={mu} nu={nu}")
            }
            SymplecticGrid::Polar { radial, radius, angles, xi } => {
                let (rs, wr) = gauss_legendre(radial, 0.0, radius);
                let (ts, wt) = periodic(angles);
                let (xs, wx) = (xi.nodes(), xi.weights());
                for (i, &s) in rs.iter().enumerate() {
                    for (j, &t) in ts.iter().enumerate() {
                        let (mu, nu) = (s * t.cos(), s * t.sin());
                        let wf = s * s * wr[i] * wt[j];
                        for (k, &xv) in xs.iter().enumerate() {
                            labels.push(LabelPoint::symplectic(s * xv, mu, nu));
                            weights.push(wf * wx[k]);
                        }
                    }
                }
                format!("symplectic polar s<={radius} ({radial}) theta({angles}) xi={xi}")
            }
            SymplecticGrid::Optical { x, angles } => {
                let (ts, wt) = periodic(angles);
                let (xs, wx) = (x.nodes(), x.weights());
                for (j, &t) in ts.iter().enumerate() {
                    for (k, &xv) in xs.iter().enumerate() {
                        labels.push(LabelPoint::optical(xv, t));
                        weights.push(wt[j] * wx[k]);
                    }
                }
                format!("optical X={x} theta({angles})")
            }
        };
        Measure::new(labels, weights, desc).expect("valid symplectic grid")
    }
}

fn symplectic_coords(x: &LabelPoint) -> Result<(f64, f64, f64)> {
    match *x {
        LabelPoint::Symplectic { x, mu, nu } => Ok((x, mu, nu)),
        _ => Err(Error::LabelMismatch { label: format!("{x:?}"), scheme: "symplectic" }),
    }
}

#[derive(Clone, Debug)]
pub struct SymplecticScheme {
    dim: usize,
    grid: SymplecticGrid,
    measure: Arc<Measure>,
}

impl SymplecticScheme {
    pub fn new(dim: usize, grid: SymplecticGrid) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        Ok(Self { dim, grid, measure: Arc::new(grid.measure()) })
    }

    pub fn grid(&self) -> &SymplecticGrid {
        &self.grid
    }
}

pub fn symplectic_scheme(dim: usize, grid: SymplecticGrid) -> Result<SymplecticScheme> {
    SymplecticScheme::new(dim, grid)
}

impl Scheme for SymplecticScheme {
    fn name(&self) -> &'static str {
        "symplectic"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn measure(&self) -> &Arc<Measure> {
        &self.measure
    }

    fn accepts(&self, x: &LabelPoint) -> bool {
        matches!(x, LabelPoint::Symplectic { .. })
    }

    /// `U_ab = ψ_a(X/s) ψ_b(X/s) e^{i(a−b)θ} / s`.
    fn dequantizer(&self, x: &LabelPoint) -> Result<FockOperator> {
        let (xv, mu, nu) = symplectic_coords(x)?;
        let (s, theta) = frame(mu, nu)?;
        let psi = hermite_functions(self.dim, xv / s);
        Ok(FockOperator::from_fn(self.dim, |a, b| {
            C64::from_polar(psi[a] * psi[b] / s, (a as f64 - b as f64) * theta)
        }))
    }

    fn quantizer(&self, x: &LabelPoint) -> Result<FockOperator> {
        let (xv, mu, nu) = symplectic_coords(x)?;
        let e = quadrature_exponential_projected(1.0, mu, nu, self.dim);
        Ok(e.scale(C64::from_polar(1.0 / (2.0 * PI), xv)))
    }

    fn symbol(&self, a: &FockOperator, x: &LabelPoint) -> Result<C64> {
        let (xv, mu, nu) = symplectic_coords(x)?;
        symplectic_symbol(a, xv, mu, nu)
    }

    /// `Tr(A·e^{−i(μq+νp)})` is computed once per frame.
    fn dual_values(&self, a: &FockOperator, labels: &[LabelPoint]) -> Result<Vec<C64>> {
        let mut index: HashMap<(u64, u64), usize> = HashMap::new();
        let mut frames: Vec<(f64, f64)> = Vec::new();
        let mut slots = Vec::with_capacity(labels.len());
        for x in labels {
            let (_, mu, nu) = symplectic_coords(x)?;
            let slot = *index.entry((mu.to_bits(), nu.to_bits())).or_insert_with(|| {
                frames.push((mu, nu));
                frames.len() - 1
            });
            slots.push(slot);
        }
        let dim = self.dim;
        let traces: Vec<C64> = frames
            .par_iter()
            .map(|&(mu, nu)| a.trace_product(&quadrature_exponential_projected(1.0, mu, nu, dim)))
            .collect();
        labels
            .iter()
            .zip(&slots)
            .map(|(x, &k)| {
                let (xv, _, _) = symplectic_coords(x)?;
                Ok(traces[k] * C64::from_polar(1.0 / (2.0 * PI), xv))
            })
            .collect()
    }

    /// Labels sharing a frame `(μ, ν)` share the operator factor, so the
    /// `X` sum is done first: `Σ_frames [Σ_X w f e^{iX}/2π] · e^{−i(μq+νp)}`.
    fn quantize(&self, f: &SymbolGrid) -> Result<FockOperator> {
        let mut index: HashMap<(u64, u64), usize> = HashMap::new();
        let mut frames: Vec<(f64, f64)> = Vec::new();
        let mut coeffs: Vec<C64> = Vec::new();
        for ((x, w), v) in f.labels().iter().zip(f.weights()).zip(f.values()) {
            let (xv, mu, nu) = symplectic_coords(x)?;
            let key = (mu.to_bits(), nu.to_bits());
            let slot = *index.entry(key).or_insert_with(|| {
                frames.push((mu, nu));
                coeffs.push(C64::new(0.0, 0.0));
                frames.len() - 1
            });
            coeffs[slot] += v * C64::from_polar(w / (2.0 * PI), xv);
        }
        let dim = self.dim;
        const CHUNK: usize = 32;
        let partials: Vec<FockOperator> = (0..frames.len().div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut acc = FockOperator::zeros(dim);
                for i in c * CHUNK..((c + 1) * CHUNK).min(frames.len()) {
                    let (mu, nu) = frames[i];
                    acc += &quadrature_exponential_projected(1.0, mu, nu, dim).scale(coeffs[i]);
                }
                acc
            })
            .collect();
        let mut total = FockOperator::zeros(dim);
        for p in &partials {
            total += p;
        }
        Ok(total)
    }
}

/// Symplectic tomogram of a state sampled on a measure.
pub fn tomogram_grid(rho: &QuantumState, measure: Arc<Measure>) -> Result<SymbolGrid> {
    let values: Result<Vec<C64>> = measure
        .labels()
        .par_iter()
        .map(|x| {
            let (xv, mu, nu) = symplectic_coords(x)?;
            Ok(C64::new(symplectic_tomogram(rho, xv, mu, nu)?, 0.0))
        })
        .collect();
    SymbolGrid::new(measure, values?)
}

/// `∫ w(X, μ, ν) dX` on a trapezoid axis, for a fixed frame.
pub fn x_normalization(rho: &QuantumState, mu: f64, nu: f64, x: &Axis) -> Result<f64> {
    let (s, theta) = frame(mu, nu)?;
    let mut buf = Vec::new();
    let n = rho.dim();
    let mut total = 0.0;
    for (k, xv) in x.nodes().into_iter().enumerate() {
        hermite_functions_into(xv / s, n, &mut buf);
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..n {
            for i in 0..n {
                acc += rho.rho().get(i, j) * C64::from_polar(buf[i] * buf[j], (j as f64 - i as f64) * theta);
            }
        }
        total += x.weight(k) * acc.re / s;
    }
    Ok(total)
}

/// Star-product kernel of tomographic symbols in delta-reduced form.
///
/// The kernel is `S(x1, x2, x) · δ(μ(ν1+ν2) − ν(μ1+μ2))` with the smooth factor
/// `S = (1/4π²) exp{ i[σ(ν1μ2 − ν2μ1)/2 + X1 + X2 − X(ν1+ν2)/ν] }`.
/// `σ = 1` gives the quantum kernel and `σ = 0` the commutative classical one.
/// On the constraint `(ν1+ν2)/ν = (μ1+μ2)/μ`, which is used when `ν = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomographicKernel {
    pub sigma: f64,
}

/// Settings for the reduced star-product quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedQuadrature {
    /// Half-width of the cube over the three free frame variables.
    pub frame_half: f64,
    /// Gauss–Legendre nodes per frame variable.
    pub frame_nodes: usize,
    /// Axis for the `X` Fourier transforms, in units of the frame scale.
    pub xi: Axis,
}

impl Default for ReducedQuadrature {
    fn default() -> Self {
        Self { frame_half: 6.0, frame_nodes: 40, xi: Axis { lo: -10.0, hi: 10.0, count: 161 } }
    }
}

/// `∫ f(X, μ, ν) e^{iX} dX`, integrated in the scaled variable `X = sξ`
/// so that narrow tomograms at small frame scales stay resolved.
pub fn unit_frequency_transform(f: &(dyn Fn(f64, f64, f64) -> C64 + Sync), mu: f64, nu: f64, xi: &Axis) -> C64 {
    let s = mu.hypot(nu);
    if s == 0.0 {
        // The frame integral of a tomogram is one for every X-profile; fall
        // back to the unscaled axis.
        let mut acc = C64::new(0.0, 0.0);
        for (k, xv) in xi.nodes().into_iter().enumerate() {
            acc += f(xv, mu, nu) * C64::from_polar(xi.weight(k), xv);
        }
        return acc;
    }
    let mut acc = C64::new(0.0, 0.0);
    for (k, y) in xi.nodes().into_iter().enumerate() {
        acc += f(s * y, mu, nu) * C64::from_polar(s * xi.weight(k), s * y);
    }
    acc
}

impl TomographicKernel {
    pub const QUANTUM: Self = Self { sigma: 1.0 };
    pub const CLASSICAL: Self = Self { sigma: 0.0 };

    /// Argument of the delta function.
    pub fn constraint(x1: (f64, f64, f64), x2: (f64, f64, f64), x: (f64, f64, f64)) -> f64 {
        x.1 * (x1.2 + x2.2) - x.2 * (x1.1 + x2.1)
    }

    /// Scale `k` with `v1 + v2 = k·v` on the constraint.
    fn scale_on_constraint(x1: (f64, f64, f64), x2: (f64, f64, f64), x: (f64, f64, f64)) -> Result<f64> {
        if x.2 != 0.0 {
            Ok((x1.2 + x2.2) / x.2)
        } else if x.1 != 0.0 {
            Ok((x1.1 + x2.1) / x.1)
        } else {
            Err(Error::SingularFrame)
        }
    }

    /// Phase `σ(ν1μ2 − ν2μ1)/2` that distinguishes the quantum kernel.
    pub fn wedge_phase(&self, x1: (f64, f64, f64), x2: (f64, f64, f64)) -> f64 {
        0.5 * self.sigma * (x1.2 * x2.1 - x2.2 * x1.1)
    }

    /// Smooth factor on the constraint surface.
    pub fn smooth_factor(&self, x1: (f64, f64, f64), x2: (f64, f64, f64), x: (f64, f64, f64)) -> Result<C64> {
        let k = Self::scale_on_constraint(x1, x2, x)?;
        let phase = self.wedge_phase(x1, x2) + x1.0 + x2.0 - x.0 * k;
        Ok(C64::from_polar(1.0 / (4.0 * PI * PI), phase))
    }

    /// `(f1 ⋆ f2)(X, μ, ν)` with one frame variable of `x2` eliminated against
    /// the delta. The `X1, X2` integrals factor into unit-frequency Fourier
    /// transforms, leaving a three-dimensional quadrature.
    pub fn star(
        &self,
        f1: &(dyn Fn(f64, f64, f64) -> C64 + Sync),
        f2: &(dyn Fn(f64, f64, f64) -> C64 + Sync),
        x: (f64, f64, f64),
        quad: &ReducedQuadrature,
    ) -> Result<C64> {
        let (_, mu, nu) = x;
        frame(mu, nu)?;
        let (g, wg) = gauss_legendre(quad.frame_nodes, -quad.frame_half, quad.frame_half);
        let n = g.len();
        // Eliminate μ2 when |ν| ≥ |μ|, otherwise ν2.
        let eliminate_mu = nu.abs() >= mu.abs();
        let jac = 1.0 / if eliminate_mu { nu.abs() } else { mu.abs() };
        let f1_hat: Vec<C64> = (0..n * n)
            .into_par_iter()
            .map(|ij| unit_frequency_transform(f1, g[ij / n], g[ij % n], &quad.xi))
            .collect();
        let total = par_sum(n * n * n, |idx| {
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            let (mu1, nu1) = (g[i], g[j]);
            let (mu2, nu2) = if eliminate_mu {
                let nu2 = g[k];
                (mu * (nu1 + nu2) / nu - mu1, nu2)
            } else {
                let mu2 = g[k];
                (mu2, nu * (mu1 + mu2) / mu - nu1)
            };
            let f2_hat = unit_frequency_transform(f2, mu2, nu2, &quad.xi);
            let s = self
                .smooth_factor((0.0, mu1, nu1), (0.0, mu2, nu2), x)
                .expect("regular output frame");
            f1_hat[i * n + j] * f2_hat * s * (wg[i] * wg[j] * wg[k] * jac)
        });
        Ok(total)
    }

    /// Associativity of the reduced kernel in weak form.
    ///
    /// In `∫K(x1,x2,y)K(y,x3,x4)dy` the `Y` integral produces a delta that,
    /// together with the first constraint, fixes the frame of `y` to
    /// `v1 + v2`. The remaining constraint is eliminated against a test
    /// function `φ(x4)`, leaving a two-dimensional integral over `(X4, ν4)`
    /// evaluated by quadrature. The right side is handled the same way with
    /// the intermediate frame `v2 + v3`.
    #[allow(clippy::too_many_arguments)]
    pub fn associativity_weak(
        &self,
        x1: (f64, f64, f64),
        x2: (f64, f64, f64),
        x3: (f64, f64, f64),
        test: impl Fn(f64, f64, f64) -> f64 + Sync,
        x4_axis: &Axis,
        nu4_nodes: usize,
        nu4_half: f64,
    ) -> Result<AssociativitySample> {
        let v_mu = x1.1 + x2.1 + x3.1;
        let v_nu = x1.2 + x2.2 + x3.2;
        if v_nu == 0.0 || x1.2 + x2.2 == 0.0 || x2.2 + x3.2 == 0.0 {
            return Err(Error::SingularFrame);
        }
        let y_left = (0.0, x1.1 + x2.1, x1.2 + x2.2);
        let y_right = (0.0, x2.1 + x3.1, x2.2 + x3.2);
        let (nus, wnu) = gauss_legendre(nu4_nodes, -nu4_half, nu4_half);
        let xs = x4_axis.nodes();
        let jac = 2.0 * PI / v_nu.abs();
        let side = |left: bool| -> Result<C64> {
            let mut acc = C64::new(0.0, 0.0);
            for (a, &nu4) in nus.iter().enumerate() {
                let mu4 = nu4 * v_mu / v_nu;
                for (b, &xv) in xs.iter().enumerate() {
                    let x4 = (xv, mu4, nu4);
                    let w = wnu[a] * x4_axis.weight(b) * test(xv, mu4, nu4);
                    let k = if left {
                        self.smooth_factor(x1, x2, y_left)? * self.smooth_factor(y_left, x3, x4)?
                    } else {
                        self.smooth_factor(x2, x3, y_right)? * self.smooth_factor(x1, y_right, x4)?
                    };
                    acc += k * w;
                }
            }
            Ok(acc * jac)
        };
        Ok(AssociativitySample { lhs: side(true)?, rhs: side(false)? })
    }
}

/// The quantum tomographic kernel in reduced form.
pub fn symplectic_kernel_reduced() -> TomographicKernel {
    TomographicKernel::QUANTUM
}
