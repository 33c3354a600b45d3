//! Classical tomography: the Radon pair for phase-space distributions,
//! the commutative tomographic kernel and the distributional symbols of
//! `1`, `q` and `p`.
//!
//! Distributions are normalized by `(1/2π) ∫ f dq dp = 1`, the same
//! convention as the Wigner function, so classical and quantum tomograms
//! are directly comparable.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use log::warn;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{ladder_operators, FockOperator};
use crate::maps::{MappedValue, SYMPLECTIC_REACH};
use crate::quadrature::{composite_gauss_legendre, richardson};
use crate::scheme::{LabelPoint, Measure, SymbolGrid};
use crate::symplectic::{frame, TomographicKernel};
use crate::wigner::PhaseGrid;

/// Nonnegative samples of `f(q, p)` on a phase grid, interpolated bicubically
/// between nodes and zero outside the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseDistribution {
    grid: PhaseGrid,
    values: Vec<f64>,
}

impl PhaseDistribution {
    /// Values in row-major order (`q` outer), matching [`PhaseGrid::measure`].
    pub fn new(grid: PhaseGrid, values: Vec<f64>) -> Result<Self> {
        let expected = grid.q.count * grid.p.count;
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: values.len() });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidState(format!("phase distribution value {v} is not a finite nonnegative number")));
        }
        Ok(Self { grid, values })
    }

    /// As [`new`](Self::new), additionally requiring `(1/2π) ∫ f = 1` within `1e-6`.
    pub fn normalized(grid: PhaseGrid, values: Vec<f64>) -> Result<Self> {
        let f = Self::new(grid, values)?;
        let norm = f.normalization();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidState(format!("phase distribution normalization {norm} differs from 1")));
        }
        Ok(f)
    }

    pub fn from_fn(grid: PhaseGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let (qs, ps) = (grid.q.nodes(), grid.p.nodes());
        let values = qs.iter().flat_map(|&q| ps.iter().map(move |&p| (q, p))).map(|(q, p)| f(q, p)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(1/2π) Σ f Δq Δp` with trapezoid weights.
    pub fn normalization(&self) -> f64 {
        let (wq, wp) = (self.grid.q.weights(), self.grid.p.weights());
        let np = wp.len();
        let total: f64 = self.values.iter().enumerate().map(|(i, v)| v * wq[i / np] * wp[i % np]).sum();
        total / (2.0 * PI)
    }

    fn node(&self, i: isize, j: isize) -> f64 {
        let nq = self.grid.q.count as isize;
        let np = self.grid.p.count as isize;
        let i = i.clamp(0, nq - 1) as usize;
        let j = j.clamp(0, np - 1) as usize;
        self.values[i * np as usize + j]
    }

    /// Catmull–Rom bicubic interpolation.
    pub fn eval(&self, q: f64, p: f64) -> f64 {
        let (gq, gp) = (&self.grid.q, &self.grid.p);
        if q < gq.lo || q > gq.hi || p < gp.lo || p > gp.hi {
            return 0.0;
        }
        let uq = (q - gq.lo) / gq.spacing();
        let up = (p - gp.lo) / gp.spacing();
        let (iq, ip) = (uq.floor() as isize, up.floor() as isize);
        let (tq, tp) = (uq - iq as f64, up - ip as f64);
        let wq = catmull_rom(tq);
        let wp = catmull_rom(tp);
        let mut acc = 0.0;
        for (a, wa) in wq.iter().enumerate() {
            for (b, wb) in wp.iter().enumerate() {
                acc += wa * wb * self.node(iq + a as isize - 1, ip + b as isize - 1);
            }
        }
        acc
    }
}

fn catmull_rom(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        0.5 * (-t3 + 2.0 * t2 - t),
        0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
        0.5 * (-3.0 * t3 + 4.0 * t2 + t),
        0.5 * (t3 - t2),
    ]
}

/// `(1/2π) ∫ f(q, p) δ(X − μq − νp) dq dp` for `f` supported in `bounds`
/// (`[q_lo, q_hi] × [p_lo, p_hi]`), integrated along the line with
/// composite Gauss–Legendre panels no longer than `panel`.
pub fn classical_tomogram_fn(
    f: &(dyn Fn(f64, f64) -> f64 + Sync),
    bounds: [f64; 4],
    panel: f64,
    x: f64,
    mu: f64,
    nu: f64,
) -> Result<f64> {
    let (s, _) = frame(mu, nu)?;
    let c = (x * mu / (s * s), x * nu / (s * s));
    let d = (-nu / s, mu / s);
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for (origin, dir, lo, hi) in [(c.0, d.0, bounds[0], bounds[1]), (c.1, d.1, bounds[2], bounds[3])] {
        if dir.abs() < 1e-300 {
            if origin < lo || origin > hi {
                return Ok(0.0);
            }
        } else {
            let (a, b) = ((lo - origin) / dir, (hi - origin) / dir);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
    }
    if t1 <= t0 {
        return Ok(0.0);
    }
    let panels = ((t1 - t0) / panel).ceil().max(1.0) as usize;
    let (ts, ws) = composite_gauss_legendre(8, panels, t0, t1);
    let line: f64 = ts.iter().zip(&ws).map(|(&t, &w)| w * f(c.0 + t * d.0, c.1 + t * d.1)).sum();
    Ok(line / (2.0 * PI * s))
}

/// Classical tomogram of a gridded distribution.
pub fn classical_tomogram(f: &PhaseDistribution, x: f64, mu: f64, nu: f64) -> Result<f64> {
    let g = f.grid();
    let bounds = [g.q.lo, g.q.hi, g.p.lo, g.p.hi];
    let h = g.q.spacing().min(g.p.spacing());
    classical_tomogram_fn(&|q, p| f.eval(q, p), bounds, 4.0 * h, x, mu, nu)
}

/// Classical tomogram sampled on every label of a symplectic measure.
pub fn classical_tomogram_grid(f: &PhaseDistribution, measure: Arc<Measure>) -> Result<SymbolGrid> {
    let values: Result<Vec<C64>> = measure
        .labels()
        .par_iter()
        .map(|x| match *x {
            LabelPoint::Symplectic { x, mu, nu } => Ok(C64::new(classical_tomogram(f, x, mu, nu)?, 0.0)),
            _ => Err(Error::LabelMismatch { label: format!("{x:?}"), scheme: "symplectic" }),
        })
        .collect();
    SymbolGrid::new(measure, values?)
}

/// Inverse Radon transform at several phase-space points.
///
/// Labels sharing a frame are first collapsed to `Σ w e^{iX}`; each point is
/// then a sum over frames.
pub fn classical_inverse_many(w: &SymbolGrid, points: &[(f64, f64)]) -> Result<Vec<MappedValue>> {
    let mut index: HashMap<(u64, u64), usize> = HashMap::new();
    let mut frames: Vec<(f64, f64, C64)> = Vec::new();
    let mut reach: f64 = 0.0;
    for ((x, wt), v) in w.labels().iter().zip(w.weights()).zip(w.values()) {
        let (xv, mu, nu) = match *x {
            LabelPoint::Symplectic { x, mu, nu } => (x, mu, nu),
            _ => return Err(Error::LabelMismatch { label: format!("{x:?}"), scheme: "symplectic" }),
        };
        reach = reach.max(mu.hypot(nu));
        let slot = *index.entry((mu.to_bits(), nu.to_bits())).or_insert_with(|| {
            frames.push((mu, nu, C64::new(0.0, 0.0)));
            frames.len() - 1
        });
        frames[slot].2 += v * C64::from_polar(*wt, xv);
    }
    let thin = reach < SYMPLECTIC_REACH;
    if thin {
        warn!("classical inverse: frame radius {reach:.2} below {SYMPLECTIC_REACH}");
    }
    Ok(points
        .par_iter()
        .map(|&(q, p)| {
            let total: C64 = frames.iter().map(|&(mu, nu, g)| g * C64::from_polar(1.0, -(mu * q + nu * p))).sum::<C64>()
                / (2.0 * PI);
            let warning = if thin {
                Some(format!("frame radius {reach:.2} below {SYMPLECTIC_REACH}"))
            } else if total.im.abs() > 1e-4 {
                Some(format!("imaginary residue {:.2e}", total.im))
            } else {
                None
            };
            MappedValue { value: total.re, imag: total.im, warning }
        })
        .collect())
}

/// `(1/2π) ∫ w(X, μ, ν) e^{i(X − μq − νp)} dX dμ dν`.
pub fn classical_inverse(w: &SymbolGrid, q: f64, p: f64) -> Result<MappedValue> {
    Ok(classical_inverse_many(w, &[(q, p)])?.remove(0))
}

/// Node-wise product: the delta kernel of the ordinary product collapses
/// the double integral to this.
pub fn pointwise_kernel_oracle(f1: &PhaseDistribution, f2: &PhaseDistribution) -> Result<PhaseDistribution> {
    if f1.grid != f2.grid {
        return Err(Error::GridMismatch);
    }
    let values = f1.values.iter().zip(&f2.values).map(|(a, b)| a * b).collect();
    PhaseDistribution::new(f1.grid, values)
}

/// The commutative tomographic kernel in reduced form.
pub fn classical_kernel() -> TomographicKernel {
    TomographicKernel::CLASSICAL
}

/// `e^{i(μ2ν1 − μ1ν2)/2}`, the factor relating the quantum kernel to the
/// classical one.
pub fn quantum_classical_kernel_ratio(x1: (f64, f64, f64), x2: (f64, f64, f64)) -> C64 {
    C64::from_polar(1.0, 0.5 * (x2.1 * x1.2 - x1.1 * x2.2))
}

/// `|S_quantum − S_classical · ratio|` at one label triple.
pub fn kernel_relation_deviation(x1: (f64, f64, f64), x2: (f64, f64, f64), x: (f64, f64, f64)) -> Result<f64> {
    let q = TomographicKernel::QUANTUM.smooth_factor(x1, x2, x)?;
    let c = TomographicKernel::CLASSICAL.smooth_factor(x1, x2, x)?;
    Ok((q - c * quantum_classical_kernel_ratio(x1, x2)).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistributionalKind {
    /// `−π|X| δ(μ) δ(ν)`
    Unity,
    /// `(π/2) X|X| δ′(μ) δ(ν)`
    Position,
    /// `(π/2) X|X| δ(μ) δ′(ν)`
    Momentum,
}

/// A tomographic symbol with delta factors in the frame variables, together
/// with the largest Gaussian damping `ε` used for the remaining `X` integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionalSymbol {
    pub kind: DistributionalKind,
    pub epsilon: f64,
}

impl DistributionalSymbol {
    pub fn new(kind: DistributionalKind, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 0.1) {
            return Err(Error::InvalidConfig(format!("regularization epsilon {epsilon} outside (0, 0.1]")));
        }
        Ok(Self { kind, epsilon })
    }
}

/// `∫|X| e^{iX − εX²} dX` and `∫X|X| e^{iX − εX²} dX`.
pub fn regularized_integrals(epsilon: f64) -> (C64, C64) {
    let reach = (40.0 / epsilon).sqrt();
    let panels = (reach / 2.0).ceil() as usize;
    let (xs, ws) = composite_gauss_legendre(16, panels, 0.0, reach);
    let (mut even, mut odd) = (0.0, 0.0);
    for (&x, &w) in xs.iter().zip(&ws) {
        let damp = w * x * (-epsilon * x * x).exp();
        even += damp * x.cos();
        odd += damp * x * x.sin();
    }
    (C64::new(2.0 * even, 0.0), C64::new(0.0, 2.0 * odd))
}

/// Limits of [`regularized_integrals`] as `ε → 0`, Richardson-extrapolated
/// from `ε, ε/2, ε/4`. The exact limits are `−2` and `−4i`.
pub fn extrapolated_integrals(epsilon: f64) -> (C64, C64) {
    let hs = [epsilon, epsilon / 2.0, epsilon / 4.0];
    let vals: Vec<(C64, C64)> = hs.iter().map(|&e| regularized_integrals(e)).collect();
    let first: Vec<C64> = vals.iter().map(|v| v.0).collect();
    let second: Vec<C64> = vals.iter().map(|v| v.1).collect();
    (richardson(&hs, &first), richardson(&hs, &second))
}

/// Quantize a distributional symbol with the symplectic quantizer
/// `(1/2π) e^{i(X − μq − νp)}`. The deltas are consumed analytically:
/// `∫δ′(μ) e^{−iμq} dμ = iq`, and likewise for `p`.
pub fn quantize_distributional(sym: &DistributionalSymbol, dim: usize) -> Result<FockOperator> {
    let (i1, i2) = extrapolated_integrals(sym.epsilon);
    let ladder = ladder_operators(dim)?;
    let quarter_i = i2 * C64::i() * 0.25;
    Ok(match sym.kind {
        DistributionalKind::Unity => FockOperator::identity(dim).scale(-0.5 * i1),
        DistributionalKind::Position => ladder.q.scale(quarter_i),
        DistributionalKind::Momentum => ladder.p.scale(quarter_i),
    })
}
