//! Wigner–Weyl scheme.
//!
//! Dequantizer `U(q,p) = 2·D(2α)·Π` with `α = (q + ip)/√2` and `Π` the parity,
//! quantizer `Q = U/(2π)`. Wigner functions are normalized so that
//! `∫ W dq dp / 2π = 1`.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{displacement_projected, FockOperator, QuantumState};
use crate::quadrature::Axis;
use crate::scheme::{dequantize_on, LabelPoint, Measure, Scheme, SymbolGrid};
use crate::special::smooth_cutoff;

/// Tensor grid over `(q, p)` with trapezoid weights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub q: Axis,
    pub p: Axis,
}

impl PhaseGrid {
    pub fn new(q: Axis, p: Axis) -> Self {
        Self { q, p }
    }

    /// Square grid `[-half, half]²` with `count` points per axis.
    pub fn square(half: f64, count: usize) -> Result<Self> {
        let ax = Axis::symmetric(half, count)?;
        Ok(Self { q: ax, p: ax })
    }

    /// Labels in row-major order (`q` outer, `p` inner).
    pub fn measure(&self) -> Measure {
        let (qs, ps) = (self.q.nodes(), self.p.nodes());
        let (wq, wp) = (self.q.weights(), self.p.weights());
        let mut labels = Vec::with_capacity(qs.len() * ps.len());
        let mut weights = Vec::with_capacity(qs.len() * ps.len());
        for (i, &q) in qs.iter().enumerate() {
            for (j, &p) in ps.iter().enumerate() {
                labels.push(LabelPoint::phase(q, p));
                weights.push(wq[i] * wp[j]);
            }
        }
        Measure::new(labels, weights, format!("phase q={} p={}", self.q, self.p)).expect("valid phase grid")
    }
}

/// `α = (q + i p)/√2`.
pub fn phase_alpha(q: f64, p: f64) -> C64 {
    C64::new(q, p) / SQRT_2
}

/// `2·D(2α)·Π` projected onto the cutoff.
pub fn displaced_parity(q: f64, p: f64, dim: usize) -> FockOperator {
    let d = displacement_projected(phase_alpha(q, p) * 2.0, dim);
    FockOperator::from_fn(dim, |i, j| {
        let s = if j % 2 == 0 { 2.0 } else { -2.0 };
        d.get(i, j) * s
    })
}

#[derive(Clone, Debug)]
pub struct WignerScheme {
    dim: usize,
    grid: PhaseGrid,
    measure: Arc<Measure>,
}

impl WignerScheme {
    pub fn new(dim: usize, grid: PhaseGrid) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        Ok(Self { dim, grid, measure: Arc::new(grid.measure()) })
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }
}

pub fn wigner_scheme(dim: usize, grid: PhaseGrid) -> Result<WignerScheme> {
    WignerScheme::new(dim, grid)
}

fn phase_coords(x: &LabelPoint) -> Result<(f64, f64)> {
    match *x {
        LabelPoint::Phase { q, p } => Ok((q, p)),
        _ => Err(Error::LabelMismatch { label: format!("{x:?}"), scheme: "wigner" }),
    }
}

impl Scheme for WignerScheme {
    fn name(&self) -> &'static str {
        "wigner"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn measure(&self) -> &Arc<Measure> {
        &self.measure
    }

    fn accepts(&self, x: &LabelPoint) -> bool {
        matches!(x, LabelPoint::Phase { .. })
    }

    fn dequantizer(&self, x: &LabelPoint) -> Result<FockOperator> {
        let (q, p) = phase_coords(x)?;
        Ok(displaced_parity(q, p, self.dim))
    }

    fn quantizer(&self, x: &LabelPoint) -> Result<FockOperator> {
        let (q, p) = phase_coords(x)?;
        Ok(displaced_parity(q, p, self.dim).scale(C64::new(1.0 / (2.0 * PI), 0.0)))
    }

    /// Products of displaced parities are not trace class; a smooth cutoff
    /// in the number basis recovers the Abel-summed trace.
    fn trace_regularizer(&self) -> Option<Vec<f64>> {
        let (lo, hi) = (self.dim as f64 / 8.0, 5.0 * self.dim as f64 / 8.0);
        Some((0..self.dim).map(|n| smooth_cutoff(n as f64, lo, hi)).collect())
    }
}

/// Prefactor of the Groenewold kernel that makes `∫∫K dx1 dx2 = 1`.
pub const GROENEWOLD_PREFACTOR: f64 = 1.0 / (PI * PI);

/// Half of [`GROENEWOLD_PREFACTOR`]; the value commonly quoted alongside the
/// phase formula. Kept for comparison only.
pub const GROENEWOLD_HALF_PREFACTOR: f64 = 1.0 / (2.0 * PI * PI);

/// Phase `2(q1p2 − q2p1 + q2p3 − q3p2 + q3p1 − q1p3)`.
pub fn groenewold_phase(q1: f64, p1: f64, q2: f64, p2: f64, q3: f64, p3: f64) -> f64 {
    2.0 * (q1 * p2 - q2 * p1 + q2 * p3 - q3 * p2 + q3 * p1 - q1 * p3)
}

/// Closed-form Groenewold kernel, normalized by [`GROENEWOLD_PREFACTOR`].
/// Equals `Tr(Q(x1)·Q(x2)·U(x3))`.
pub fn groenewold_kernel(q1: f64, p1: f64, q2: f64, p2: f64, q3: f64, p3: f64) -> C64 {
    groenewold_kernel_with_prefactor(GROENEWOLD_PREFACTOR, q1, p1, q2, p2, q3, p3)
}

pub fn groenewold_kernel_with_prefactor(c: f64, q1: f64, p1: f64, q2: f64, p2: f64, q3: f64, p3: f64) -> C64 {
    C64::from_polar(c, groenewold_phase(q1, p1, q2, p2, q3, p3))
}

/// Groenewold kernel on labels; panics on non-phase labels.
pub fn groenewold_kernel_labels(x1: &LabelPoint, x2: &LabelPoint, x3: &LabelPoint) -> C64 {
    match (*x1, *x2, *x3) {
        (
            LabelPoint::Phase { q: q1, p: p1 },
            LabelPoint::Phase { q: q2, p: p2 },
            LabelPoint::Phase { q: q3, p: p3 },
        ) => groenewold_kernel(q1, p1, q2, p2, q3, p3),
        _ => panic!("groenewold kernel takes phase-space labels"),
    }
}

/// Wigner function of a state on a phase grid.
pub fn wigner_function(rho: &QuantumState, grid: &PhaseGrid) -> Result<SymbolGrid> {
    let scheme = WignerScheme::new(rho.dim(), *grid)?;
    dequantize_on(rho.rho(), &scheme, scheme.measure().clone())
}

/// `∫ W dq dp / 2π`.
pub fn wigner_normalization(w: &SymbolGrid) -> C64 {
    w.integral() / (2.0 * PI)
}
