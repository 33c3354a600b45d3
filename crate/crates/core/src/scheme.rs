//! Generic quantizer–dequantizer machinery.
//!
//! A scheme maps operators to symbols through `f(x) = Tr(A·U(x))` and back
//! through `A = ∫ f(x) Q(x) dx`, where `U` is the dequantizer and `Q` the
//! quantizer. Star products, their kernels, dual symbols and mean values are
//! all expressed in terms of these two operator families.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{interior_block, FockOperator};
use crate::quadrature::par_sum;

/// A point of some scheme's label space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LabelPoint {
    Phase { q: f64, p: f64 },
    Symplectic { x: f64, mu: f64, nu: f64 },
    Photon { n: usize, alpha: C64 },
}

impl LabelPoint {
    pub fn phase(q: f64, p: f64) -> Self {
        Self::Phase { q, p }
    }

    pub fn symplectic(x: f64, mu: f64, nu: f64) -> Self {
        Self::Symplectic { x, mu, nu }
    }

    /// Optical label: the symplectic frame `(cos θ, sin θ)`.
    pub fn optical(x: f64, theta: f64) -> Self {
        Self::Symplectic { x, mu: theta.cos(), nu: theta.sin() }
    }

    pub fn photon(n: usize, alpha: C64) -> Self {
        Self::Photon { n, alpha }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Phase { .. } => "phase",
            Self::Symplectic { .. } => "symplectic",
            Self::Photon { .. } => "photon",
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            Self::Phase { q, p } => q.is_finite() && p.is_finite(),
            Self::Symplectic { x, mu, nu } => x.is_finite() && mu.is_finite() && nu.is_finite(),
            Self::Photon { alpha, .. } => alpha.re.is_finite() && alpha.im.is_finite(),
        }
    }
}

/// Quadrature over a label space: nodes with nonnegative weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure {
    labels: Vec<LabelPoint>,
    weights: Vec<f64>,
    description: String,
}

impl Measure {
    pub fn new(labels: Vec<LabelPoint>, weights: Vec<f64>, description: impl Into<String>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: labels.len(), got: weights.len() });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidConfig("quadrature weights must be finite and nonnegative".into()));
        }
        if labels.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidConfig("labels must be finite".into()));
        }
        Ok(Self { labels, weights, description: description.into() })
    }

    pub fn labels(&self) -> &[LabelPoint] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Symbol values sampled on a measure.
#[derive(Clone, Debug)]
pub struct SymbolGrid {
    measure: Arc<Measure>,
    values: Vec<C64>,
}

impl SymbolGrid {
    pub fn new(measure: Arc<Measure>, values: Vec<C64>) -> Result<Self> {
        if values.len() != measure.len() {
            return Err(Error::DimensionMismatch { expected: measure.len(), got: values.len() });
        }
        Ok(Self { measure, values })
    }

    pub fn from_fn(measure: Arc<Measure>, f: impl Fn(&LabelPoint) -> C64 + Sync) -> Self {
        let values = measure.labels().par_iter().map(&f).collect();
        Self { measure, values }
    }

    pub fn zeros(measure: Arc<Measure>) -> Self {
        let values = vec![C64::new(0.0, 0.0); measure.len()];
        Self { measure, values }
    }

    pub fn measure(&self) -> &Arc<Measure> {
        &self.measure
    }

    pub fn labels(&self) -> &[LabelPoint] {
        self.measure.labels()
    }

    pub fn weights(&self) -> &[f64] {
        self.measure.weights()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn compatible(&self, other: &SymbolGrid) -> bool {
        Arc::ptr_eq(&self.measure, &other.measure) || *self.measure == *other.measure
    }

    /// `Σ wᵢ fᵢ`.
    pub fn integral(&self) -> C64 {
        let w = self.weights();
        par_sum(self.len(), |i| self.values[i] * w[i])
    }

    pub fn max_abs_difference(&self, other: &SymbolGrid) -> Result<f64> {
        if !self.compatible(other) {
            return Err(Error::GridMismatch);
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }
}

/// Structure constant of a star product at a label triple.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub x1: LabelPoint,
    pub x2: LabelPoint,
    pub x3: LabelPoint,
    pub value: C64,
}

/// Operator order used when a kernel is computed as a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelOrder {
    /// `Tr(Q(x1)·Q(x2)·U(x3))`: the kernel for which `f_A ⋆ f_B = f_{AB}`.
    Forward,
    /// `Tr(Q(x2)·Q(x1)·U(x3))`.
    Reversed,
}

/// A quantizer–dequantizer pair together with its integration measure.
pub trait Scheme: Sync {
    fn name(&self) -> &'static str;

    fn dim(&self) -> usize;

    fn measure(&self) -> &Arc<Measure>;

    /// Whether the label belongs to this scheme's label space.
    fn accepts(&self, x: &LabelPoint) -> bool;

    fn dequantizer(&self, x: &LabelPoint) -> Result<FockOperator>;

    fn quantizer(&self, x: &LabelPoint) -> Result<FockOperator>;

    /// `Tr(A·U(x))`.
    fn symbol(&self, a: &FockOperator, x: &LabelPoint) -> Result<C64> {
        Ok(a.trace_product(&self.dequantizer(x)?))
    }

    /// `Tr(A·Q(x))`.
    fn dual_value(&self, a: &FockOperator, x: &LabelPoint) -> Result<C64> {
        Ok(a.trace_product(&self.quantizer(x)?))
    }

    /// `Tr(A·Q(x))` at every label of a measure. Schemes whose quantizers
    /// factor override this to share work between labels.
    fn dual_values(&self, a: &FockOperator, labels: &[LabelPoint]) -> Result<Vec<C64>> {
        labels.par_iter().map(|x| self.dual_value(a, x)).collect()
    }

    /// `Σᵢ wᵢ fᵢ Q(xᵢ)`. Schemes whose quantizers factor override this to
    /// share work between labels.
    fn quantize(&self, f: &SymbolGrid) -> Result<FockOperator> {
        quantize_generic(self, f)
    }

    /// Diagonal weights used to regularize traces of products that are not
    /// trace class in the untruncated space. `None` means a plain trace.
    fn trace_regularizer(&self) -> Option<Vec<f64>> {
        None
    }

    /// Size of the leading block on which accuracy claims are made.
    fn accuracy_block(&self) -> usize {
        interior_block(self.dim())
    }
}

fn check_label<S: Scheme + ?Sized>(scheme: &S, x: &LabelPoint) -> Result<()> {
    if scheme.accepts(x) {
        Ok(())
    } else {
        Err(Error::LabelMismatch { label: format!("{x:?}"), scheme: scheme.name() })
    }
}

fn check_dim<S: Scheme + ?Sized>(scheme: &S, a: &FockOperator) -> Result<()> {
    if a.dim() != scheme.dim() {
        Err(Error::DimensionMismatch { expected: scheme.dim(), got: a.dim() })
    } else {
        Ok(())
    }
}

/// Weighted sum of quantizers, accumulated in fixed-size chunks so the
/// result does not depend on the thread count.
pub fn quantize_generic<S: Scheme + ?Sized>(scheme: &S, f: &SymbolGrid) -> Result<FockOperator> {
    let dim = scheme.dim();
    let labels = f.labels();
    let w = f.weights();
    let vals = f.values();
    for x in labels {
        check_label(scheme, x)?;
    }
    const CHUNK: usize = 64;
    let partials: Result<Vec<FockOperator>> = (0..labels.len().div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = FockOperator::zeros(dim);
            for i in c * CHUNK..((c + 1) * CHUNK).min(labels.len()) {
                let coeff = vals[i] * w[i];
                if coeff == C64::new(0.0, 0.0) {
                    continue;
                }
                acc += &scheme.quantizer(&labels[i])?.scale(coeff);
            }
            Ok(acc)
        })
        .collect();
    let mut total = FockOperator::zeros(dim);
    for p in partials? {
        total += &p;
    }
    Ok(total)
}

/// Symbol of `a` on the scheme's own measure.
pub fn dequantize<S: Scheme + ?Sized>(a: &FockOperator, scheme: &S) -> Result<SymbolGrid> {
    dequantize_on(a, scheme, scheme.measure().clone())
}

/// Symbol of `a` on an arbitrary measure of accepted labels.
pub fn dequantize_on<S: Scheme + ?Sized>(a: &FockOperator, scheme: &S, measure: Arc<Measure>) -> Result<SymbolGrid> {
    check_dim(scheme, a)?;
    let values: Result<Vec<C64>> = measure
        .labels()
        .par_iter()
        .map(|x| {
            check_label(scheme, x)?;
            scheme.symbol(a, x)
        })
        .collect();
    SymbolGrid::new(measure, values?)
}

/// Dual symbol `Tr(A·Q(x))` on the given measure.
pub fn dual_symbol<S: Scheme + ?Sized>(a: &FockOperator, scheme: &S, measure: Arc<Measure>) -> Result<SymbolGrid> {
    check_dim(scheme, a)?;
    for x in measure.labels() {
        check_label(scheme, x)?;
    }
    let values = scheme.dual_values(a, measure.labels())?;
    SymbolGrid::new(measure, values)
}

pub fn quantize<S: Scheme + ?Sized>(f: &SymbolGrid, scheme: &S) -> Result<FockOperator> {
    scheme.quantize(f)
}

/// `max_A ‖quantize(dequantize(A)) − A‖_F` on the scheme's accuracy block.
pub fn compatibility_residual<S: Scheme + ?Sized>(scheme: &S, test_ops: &[FockOperator]) -> Result<f64> {
    let block = scheme.accuracy_block();
    let mut worst: f64 = 0.0;
    for a in test_ops {
        let back = scheme.quantize(&dequantize(a, scheme)?)?;
        worst = worst.max(back.block_distance(a, block));
    }
    Ok(worst)
}

/// Relative version of [`compatibility_residual`], one entry per operator.
pub fn compatibility_residuals_relative<S: Scheme + ?Sized>(
    scheme: &S,
    test_ops: &[FockOperator],
    block: usize,
) -> Result<Vec<f64>> {
    test_ops
        .iter()
        .map(|a| {
            let back = scheme.quantize(&dequantize(a, scheme)?)?;
            Ok(back.relative_block_distance(a, block))
        })
        .collect()
}

fn regularized_trace(op: &FockOperator, weights: Option<&[f64]>) -> C64 {
    match weights {
        None => op.trace(),
        Some(w) => (0..op.dim()).map(|k| op.get(k, k) * w[k]).sum(),
    }
}

/// Star-product kernel `Tr(Q(x2)·Q(x1)·U(x3))`.
pub fn kernel_by_trace<S: Scheme + ?Sized>(
    scheme: &S,
    x1: &LabelPoint,
    x2: &LabelPoint,
    x3: &LabelPoint,
) -> Result<KernelValue> {
    kernel_by_trace_ordered(scheme, KernelOrder::Reversed, x1, x2, x3)
}

pub fn kernel_by_trace_ordered<S: Scheme + ?Sized>(
    scheme: &S,
    order: KernelOrder,
    x1: &LabelPoint,
    x2: &LabelPoint,
    x3: &LabelPoint,
) -> Result<KernelValue> {
    for x in [x1, x2, x3] {
        check_label(scheme, x)?;
    }
    let q1 = scheme.quantizer(x1)?;
    let q2 = scheme.quantizer(x2)?;
    let u3 = scheme.dequantizer(x3)?;
    let prod = match order {
        KernelOrder::Forward => &(&q1 * &q2) * &u3,
        KernelOrder::Reversed => &(&q2 * &q1) * &u3,
    };
    let reg = scheme.trace_regularizer();
    Ok(KernelValue { x1: *x1, x2: *x2, x3: *x3, value: regularized_trace(&prod, reg.as_deref()) })
}

/// Star product through the operator algebra:
/// `dequantize(quantize(f_A) · quantize(f_B))`.
pub fn star_product<S: Scheme + ?Sized>(fa: &SymbolGrid, fb: &SymbolGrid, scheme: &S) -> Result<SymbolGrid> {
    if !fa.compatible(fb) {
        return Err(Error::GridMismatch);
    }
    let a = scheme.quantize(fa)?;
    let b = scheme.quantize(fb)?;
    dequantize_on(&(&a * &b), scheme, fa.measure().clone())
}

/// Star product by direct double quadrature against a kernel:
/// `(f ⋆ g)(x) = Σᵢⱼ wᵢ wⱼ f(xᵢ) g(xⱼ) K(xᵢ, xⱼ, x)`.
/// Only practical on coarse grids; used to cross-check [`star_product`].
pub fn star_product_direct<K>(fa: &SymbolGrid, fb: &SymbolGrid, outputs: &[LabelPoint], kernel: K) -> Result<Vec<C64>>
where
    K: Fn(&LabelPoint, &LabelPoint, &LabelPoint) -> C64 + Sync,
{
    if !fa.compatible(fb) {
        return Err(Error::GridMismatch);
    }
    let n = fa.len();
    let (l, w) = (fa.labels(), fa.weights());
    Ok(outputs
        .iter()
        .map(|x| {
            par_sum(n * n, |ij| {
                let (i, j) = (ij / n, ij % n);
                fa.values()[i] * fb.values()[j] * (w[i] * w[j]) * kernel(&l[i], &l[j], x)
            })
        })
        .collect())
}

/// `Σᵢ wᵢ · state(xᵢ) · dual(xᵢ)`.
pub fn mean_value(state_symbol: &SymbolGrid, dual_obs_symbol: &SymbolGrid) -> Result<C64> {
    if !state_symbol.compatible(dual_obs_symbol) {
        return Err(Error::GridMismatch);
    }
    let w = state_symbol.weights();
    let (a, b) = (state_symbol.values(), dual_obs_symbol.values());
    Ok(par_sum(a.len(), |i| a[i] * b[i] * w[i]))
}

/// Both sides of the associativity relation at one sample.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AssociativitySample {
    pub lhs: C64,
    pub rhs: C64,
}

impl AssociativitySample {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    pub fn relative(&self) -> f64 {
        let scale = self.lhs.norm().max(self.rhs.norm());
        if scale == 0.0 {
            0.0
        } else {
            self.residual() / scale
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AssociativityReport {
    pub samples: Vec<AssociativitySample>,
}

impl AssociativityReport {
    /// Largest absolute residual.
    pub fn residual(&self) -> f64 {
        self.samples.iter().map(|s| s.residual()).fold(0.0, f64::max)
    }

    /// Largest residual relative to the magnitude of the two sides.
    pub fn relative(&self) -> f64 {
        self.samples.iter().map(|s| s.relative()).fold(0.0, f64::max)
    }
}

/// Pointwise associativity check
/// `∫K(x1,x2,y)K(y,x3,x4)dy` against `∫K(x1,y,x4)K(x2,x3,y)dy`.
pub fn associativity_residual<K>(
    kernel: K,
    quad: &Measure,
    samples: &[(LabelPoint, LabelPoint, LabelPoint, LabelPoint)],
) -> AssociativityReport
where
    K: Fn(&LabelPoint, &LabelPoint, &LabelPoint) -> C64 + Sync,
{
    let (ys, w) = (quad.labels(), quad.weights());
    let samples = samples
        .iter()
        .map(|(x1, x2, x3, x4)| {
            let lhs = par_sum(ys.len(), |i| kernel(x1, x2, &ys[i]) * kernel(&ys[i], x3, x4) * w[i]);
            let rhs = par_sum(ys.len(), |i| kernel(x1, &ys[i], x4) * kernel(x2, x3, &ys[i]) * w[i]);
            AssociativitySample { lhs, rhs }
        })
        .collect();
    AssociativityReport { samples }
}

/// Associativity in weak form: both sides are additionally integrated against
/// a smooth test function of `x4`, which turns distributional kernels into
/// ordinary numbers.
pub fn associativity_residual_weak<K, T>(
    kernel: K,
    y_quad: &Measure,
    x4_quad: &Measure,
    test: T,
    samples: &[(LabelPoint, LabelPoint, LabelPoint)],
) -> AssociativityReport
where
    K: Fn(&LabelPoint, &LabelPoint, &LabelPoint) -> C64 + Sync,
    T: Fn(&LabelPoint) -> f64 + Sync,
{
    let (ys, wy) = (y_quad.labels(), y_quad.weights());
    let (zs, wz) = (x4_quad.labels(), x4_quad.weights());
    let phi: Vec<f64> = zs.iter().map(&test).collect();
    let samples = samples
        .iter()
        .map(|(x1, x2, x3)| {
            let k12: Vec<C64> = ys.iter().map(|y| kernel(x1, x2, y)).collect();
            let k23: Vec<C64> = ys.iter().map(|y| kernel(x2, x3, y)).collect();
            let lhs = par_sum(ys.len(), |i| {
                let inner: C64 = zs.iter().enumerate().map(|(j, z)| kernel(&ys[i], x3, z) * (phi[j] * wz[j])).sum();
                k12[i] * inner * wy[i]
            });
            let rhs = par_sum(ys.len(), |i| {
                let inner: C64 = zs.iter().enumerate().map(|(j, z)| kernel(x1, &ys[i], z) * (phi[j] * wz[j])).sum();
                k23[i] * inner * wy[i]
            });
            AssociativitySample { lhs, rhs }
        })
        .collect();
    AssociativityReport { samples }
}
