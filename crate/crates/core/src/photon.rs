//! Photon-number tomography.
//!
//! The tomogram is `ω(n, α) = ⟨n| D(α) ρ D(α)⁻¹ |n⟩`. Its dequantizer is
//! `U(n, α) = D(−α)|n⟩⟨n|D(α)` and the s-ordered quantizer is
//! `Q(n, α) = c · M^{(a†+α*)(a+α) − n}` with `M = (s−1)/(s+1)` and
//! `c = 4/(π(1−s²))`. Both live in the frame `D(−α)·(…)·D(α)`.
//!
//! For `s ∈ (−1, 0)` we have `|M| > 1` and the quantizer is unbounded. Its
//! matrix elements are evaluated from the normal-ordered form, which is exact
//! in the truncated space:
//! `Q_ij = c M^{−n} e^{(M²−1)|α|²/2M} (−e^{iφ})^k |M|^{k/2} M^j g_j^{(k)}(y)`
//! for `i = j + k`, with `y = (M−1)²|α|²/|M|` and `g` the normalized Laguerre
//! functions.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use log::info;
use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{annihilation, displacement_projected, FockOperator, QuantumState};
use crate::quadrature::{gauss_legendre, periodic};
use crate::scheme::{LabelPoint, Measure, Scheme, SymbolGrid};
use crate::special::{factorial, laguerre, normalized_laguerre};

/// Ordering parameter and cutoff of the photon-number scheme.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonConfig {
    pub s: f64,
    pub dim: usize,
}

impl PhotonConfig {
    pub fn new(s: f64, dim: usize) -> Result<Self> {
        if !(s > -1.0 && s < 1.0) {
            return Err(Error::InvalidConfig(format!("ordering parameter s={s} must lie in (-1, 1)")));
        }
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        let cfg = Self { s, dim };
        info!(
            "photon scheme s={s}: M={:.6}, largest quantizer scale |M|^(N-1)={:.3e}",
            cfg.m(),
            cfg.m().abs().powi(dim as i32 - 1)
        );
        Ok(cfg)
    }

    /// `M = (s−1)/(s+1)`.
    pub fn m(&self) -> f64 {
        (self.s - 1.0) / (self.s + 1.0)
    }

    /// `t` with `e^{it} = M`, principal logarithm: `t = π − i ln|M|`.
    pub fn t(&self) -> C64 {
        C64::new(0.0, -1.0) * C64::new(self.m(), 0.0).ln()
    }

    /// `4/(π(1−s²))`.
    pub fn prefactor(&self) -> f64 {
        4.0 / (PI * (1.0 - self.s * self.s))
    }

    /// Leading indices whose quantizer elements stay within `|M|^k ≤ 1e8`;
    /// beyond that, cancellation in double precision dominates.
    pub fn conditioned_block(&self) -> usize {
        let interior = self.dim.saturating_sub(2);
        let lm = self.m().abs().log10();
        if lm <= 0.0 {
            interior
        } else {
            ((8.0 / lm).floor() as usize + 1).min(interior)
        }
    }
}

/// Column `D(−α)|n⟩`, exact within the cutoff.
fn displaced_number_vector(n: usize, alpha: C64, dim: usize) -> DVector<C64> {
    displacement_projected(-alpha, dim).matrix().column(n).into_owned()
}

/// `⟨n| D(α) ρ D(α)⁻¹ |n⟩`.
pub fn photon_tomogram(rho: &QuantumState, n: usize, alpha: C64) -> Result<f64> {
    let dim = rho.dim();
    if n >= dim {
        return Err(Error::OutOfRange { index: n, dim });
    }
    let v = displaced_number_vector(n, alpha, dim);
    Ok((v.adjoint() * rho.rho().matrix() * &v)[(0, 0)].re)
}

/// Number-state tomogram `ω^{(m)}(n, α)` from the two-branch Laguerre formula.
pub fn fock_photon_tomogram_closed(m: usize, n: usize, alpha: C64) -> f64 {
    let x = alpha.norm_sqr();
    if m >= n {
        fock_photon_branch_upper(m, n, x)
    } else {
        fock_photon_branch_lower(m, n, x)
    }
}

/// Branch for `m ≥ n`: `(n!/m!) x^{m−n} e^{−x} (L_n^{m−n}(x))²`.
pub fn fock_photon_branch_upper(m: usize, n: usize, x: f64) -> f64 {
    let l = laguerre(n, (m - n) as f64, x);
    factorial(n) / factorial(m) * x.powi((m - n) as i32) * (-x).exp() * l * l
}

/// Branch for `m ≤ n`: `(m!/n!) x^{n−m} e^{−x} (L_m^{n−m}(x))²`.
pub fn fock_photon_branch_lower(m: usize, n: usize, x: f64) -> f64 {
    let l = laguerre(m, (n - m) as f64, x);
    factorial(m) / factorial(n) * x.powi((n - m) as i32) * (-x).exp() * l * l
}

/// Polar label grid: `n < photons`, `|α| ≤ radius` with Gauss–Legendre
/// radial nodes and a periodic angular rule; weight `r dr dφ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonGrid {
    pub photons: usize,
    pub radial: usize,
    pub radius: f64,
    pub angles: usize,
}

impl PhotonGrid {
    pub fn measure(&self) -> Measure {
        let (rs, wr) = gauss_legendre(self.radial, 0.0, self.radius);
        let (ps, wp) = periodic(self.angles);
        let mut labels = Vec::new();
        let mut weights = Vec::new();
        for (i, &r) in rs.iter().enumerate() {
            for (j, &phi) in ps.iter().enumerate() {
                let alpha = C64::from_polar(r, phi);
                for n in 0..self.photons {
                    labels.push(LabelPoint::photon(n, alpha));
                    weights.push(r * wr[i] * wp[j]);
                }
            }
        }
        let desc = format!("photon n<{} |alpha|<={} ({}x{})", self.photons, self.radius, self.radial, self.angles);
        Measure::new(labels, weights, desc).expect("valid photon grid")
    }
}

fn photon_coords(x: &LabelPoint) -> Result<(usize, C64)> {
    match *x {
        LabelPoint::Photon { n, alpha } => Ok((n, alpha)),
        _ => Err(Error::LabelMismatch { label: format!("{x:?}"), scheme: "photon" }),
    }
}

/// `Q(0, α)`; `Q(n, α) = M^{−n} Q(0, α)`.
pub fn quantizer_base(cfg: &PhotonConfig, alpha: C64) -> FockOperator {
    let dim = cfg.dim;
    let m = cfg.m();
    let r2 = alpha.norm_sqr();
    let y = (m - 1.0).powi(2) * r2 / m.abs();
    let env = cfg.prefactor() * ((m * m - 1.0) * r2 / (2.0 * m)).exp();
    let dir = if r2 == 0.0 { C64::new(-1.0, 0.0) } else { -alpha / alpha.norm() };
    let mut q = FockOperator::zeros(dim).into_matrix();
    for k in 0..dim {
        let g = normalized_laguerre(dim - k, k, y);
        let phase = dir.powu(k as u32) * (env * m.abs().powf(0.5 * k as f64));
        for (j, gj) in g.iter().enumerate() {
            let v = phase * (m.powi(j as i32) * gj);
            q[(j + k, j)] = v;
            if k > 0 {
                q[(j, j + k)] = v.conj();
            }
        }
    }
    FockOperator::from_matrix(q).expect("square")
}

/// `Q(n, α)` from the normal-ordered closed form.
pub fn photon_quantizer(cfg: &PhotonConfig, n: usize, alpha: C64) -> FockOperator {
    quantizer_base(cfg, alpha).scale(C64::new(cfg.m().powi(-(n as i32)), 0.0))
}

/// `Q(n, α)` by eigendecomposition of the truncated `(a†+α*)(a+α)` with the
/// principal branch of `M^λ`. Only meaningful when `|M| < 1`, where it
/// converges to [`photon_quantizer`] as the cutoff grows.
pub fn photon_quantizer_spectral(cfg: &PhotonConfig, n: usize, alpha: C64) -> FockOperator {
    let dim = cfg.dim;
    let a = annihilation(dim);
    let shifted = &a + &FockOperator::identity(dim).scale(alpha);
    let h = (&shifted.adjoint() * &shifted).into_matrix();
    let eig = h.symmetric_eigen();
    let mc = C64::new(cfg.m(), 0.0);
    let d = DVector::from_iterator(dim, eig.eigenvalues.iter().map(|&l| mc.powf(l - n as f64) * cfg.prefactor()));
    let v = &eig.eigenvectors;
    FockOperator::from_matrix(v * nalgebra::DMatrix::from_diagonal(&d) * v.adjoint()).expect("square")
}

/// `D(−α)|n⟩⟨n|D(α)`.
pub fn photon_dequantizer(n: usize, alpha: C64, dim: usize) -> Result<FockOperator> {
    if n >= dim {
        return Err(Error::OutOfRange { index: n, dim });
    }
    let v = displaced_number_vector(n, alpha, dim);
    Ok(FockOperator::outer(&v, &v))
}

#[derive(Clone, Debug)]
pub struct PhotonScheme {
    config: PhotonConfig,
    grid: PhotonGrid,
    measure: Arc<Measure>,
}

impl PhotonScheme {
    pub fn new(config: PhotonConfig, grid: PhotonGrid) -> Result<Self> {
        if grid.photons > config.dim {
            return Err(Error::OutOfRange { index: grid.photons - 1, dim: config.dim });
        }
        Ok(Self { config, grid, measure: Arc::new(grid.measure()) })
    }

    pub fn config(&self) -> &PhotonConfig {
        &self.config
    }

    pub fn grid(&self) -> &PhotonGrid {
        &self.grid
    }
}

pub fn photon_scheme(config: PhotonConfig, grid: PhotonGrid) -> Result<PhotonScheme> {
    PhotonScheme::new(config, grid)
}

impl Scheme for PhotonScheme {
    fn name(&self) -> &'static str {
        "photon"
    }

    fn dim(&self) -> usize {
        self.config.dim
    }

    fn measure(&self) -> &Arc<Measure> {
        &self.measure
    }

    fn accepts(&self, x: &LabelPoint) -> bool {
        matches!(x, LabelPoint::Photon { n, .. } if *n < self.config.dim)
    }

    fn dequantizer(&self, x: &LabelPoint) -> Result<FockOperator> {
        let (n, alpha) = photon_coords(x)?;
        photon_dequantizer(n, alpha, self.config.dim)
    }

    fn quantizer(&self, x: &LabelPoint) -> Result<FockOperator> {
        let (n, alpha) = photon_coords(x)?;
        if n >= self.config.dim {
            return Err(Error::OutOfRange { index: n, dim: self.config.dim });
        }
        Ok(photon_quantizer(&self.config, n, alpha))
    }

    fn symbol(&self, a: &FockOperator, x: &LabelPoint) -> Result<C64> {
        let (n, alpha) = photon_coords(x)?;
        if n >= self.config.dim {
            return Err(Error::OutOfRange { index: n, dim: self.config.dim });
        }
        let v = displaced_number_vector(n, alpha, self.config.dim);
        Ok((v.adjoint() * a.matrix() * &v)[(0, 0)])
    }

    /// Labels sharing `α` differ only by the scalar `M^{−n}`.
    fn quantize(&self, f: &SymbolGrid) -> Result<FockOperator> {
        let m = self.config.m();
        let mut index: HashMap<(u64, u64), usize> = HashMap::new();
        let mut alphas: Vec<C64> = Vec::new();
        let mut coeffs: Vec<C64> = Vec::new();
        for ((x, w), v) in f.labels().iter().zip(f.weights()).zip(f.values()) {
            let (n, alpha) = photon_coords(x)?;
            if n >= self.config.dim {
                return Err(Error::OutOfRange { index: n, dim: self.config.dim });
            }
            let slot = *index.entry((alpha.re.to_bits(), alpha.im.to_bits())).or_insert_with(|| {
                alphas.push(alpha);
                coeffs.push(C64::new(0.0, 0.0));
                alphas.len() - 1
            });
            coeffs[slot] += v * (w * m.powi(-(n as i32)));
        }
        let cfg = self.config;
        const CHUNK: usize = 16;
        let partials: Vec<FockOperator> = (0..alphas.len().div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut acc = FockOperator::zeros(cfg.dim);
                for i in c * CHUNK..((c + 1) * CHUNK).min(alphas.len()) {
                    acc += &quantizer_base(&cfg, alphas[i]).scale(coeffs[i]);
                }
                acc
            })
            .collect();
        let mut total = FockOperator::zeros(cfg.dim);
        for p in &partials {
            total += p;
        }
        Ok(total)
    }

    fn accuracy_block(&self) -> usize {
        self.config.conditioned_block()
    }
}

/// `Tr(Q(n1,α1)·Q(n2,α2)·U(n3,α3))`.
pub fn photon_kernel_trace(
    cfg: &PhotonConfig,
    n1: usize,
    alpha1: C64,
    n2: usize,
    alpha2: C64,
    n3: usize,
    alpha3: C64,
) -> Result<C64> {
    for n in [n1, n2, n3] {
        if n >= cfg.dim {
            return Err(Error::OutOfRange { index: n, dim: cfg.dim });
        }
    }
    let q1 = photon_quantizer(cfg, n1, alpha1);
    let q2 = photon_quantizer(cfg, n2, alpha2);
    let v = displaced_number_vector(n3, alpha3, cfg.dim);
    let left = q1.matrix().adjoint() * &v;
    let right = q2.matrix() * &v;
    Ok((left.adjoint() * right)[(0, 0)])
}

/// The argument `A` whose squared modulus enters the closed-form kernel.
pub fn closed_kernel_argument(cfg: &PhotonConfig, a1: C64, a2: C64, a3: C64) -> C64 {
    closed_kernel_argument_at(cfg.t(), a1, a2, a3)
}

/// [`closed_kernel_argument`] for an explicit `t`.
pub fn closed_kernel_argument_at(t: C64, a1: C64, a2: C64, a3: C64) -> C64 {
    let em = (-C64::i() * t).exp();
    let em2 = em * em;
    -a3 + a1 - a1 * em + a2 * em - a2 * em2 + a3 * em2
}

/// The bracketed phase sum of the closed-form kernel, term for term.
pub fn closed_kernel_phase_sum(cfg: &PhotonConfig, a1: C64, a2: C64, a3: C64) -> C64 {
    closed_kernel_phase_sum_at(cfg.t(), a1, a2, a3)
}

/// [`closed_kernel_phase_sum`] for an explicit `t`.
pub fn closed_kernel_phase_sum_at(t: C64, a1: C64, a2: C64, a3: C64) -> C64 {
    let i = C64::i();
    let ts = t.conj();
    let e = |z: C64| z.exp();
    let e1 = e(i * ts); // e^{it*}
    let em1 = e(-i * t); // e^{-it}
    let e2s = e(i * ts * 2.0); // e^{2it*}
    let e3 = e(-i * t + i * ts * 2.0); // e^{-it+2it*}
    let em2 = e(-i * t * 2.0); // e^{-2it}
    let e4 = e(i * ts - i * t * 2.0); // e^{it*-2it}
    let (c1, c2, c3) = (a1.conj(), a2.conj(), a3.conj());
    let (n1, n2, n3) = (a1.norm_sqr(), a2.norm_sqr(), a3.norm_sqr());
    -a3 * c1 + c3 * a1 - a1 * c2 + c1 * a2 - a2 * c3 + c2 * a3
        + a3 * c1 * e1
        - n1 * e1
        - a3 * c2 * e1
        + a1 * c2 * e1
        - c3 * a1 * em1
        + n1 * em1
        + c3 * a2 * em1
        - c1 * a2 * em1
        + a3 * c2 * e2s
        - a1 * c2 * e2s
        + a1 * c2 * e3
        - n2 * e3
        - n3 * e2s
        + a1 * c3 * e2s
        - a1 * c3 * e3
        + a2 * c3 * e3
        - c3 * a2 * em2
        + c1 * a2 * em2
        - c1 * a2 * e4
        - n2 * e4
        + n3 * em2
        - c1 * a3 * em2
        + c1 * a3 * e4
        - c2 * a3 * e4
}

/// The closed-form kernel as written in the source formula, transcribed
/// without corrections. See [`kernel_term_groups`] for how it compares with
/// the trace.
pub fn photon_kernel_closed(cfg: &PhotonConfig, n1: usize, a1: C64, n2: usize, a2: C64, n3: usize, a3: C64) -> C64 {
    photon_kernel_closed_at(cfg.prefactor(), cfg.t(), n1, a1, n2, a2, n3, a3)
}

/// [`photon_kernel_closed`] with an explicit prefactor `c` and parameter `t`.
#[allow(clippy::too_many_arguments)]
pub fn photon_kernel_closed_at(c: f64, t: C64, n1: usize, a1: C64, n2: usize, a2: C64, n3: usize, a3: C64) -> C64 {
    let nphase = (C64::i() * t * (n1 as f64 + n2 as f64 - 2.0 * n3 as f64)).exp();
    let a = closed_kernel_argument_at(t, a1, a2, a3);
    let env = (-a.norm_sqr() + closed_kernel_phase_sum_at(t, a1, a2, a3) * 0.5).exp();
    nphase * env * (c * c * laguerre(n3, 0.0, a.norm_sqr()))
}

/// Agreement between the closed form and the trace for one group of terms.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermGroupResidual {
    pub group: String,
    /// Largest relative deviation within the group.
    pub residual: f64,
    pub note: String,
}

fn rel(a: C64, b: C64) -> f64 {
    let s = b.norm().max(1e-300);
    (a - b).norm() / s
}

/// Compare the closed-form kernel with the trace one factor at a time:
/// the constant prefactor, the photon-number phase, the Gaussian envelope
/// (modulus and phase separately) and the Laguerre factor.
pub fn kernel_term_groups(cfg: &PhotonConfig, alphas: &[(C64, C64, C64)]) -> Result<Vec<TermGroupResidual>> {
    let z = C64::new(0.0, 0.0);
    let mut out = Vec::new();

    let kt = photon_kernel_trace(cfg, 0, z, 0, z, 0, z)?;
    let kc = photon_kernel_closed(cfg, 0, z, 0, z, 0, z);
    out.push(TermGroupResidual {
        group: "prefactor".into(),
        residual: rel(kc, kt),
        note: format!("closed {kc:.6e} trace {kt:.6e}"),
    });

    let mut worst: f64 = 0.0;
    let mut note = String::new();
    for n1 in 0..3 {
        for n2 in 0..3 {
            for n3 in 0..3 {
                let kt = photon_kernel_trace(cfg, n1, z, n2, z, n3, z)?;
                let kc = photon_kernel_closed(cfg, n1, z, n2, z, n3, z);
                let r = rel(kc, kt);
                if r > worst {
                    worst = r;
                    note = format!("n=({n1},{n2},{n3}): closed {kc:.4e} trace {kt:.4e}");
                }
            }
        }
    }
    out.push(TermGroupResidual { group: "number-phase".into(), residual: worst, note });

    let (mut wm, mut wp) = (0.0f64, 0.0f64);
    let (mut nm, mut np) = (String::new(), String::new());
    for &(a1, a2, a3) in alphas {
        let kt = photon_kernel_trace(cfg, 0, a1, 0, a2, 0, a3)?;
        let kc = photon_kernel_closed(cfg, 0, a1, 0, a2, 0, a3);
        let rm = (kc.norm() - kt.norm()).abs() / kt.norm().max(1e-300);
        let rp = (kc / kt).arg().abs();
        if rm > wm {
            wm = rm;
            nm = format!("alphas=({a1:.3},{a2:.3},{a3:.3}): |closed| {:.4e} |trace| {:.4e}", kc.norm(), kt.norm());
        }
        if rp > wp {
            wp = rp;
            np = format!("alphas=({a1:.3},{a2:.3},{a3:.3}): phase gap {rp:.4} rad");
        }
    }
    out.push(TermGroupResidual { group: "envelope-modulus".into(), residual: wm, note: nm });
    out.push(TermGroupResidual { group: "envelope-phase".into(), residual: wp / PI, note: np });

    let mut wl: f64 = 0.0;
    let mut nl = String::new();
    for &(a1, a2, a3) in alphas {
        let t0 = photon_kernel_trace(cfg, 0, a1, 0, a2, 0, a3)?;
        let c0 = photon_kernel_closed(cfg, 0, a1, 0, a2, 0, a3);
        for n3 in 1..3 {
            // Strip each side's own number phase so only the Laguerre factor remains.
            let rt = photon_kernel_trace(cfg, 0, a1, 0, a2, n3, a3)? / t0 * cfg.m().powi(-2 * n3 as i32);
            let rc = photon_kernel_closed(cfg, 0, a1, 0, a2, n3, a3) / c0 * cfg.m().powi(2 * n3 as i32);
            let r = rel(rc, rt);
            if r > wl {
                wl = r;
                nl = format!("n3={n3}: closed ratio {rc:.4e} trace ratio {rt:.4e}");
            }
        }
    }
    out.push(TermGroupResidual { group: "laguerre".into(), residual: wl, note: nl });
    Ok(out)
}
