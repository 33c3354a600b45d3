//! Truncated Fock-space linear algebra.
//!
//! Operators live on `span{|0⟩ … |N−1⟩}`. Two flavours of displacement are
//! provided: [`displacement`] exponentiates the truncated generator, while
//! [`displacement_projected`] returns the exact upper-left block of the
//! infinite-dimensional operator. The projected form is what the schemes use;
//! the truncated exponential is only faithful for `|α|` well inside `√N/2`.

use std::f64::consts::SQRT_2;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use log::info;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::special::normalized_laguerre;

pub type CMatrix = DMatrix<C64>;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// A complex `dim × dim` matrix in the number basis, `entries[(m, n)] = ⟨m|A|n⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    entries: CMatrix,
}

impl FockOperator {
    pub fn from_matrix(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), got: entries.ncols() });
        }
        if entries.nrows() == 0 {
            return Err(Error::InvalidDimension { dim: 0, min: 1 });
        }
        Ok(Self { entries })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self { entries: CMatrix::from_fn(dim, dim, f) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: CMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: CMatrix::identity(dim, dim) }
    }

    pub fn diagonal(values: &[C64]) -> Self {
        Self { entries: CMatrix::from_diagonal(&DVector::from_column_slice(values)) }
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &DVector<C64>, v: &DVector<C64>) -> Self {
        Self { entries: u * v.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.entries[(m, n)]
    }

    pub fn adjoint(&self) -> Self {
        Self { entries: self.entries.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// `Tr(A·B)` without forming the product.
    pub fn trace_product(&self, other: &FockOperator) -> C64 {
        let n = self.dim();
        let mut acc = ZERO;
        for j in 0..n {
            for i in 0..n {
                acc += self.entries[(i, j)] * other.entries[(j, i)];
            }
        }
        acc
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { entries: &self.entries * c }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm() <= tol))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    /// Upper-left `block × block` sub-matrix.
    pub fn block(&self, block: usize) -> CMatrix {
        let b = block.min(self.dim());
        self.entries.view((0, 0), (b, b)).into_owned()
    }

    /// Embed into (or cut down to) a different cutoff.
    pub fn resized(&self, dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i < self.dim() && j < self.dim() { self.entries[(i, j)] } else { ZERO })
    }

    /// Frobenius distance between the upper-left blocks of two operators.
    pub fn block_distance(&self, other: &FockOperator, block: usize) -> f64 {
        (self.block(block) - other.block(block)).norm()
    }

    /// Block distance divided by the block norm of `reference`.
    pub fn relative_block_distance(&self, reference: &FockOperator, block: usize) -> f64 {
        let d = self.block_distance(reference, block);
        let r = reference.block(block).norm();
        if r == 0.0 {
            d
        } else {
            d / r
        }
    }

    fn check_same_dim(&self, other: &FockOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &FockOperator) -> Result<FockOperator> {
        self.check_same_dim(other)?;
        Ok(self * other)
    }
}

impl Add for &FockOperator {
    type Output = FockOperator;
    fn add(self, rhs: &FockOperator) -> FockOperator {
        FockOperator { entries: &self.entries + &rhs.entries }
    }
}

impl Sub for &FockOperator {
    type Output = FockOperator;
    fn sub(self, rhs: &FockOperator) -> FockOperator {
        FockOperator { entries: &self.entries - &rhs.entries }
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        FockOperator { entries: &self.entries * &rhs.entries }
    }
}

impl Mul<C64> for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: C64) -> FockOperator {
        self.scale(rhs)
    }
}

impl Neg for &FockOperator {
    type Output = FockOperator;
    fn neg(self) -> FockOperator {
        FockOperator { entries: -&self.entries }
    }
}

impl AddAssign<&FockOperator> for FockOperator {
    fn add_assign(&mut self, rhs: &FockOperator) {
        self.entries += &rhs.entries;
    }
}

/// A validated density operator.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    rho: FockOperator,
}

impl QuantumState {
    pub const TOLERANCE: f64 = 1e-10;

    pub fn new(rho: FockOperator) -> Result<Self> {
        if !rho.is_hermitian(Self::TOLERANCE) {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr - ONE).norm() > Self::TOLERANCE {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let eig = rho.matrix().clone().symmetric_eigenvalues();
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -Self::TOLERANCE {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
        Ok(Self { rho })
    }

    /// Pure state `|ψ⟩⟨ψ|` from a normalized vector.
    pub fn pure(psi: &DVector<C64>) -> Result<Self> {
        Self::new(FockOperator::outer(psi, psi))
    }

    /// Convex combination of states with nonnegative weights summing to one.
    pub fn mixture(parts: &[(f64, QuantumState)]) -> Result<Self> {
        let dim = parts.first().ok_or_else(|| Error::InvalidState("empty mixture".into()))?.1.dim();
        let mut acc = FockOperator::zeros(dim);
        for (w, s) in parts {
            if *w < 0.0 {
                return Err(Error::InvalidState(format!("negative mixture weight {w}")));
            }
            if s.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: s.dim() });
            }
            acc += &s.rho.scale(C64::new(*w, 0.0));
        }
        Self::new(acc)
    }

    pub fn rho(&self) -> &FockOperator {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// Population outside the leading `block` levels.
    pub fn tail_population(&self, block: usize) -> f64 {
        (block.min(self.dim())..self.dim()).map(|k| self.rho.get(k, k).re).sum()
    }
}

/// Annihilation, creation, position and momentum operators.
#[derive(Clone, Debug)]
pub struct Ladder {
    pub a: FockOperator,
    pub a_dag: FockOperator,
    pub q: FockOperator,
    pub p: FockOperator,
}

fn check_dim(dim: usize, min: usize) -> Result<()> {
    if dim < min {
        Err(Error::InvalidDimension { dim, min })
    } else {
        Ok(())
    }
}

pub fn annihilation(dim: usize) -> FockOperator {
    FockOperator::from_fn(dim, |i, j| if j == i + 1 { C64::new((j as f64).sqrt(), 0.0) } else { ZERO })
}

pub fn ladder_operators(dim: usize) -> Result<Ladder> {
    check_dim(dim, 2)?;
    let a = annihilation(dim);
    let a_dag = a.adjoint();
    let q = (&a + &a_dag).scale(C64::new(1.0 / SQRT_2, 0.0));
    let p = (&a - &a_dag).scale(C64::new(0.0, -1.0 / SQRT_2));
    Ok(Ladder { a, a_dag, q, p })
}

pub fn number_operator(dim: usize) -> FockOperator {
    let v: Vec<C64> = (0..dim).map(|n| C64::new(n as f64, 0.0)).collect();
    FockOperator::diagonal(&v)
}

pub fn parity(dim: usize) -> FockOperator {
    let v: Vec<C64> = (0..dim).map(|n| if n % 2 == 0 { ONE } else { -ONE }).collect();
    FockOperator::diagonal(&v)
}

/// `exp(−i·H)` for Hermitian `H`, by eigendecomposition.
pub fn expm_hermitian(h: &CMatrix) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let phases = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|&l| (-I * l).exp()));
    let v = &eig.eigenvectors;
    v * CMatrix::from_diagonal(&phases) * v.adjoint()
}

/// `exp(α a† − α* a)` computed in the truncated space.
pub fn displacement(alpha: C64, dim: usize) -> Result<FockOperator> {
    check_dim(dim, 2)?;
    let a = annihilation(dim);
    let gen = (&a.adjoint().scale(alpha) - &a.scale(alpha.conj())).into_matrix();
    // gen is anti-Hermitian; exp(gen) = exp(−i·H) with H = i·gen.
    let h = gen * I;
    FockOperator::from_matrix(expm_hermitian(&h))
}

/// Exact matrix elements `⟨m|D(α)|n⟩` of the untruncated displacement, for
/// `m, n < dim`, via normalized associated Laguerre functions.
pub fn displacement_projected(alpha: C64, dim: usize) -> FockOperator {
    let x = alpha.norm_sqr();
    let mut d = CMatrix::zeros(dim, dim);
    if x == 0.0 {
        return FockOperator::identity(dim);
    }
    let e = alpha / alpha.norm();
    let down = -e.conj();
    for k in 0..dim {
        let g = normalized_laguerre(dim - k, k, x);
        let up_phase = e.powu(k as u32);
        let down_phase = down.powu(k as u32);
        for (n, gn) in g.iter().enumerate() {
            d[(n + k, n)] = up_phase * *gn;
            if k > 0 {
                d[(n, n + k)] = down_phase * *gn;
            }
        }
    }
    FockOperator { entries: d }
}

/// Diagonal element `⟨n|D(α)|n⟩ = e^{−|α|²/2} L_n(|α|²)`.
pub fn displacement_diagonal(n: usize, alpha: C64) -> f64 {
    normalized_laguerre(n + 1, 0, alpha.norm_sqr())[n]
}

/// `exp(−i k (μ q + ν p))` computed in the truncated space.
pub fn quadrature_exponential(k: f64, mu: f64, nu: f64, dim: usize) -> Result<FockOperator> {
    let l = ladder_operators(dim)?;
    let h = (&l.q.scale(C64::new(k * mu, 0.0)) + &l.p.scale(C64::new(k * nu, 0.0))).into_matrix();
    FockOperator::from_matrix(expm_hermitian(&h))
}

/// Displacement argument `β` with `exp(−i k (μ q + ν p)) = D(β)`.
pub fn quadrature_beta(k: f64, mu: f64, nu: f64) -> C64 {
    C64::new(k * nu, -k * mu) / SQRT_2
}

/// Exact projected block of `exp(−i k (μ q + ν p))`.
pub fn quadrature_exponential_projected(k: f64, mu: f64, nu: f64, dim: usize) -> FockOperator {
    displacement_projected(quadrature_beta(k, mu, nu), dim)
}

pub fn basis_vector(m: usize, dim: usize) -> Result<DVector<C64>> {
    if m >= dim {
        return Err(Error::OutOfRange { index: m, dim });
    }
    let mut v = DVector::zeros(dim);
    v[m] = ONE;
    Ok(v)
}

pub fn fock_state(m: usize, dim: usize) -> Result<QuantumState> {
    QuantumState::pure(&basis_vector(m, dim)?)
}

/// `D(α)|0⟩` restricted to the cutoff and renormalized.
pub fn coherent_state(alpha: C64, dim: usize) -> Result<QuantumState> {
    check_dim(dim, 1)?;
    let d = displacement_projected(alpha, dim);
    let col: DVector<C64> = d.matrix().column(0).into_owned();
    let norm = col.norm();
    if (norm - 1.0).abs() > 1e-6 {
        info!("coherent state α={alpha} renormalized by {norm:.9} at cutoff {dim}");
    }
    QuantumState::pure(&(col / C64::new(norm, 0.0)))
}

/// Default accuracy block: every index except the last two.
pub fn interior_block(dim: usize) -> usize {
    dim.saturating_sub(2)
}

/// Random density matrix of the given rank supported on the first `support`
/// levels, reproducible from `seed`.
pub fn random_state(dim: usize, support: usize, rank: usize, seed: u64) -> Result<QuantumState> {
    let support = support.min(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = FockOperator::zeros(dim);
    let mut total = 0.0;
    for _ in 0..rank.max(1) {
        let v = DVector::from_fn(dim, |i, _| {
            if i < support {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            } else {
                ZERO
            }
        });
        let w: f64 = rng.random::<f64>() + 0.1;
        let v = &v / C64::new(v.norm(), 0.0);
        acc += &FockOperator::outer(&v, &v).scale(C64::new(w, 0.0));
        total += w;
    }
    let mut rho = acc.scale(C64::new(1.0 / total, 0.0)).into_matrix();
    // Symmetrize away rounding so the Hermiticity check is exact.
    rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    QuantumState::new(FockOperator { entries: rho })
}

/// Random Hermitian operator with entries on the first `support` levels.
pub fn random_hermitian(dim: usize, support: usize, seed: u64) -> FockOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = CMatrix::from_fn(dim, dim, |i, j| {
        if i < support && j < support {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        } else {
            ZERO
        }
    });
    FockOperator { entries: (&m + m.adjoint()) * C64::new(0.5, 0.0) }
}
