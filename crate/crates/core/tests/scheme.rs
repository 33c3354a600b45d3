use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use starprod_core::fock::{coherent_state, displacement_diagonal, fock_state, ladder_operators, number_operator};
use starprod_core::photon::photon_kernel_trace;
use starprod_core::scheme::*;
use starprod_core::symplectic::{tomogram_grid, SymplecticGrid, SymplecticScheme};
use starprod_core::wigner::{groenewold_kernel, groenewold_kernel_labels, PhaseGrid, WignerScheme, GROENEWOLD_PREFACTOR};
use starprod_core::{Error, FockOperator, PhotonConfig, Result, C64};

fn wide_wigner(dim: usize) -> WignerScheme {
    WignerScheme::new(dim, PhaseGrid::square(9.0, 192).unwrap()).unwrap()
}

fn phase(x: &LabelPoint) -> (f64, f64) {
    let LabelPoint::Phase { q, p } = *x else { panic!("phase label expected") };
    (q, p)
}

#[test]
fn vacuum_symbol_examples() {
    let s = WignerScheme::new(32, PhaseGrid::square(2.0, 5).unwrap()).unwrap();
    let rho = fock_state(0, 32).unwrap();
    let origin = s.symbol(rho.rho(), &LabelPoint::phase(0.0, 0.0)).unwrap();
    assert!((origin - C64::new(2.0, 0.0)).norm() < 1e-6);
    let off = s.symbol(rho.rho(), &LabelPoint::phase(1.0, 0.0)).unwrap();
    assert!((off.re - 2.0 * (-1.0f64).exp()).abs() < 1e-6);

    let zero = dequantize(&FockOperator::zeros(32), &s).unwrap();
    assert!(zero.values().iter().all(|v| *v == C64::new(0.0, 0.0)));
    let back = quantize(&SymbolGrid::zeros(s.measure().clone()), &s).unwrap();
    assert_eq!(back, FockOperator::zeros(32));
}

#[test]
fn vacuum_round_trip() {
    let s = WignerScheme::new(24, PhaseGrid::square(6.0, 128).unwrap()).unwrap();
    let rho = fock_state(0, 24).unwrap();
    let back = quantize(&dequantize(rho.rho(), &s).unwrap(), &s).unwrap();
    assert!(back.block_distance(rho.rho(), 22) < 1e-3);
}

#[test]
fn foreign_labels_are_rejected() {
    let s = WignerScheme::new(8, PhaseGrid::square(1.0, 3).unwrap()).unwrap();
    let x = LabelPoint::symplectic(0.0, 1.0, 0.0);
    assert!(matches!(s.dequantizer(&x), Err(Error::LabelMismatch { .. })));
    let o = LabelPoint::phase(0.0, 0.0);
    assert!(kernel_by_trace(&s, &o, &o, &x).is_err());
}

/// A scheme whose quantizer is identically zero.
struct Silent(WignerScheme);

impl Scheme for Silent {
    fn name(&self) -> &'static str {
        "silent"
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn measure(&self) -> &Arc<Measure> {
        self.0.measure()
    }
    fn accepts(&self, x: &LabelPoint) -> bool {
        self.0.accepts(x)
    }
    fn dequantizer(&self, x: &LabelPoint) -> Result<FockOperator> {
        self.0.dequantizer(x)
    }
    fn quantizer(&self, _x: &LabelPoint) -> Result<FockOperator> {
        Ok(FockOperator::zeros(self.dim()))
    }
}

#[test]
fn compatibility_of_a_silent_quantizer_is_the_operator_norm() {
    let dim = 12;
    let s = Silent(WignerScheme::new(dim, PhaseGrid::square(3.0, 9).unwrap()).unwrap());
    let ops: Vec<FockOperator> = (0..3).map(|m| fock_state(m, dim).unwrap().rho().scale(C64::new(m as f64 + 1.0, 0.0))).collect();
    let r = compatibility_residual(&s, &ops).unwrap();
    assert!((r - 3.0).abs() < 1e-14, "{r}");
}

#[test]
fn compatibility_on_number_states() {
    let dim = 24;
    let s = WignerScheme::new(dim, PhaseGrid::square(6.0, 128).unwrap()).unwrap();
    let ops: Vec<FockOperator> = (0..8).map(|m| fock_state(m, dim).unwrap().rho().clone()).collect();
    assert!(compatibility_residual(&s, &ops).unwrap() < 1e-3);
}

#[test]
fn trace_kernel_orders() {
    let s = WignerScheme::new(64, PhaseGrid::square(1.0, 3).unwrap()).unwrap();
    let (x1, x2, x3) = ((0.3, -0.2), (-0.1, 0.4), (0.2, 0.1));
    let l = |(q, p): (f64, f64)| LabelPoint::phase(q, p);
    let fwd = kernel_by_trace_ordered(&s, KernelOrder::Forward, &l(x1), &l(x2), &l(x3)).unwrap();
    let rev = kernel_by_trace(&s, &l(x1), &l(x2), &l(x3)).unwrap();
    let expect = groenewold_kernel(x1.0, x1.1, x2.0, x2.1, x3.0, x3.1);
    let swapped = groenewold_kernel(x2.0, x2.1, x1.0, x1.1, x3.0, x3.1);
    assert!((fwd.value - expect).norm() < 1e-3 * GROENEWOLD_PREFACTOR, "{} vs {expect}", fwd.value);
    assert!((rev.value - swapped).norm() < 1e-3 * GROENEWOLD_PREFACTOR);
    let o = l((0.0, 0.0));
    let origin = kernel_by_trace(&s, &o, &o, &o).unwrap().value;
    assert!((origin.re * PI * PI - 1.0).abs() < 1e-4, "{origin}");
}

#[test]
fn photon_trace_kernel_is_stable_in_the_cutoff() {
    let a = PhotonConfig::new(-0.5, 32).unwrap();
    let b = PhotonConfig::new(-0.5, 48).unwrap();
    let args = [(0, C64::new(0.1, 0.0)), (1, C64::new(0.0, -0.2)), (1, C64::new(0.05, 0.05))];
    let ka = photon_kernel_trace(&a, args[0].0, args[0].1, args[1].0, args[1].1, args[2].0, args[2].1).unwrap();
    let kb = photon_kernel_trace(&b, args[0].0, args[0].1, args[1].0, args[1].1, args[2].0, args[2].1).unwrap();
    assert!((ka - kb).norm() < 1e-4 * kb.norm().max(1.0), "{ka} vs {kb}");
}

#[test]
fn star_product_of_position_and_momentum() {
    let dim = 24;
    let s = wide_wigner(dim);
    let l = ladder_operators(dim).unwrap();
    let fq = dequantize(&l.q, &s).unwrap();
    let fp = dequantize(&l.p, &s).unwrap();
    let prod = star_product(&fq, &fp, &s).unwrap();
    // The corner entry of the truncated product is excluded.
    let wide = ladder_operators(dim + 2).unwrap();
    let exact = (&wide.q * &wide.p).resized(dim);
    let back = quantize(&prod, &s).unwrap();
    assert!(back.block_distance(&exact, dim - 2) < 1e-3);
    let comm = &exact - &(&wide.p * &wide.q).resized(dim);
    assert!(comm.block_distance(&FockOperator::identity(dim).scale(C64::new(0.0, 1.0)), dim - 2) < 1e-12);
}

#[test]
fn identity_is_a_unit_and_vacuum_is_idempotent() {
    let dim = 24;
    let s = wide_wigner(dim);
    let one = dequantize(&FockOperator::identity(dim), &s).unwrap();
    let vac = dequantize(fock_state(0, dim).unwrap().rho(), &s).unwrap();
    let left = star_product(&one, &vac, &s).unwrap();
    assert!(left.max_abs_difference(&vac).unwrap() < 1e-6);
    let sq = star_product(&vac, &vac, &s).unwrap();
    assert!(sq.max_abs_difference(&vac).unwrap() < 1e-6);

    let other = SymbolGrid::zeros(Arc::new(PhaseGrid::square(1.0, 3).unwrap().measure()));
    assert!(matches!(star_product(&vac, &other, &s), Err(Error::GridMismatch)));
}

#[test]
fn direct_kernel_quadrature_agrees_with_operator_route() {
    let m = Arc::new(PhaseGrid::square(5.0, 41).unwrap().measure());
    let f = SymbolGrid::from_fn(m, |x| {
        let (q, p) = phase(x);
        C64::new(2.0 * (-q * q - p * p).exp(), 0.0)
    });
    let outs = [LabelPoint::phase(0.0, 0.0), LabelPoint::phase(0.3, -0.2), LabelPoint::phase(-0.5, 0.4)];
    let vals = star_product_direct(&f, &f, &outs, groenewold_kernel_labels).unwrap();
    for (x, v) in outs.iter().zip(vals) {
        let (q, p) = phase(x);
        assert!((v - C64::new(2.0 * (-q * q - p * p).exp(), 0.0)).norm() < 1e-3, "{v}");
    }
}

#[test]
fn wigner_dual_is_a_scaled_symbol() {
    let s = WignerScheme::new(16, PhaseGrid::square(3.0, 13).unwrap()).unwrap();
    let a = coherent_state(C64::new(0.4, -0.3), 16).unwrap().rho().clone();
    let dual = dual_symbol(&a, &s, s.measure().clone()).unwrap();
    let sym = dequantize(&a, &s).unwrap();
    for (d, v) in dual.values().iter().zip(sym.values()) {
        assert!((d - v / (2.0 * PI)).norm() < 1e-12);
    }
    let zero = dual_symbol(&FockOperator::zeros(16), &s, s.measure().clone()).unwrap();
    assert_eq!(zero.max_abs(), 0.0);
}

#[test]
fn symplectic_dual_of_identity() {
    let dim = 20;
    let s = SymplecticScheme::new(dim, SymplecticGrid::polar_default(dim)).unwrap();
    let labels: Vec<LabelPoint> =
        vec![LabelPoint::symplectic(0.5, 0.3, 0.2), LabelPoint::symplectic(-1.2, 1.0, -0.7), LabelPoint::symplectic(2.0, 0.0, 2.5)];
    let m = Arc::new(Measure::new(labels.clone(), vec![1.0; 3], "probe").unwrap());
    let dual = dual_symbol(&FockOperator::identity(dim), &s, m).unwrap();
    for (x, d) in labels.iter().zip(dual.values()) {
        let LabelPoint::Symplectic { x, mu, nu } = *x else { unreachable!() };
        let beta = C64::new(nu, -mu) / SQRT_2;
        let trace: f64 = (0..dim).map(|n| displacement_diagonal(n, beta)).sum();
        let expect = C64::from_polar(trace / (2.0 * PI), x);
        assert!((d - expect).norm() < 1e-8, "{d} vs {expect}");
    }
}

#[test]
fn symplectic_mean_values() {
    let dim = 16;
    let s = SymplecticScheme::new(dim, SymplecticGrid::polar_default(dim)).unwrap();
    let m = s.measure().clone();
    let n_dual = dual_symbol(&number_operator(dim), &s, m.clone()).unwrap();
    let fock3 = tomogram_grid(&fock_state(3, dim).unwrap(), m.clone()).unwrap();
    let mean = mean_value(&fock3, &n_dual).unwrap();
    assert!((mean - C64::new(3.0, 0.0)).norm() < 1e-3, "{mean}");

    let q_dual = dual_symbol(&ladder_operators(dim).unwrap().q, &s, m.clone()).unwrap();
    let coh = tomogram_grid(&coherent_state(C64::new(1.0, 0.0), dim).unwrap(), m).unwrap();
    let mean = mean_value(&coh, &q_dual).unwrap();
    assert!((mean - C64::new(SQRT_2, 0.0)).norm() < 1e-3, "{mean}");

    let elsewhere = SymbolGrid::zeros(Arc::new(PhaseGrid::square(1.0, 3).unwrap().measure()));
    assert!(matches!(mean_value(&coh, &elsewhere), Err(Error::GridMismatch)));
}

#[test]
fn pointwise_associativity_of_a_constant_kernel_is_exact() {
    let m = PhaseGrid::square(1.0, 5).unwrap().measure();
    let o = LabelPoint::phase(0.0, 0.0);
    let r = associativity_residual(|_, _, _| C64::new(0.5, 0.0), &m, &[(o, o, o, o)]);
    assert_eq!(r.residual(), 0.0);
    assert!((r.samples[0].lhs.re - 0.25 * m.weights().iter().sum::<f64>()).abs() < 1e-14);
}
