use starprod_core::wigner::*;
use starprod_core::C64;
use starprod_core::fock::{fock_state, parity};
use starprod_core::scheme::{dequantize, kernel_by_trace_ordered, KernelOrder};
use approx::assert_relative_eq;
use starprod_core::Scheme;
use starprod_core::LabelPoint;

#[test]
fn dequantizer_at_origin_is_twice_parity() {
    let s = WignerScheme::new(12, PhaseGrid::square(1.0, 3).unwrap()).unwrap();
    let u = s.dequantizer(&LabelPoint::phase(0.0, 0.0)).unwrap();
    assert_eq!(u, parity(12).scale(C64::new(2.0, 0.0)));
    let uq = s.dequantizer(&LabelPoint::phase(0.7, -0.4)).unwrap();
    assert!(uq.is_hermitian(1e-10));
}

#[test]
fn ground_state_symbol() {
    let grid = PhaseGrid::square(4.0, 17).unwrap();
    let s = WignerScheme::new(32, grid).unwrap();
    let rho = fock_state(0, 32).unwrap();
    let w = dequantize(rho.rho(), &s).unwrap();
    for (x, v) in w.labels().iter().zip(w.values()) {
        let LabelPoint::Phase { q, p } = *x else { panic!("phase label expected") };
        assert!((v.re - 2.0 * (-q * q - p * p).exp()).abs() < 1e-5);
        assert!(v.im.abs() < 1e-12);
    }
    let one = fock_state(1, 32).unwrap();
    let v = s.symbol(one.rho(), &LabelPoint::phase(0.0, 0.0)).unwrap();
    assert_relative_eq!(v.re, -2.0, epsilon = 1e-12);
}

#[test]
fn kernel_modulus_and_origin() {
    assert_relative_eq!(groenewold_kernel(0.3, 0.1, -0.5, 0.2, 0.9, -0.7).norm(), GROENEWOLD_PREFACTOR, epsilon = 1e-15);
    let k = groenewold_kernel_with_prefactor(GROENEWOLD_HALF_PREFACTOR, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0);
    assert_relative_eq!(k.arg(), 2.0, epsilon = 1e-15);
}

#[test]
fn regularized_trace_kernel_at_origin() {
    let s = WignerScheme::new(64, PhaseGrid::square(1.0, 3).unwrap()).unwrap();
    let o = LabelPoint::phase(0.0, 0.0);
    let k = kernel_by_trace_ordered(&s, KernelOrder::Forward, &o, &o, &o).unwrap().value;
    assert!((k.re - GROENEWOLD_PREFACTOR).abs() < 1e-4, "{k}");
}
