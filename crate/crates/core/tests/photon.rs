use starprod_core::photon::*;
use starprod_core::C64;
use starprod_core::fock::{coherent_state, fock_state};
use approx::assert_relative_eq;
use starprod_core::FockOperator;
use starprod_core::special::factorial;

fn normal_ordered(cfg: &PhotonConfig, n: usize, alpha: C64) -> FockOperator {
    // c M^{-n} e^{(M-1)|α|²} exp((M-1)α a†) M^{a†a} exp((M-1)α* a), with
    // the nilpotent exponentials summed term by term.
    let dim = cfg.dim;
    let m = cfg.m();
    let b = m - 1.0;
    let e = FockOperator::from_fn(dim, |i, k| {
        if i < k {
            C64::new(0.0, 0.0)
        } else {
            (alpha * b).powu((i - k) as u32) * ((factorial(i) / factorial(k)).sqrt() / factorial(i - k))
        }
    });
    let diag: Vec<C64> = (0..dim).map(|k| C64::new(m.powi(k as i32), 0.0)).collect();
    let core = &(&e * &FockOperator::diagonal(&diag)) * &e.adjoint();
    core.scale(C64::new(cfg.prefactor() * m.powi(-(n as i32)) * (b * alpha.norm_sqr()).exp(), 0.0))
}

#[test]
fn closed_form_quantizer_matches_normal_ordering() {
    let cfg = PhotonConfig::new(-0.5, 14).unwrap();
    for &(n, a) in &[(0, C64::new(0.0, 0.0)), (1, C64::new(0.3, -0.2)), (2, C64::new(-0.6, 0.4))] {
        let q = photon_quantizer(&cfg, n, a);
        let r = normal_ordered(&cfg, n, a);
        assert!(q.relative_block_distance(&r, 14) < 1e-12);
        assert!(q.is_hermitian(1e-9 * q.frobenius_norm()));
    }
}

#[test]
fn spectral_route_converges_for_positive_s() {
    let a = C64::new(0.3, 0.2);
    let small = PhotonConfig::new(0.5, 60).unwrap();
    let q = photon_quantizer(&small, 1, a);
    let qs = photon_quantizer_spectral(&small, 1, a);
    assert!(q.block_distance(&qs, 10) < 1e-8, "{}", q.block_distance(&qs, 10));
}

#[test]
fn parameter_t() {
    let cfg = PhotonConfig::new(-0.5, 4).unwrap();
    let e = (C64::i() * cfg.t()).exp();
    assert!((e - C64::new(-3.0, 0.0)).norm() < 1e-12);
    assert!(PhotonConfig::new(1.0, 4).is_err());
    assert!(PhotonConfig::new(-1.0, 4).is_err());
}

#[test]
fn tomogram_examples() {
    let rho0 = fock_state(0, 40).unwrap();
    let a = C64::new(0.8, -0.3);
    for n in 0..6 {
        let want = (-a.norm_sqr()).exp() * a.norm_sqr().powi(n as i32) / factorial(n);
        assert_relative_eq!(photon_tomogram(&rho0, n, a).unwrap(), want, epsilon = 1e-12);
    }
    let one = fock_state(1, 40).unwrap();
    assert_relative_eq!(photon_tomogram(&one, 0, C64::new(1.0, 0.0)).unwrap(), (-1f64).exp(), epsilon = 1e-12);
    assert_eq!(fock_photon_tomogram_closed(1, 1, C64::new(1.0, 0.0)), 0.0);
    assert!(photon_tomogram(&one, 40, a).is_err());
}

#[test]
fn branches_agree_on_diagonal() {
    for m in 0..8 {
        for &x in &[0.0, 0.3, 1.7] {
            assert_eq!(fock_photon_branch_upper(m, m, x), fock_photon_branch_lower(m, m, x));
        }
    }
}

#[test]
fn dequantizer_is_unit_trace_and_symbol_matches_tomogram() {
    let dim = 30;
    let a = C64::new(0.6, 0.5);
    let rho = coherent_state(C64::new(0.2, -0.4), dim).unwrap();
    for n in 0..5 {
        let u = photon_dequantizer(n, a, dim).unwrap();
        assert!((u.trace() - 1.0).norm() < 1e-10);
        let w = rho.rho().trace_product(&u).re;
        assert!((w - photon_tomogram(&rho, n, a).unwrap()).abs() < 1e-13);
    }
    assert_eq!(photon_dequantizer(0, C64::new(0.0, 0.0), 5).unwrap(), FockOperator::from_fn(5, |i, j| {
        if i == 0 && j == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    }));
}

#[test]
fn trace_kernel_at_origin_is_squared_prefactor() {
    let cfg = PhotonConfig::new(-0.5, 16).unwrap();
    let z = C64::new(0.0, 0.0);
    let k = photon_kernel_trace(&cfg, 0, z, 0, z, 0, z).unwrap();
    assert_relative_eq!(k.re, cfg.prefactor().powi(2), epsilon = 1e-10);
    // Diagonal reduction: c² M^{2 n3 − n1 − n2}.
    let k = photon_kernel_trace(&cfg, 1, z, 2, z, 2, z).unwrap();
    assert_relative_eq!(k.re, cfg.prefactor().powi(2) * cfg.m(), epsilon = 1e-10);
}
