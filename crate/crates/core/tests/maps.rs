use starprod_core::maps::*;
use starprod_core::C64;
use std::f64::consts::PI;
use starprod_core::Axis;

#[test]
fn kernel_at_zero_frame() {
    let k = symplectic_to_photon_kernel(0.4, 0.0, 0.0, 3, C64::new(0.5, -0.2));
    assert!((k - C64::from_polar(1.0 / (2.0 * PI), 0.4)).norm() < 1e-15);
}

#[test]
fn characteristic_of_vacuum() {
    let vac = |x: f64, _t: f64| (-x * x).exp() / PI.sqrt();
    let ax = Axis { lo: -10.0, hi: 10.0, count: 401 };
    for &k in &[0.0, 0.5, 2.0, 5.0] {
        let f = characteristic_function(&vac, k, 0.3, &ax).unwrap();
        assert!((f - C64::new((-0.25 * k * k).exp(), 0.0)).norm() < 1e-10);
    }
    assert!(characteristic_function(&vac, -1.0, 0.0, &ax).is_err());
    assert!((optical_moments(&vac, 2, 0.0, &ax) - 0.5).abs() < 1e-10);
}

#[test]
fn identity_degenerate_cases() {
    let (lhs, rhs) = hermite_laguerre_sides(2, 2, C64::new(0.0, 0.0), &IdentityQuadrature::default()).unwrap();
    assert!((lhs - 1.0).abs() < 1e-14);
    assert!((rhs.re - 1.0).abs() < 1e-6, "{rhs}");
    assert!(hermite_laguerre_sides(3, 1, C64::new(0.0, 0.0), &IdentityQuadrature::default()).is_err());
}

fn coherent_optical(a0: C64) -> impl Fn(f64, f64) -> f64 + Sync {
    move |x: f64, t: f64| {
        let centre = std::f64::consts::SQRT_2 * (a0 * C64::from_polar(1.0, -t)).re;
        (-(x - centre).powi(2)).exp() / PI.sqrt()
    }
}

#[test]
fn optical_route_for_coherent_states() {
    let quad = OpticalQuadrature::default();
    let vac = OpticalTransform::new(&coherent_optical(C64::new(0.0, 0.0)), &quad);
    assert!((vac.photon(0, C64::new(0.0, 0.0)).value - 1.0).abs() < 1e-4);
    assert!(vac.photon(1, C64::new(0.0, 0.0)).value.abs() < 1e-4);

    let a0 = C64::new(0.6, -0.3);
    let t = OpticalTransform::new(&coherent_optical(a0), &quad);
    // The displaced frame D(α) removes every photon at α = −α₀.
    let back = t.photon(0, -a0);
    assert!((back.value - 1.0).abs() < 1e-4, "{back:?}");
    assert!(back.warning.is_none());
    let off = C64::new(0.2, 0.1);
    assert!((t.photon(0, off).value - (-(off + a0).norm_sqr()).exp()).abs() < 1e-4);
}

#[test]
fn coarse_optical_quadrature_warns() {
    let quad = OpticalQuadrature { k_max: 4.0, k_nodes: 64, ..Default::default() };
    let v = photon_from_optical(&coherent_optical(C64::new(0.0, 0.0)), 0, C64::new(0.0, 0.0), &quad);
    assert!(v.warning.is_some());
}

#[test]
fn moment_series_matches_characteristic_function() {
    let w = coherent_optical(C64::new(0.5, 0.2));
    let ax = Axis { lo: -12.0, hi: 12.0, count: 961 };
    for &k in &[0.1, 0.3, 0.5] {
        let series = characteristic_from_moments(&w, k, 0.4, 16, &ax);
        let direct = characteristic_function(&w, k, 0.4, &ax).unwrap();
        assert!((series - direct).norm() < 1e-6);
    }
    let first = optical_moments(&coherent_optical(C64::new(1.0, 0.0)), 1, 0.0, &ax);
    assert!((first - std::f64::consts::SQRT_2).abs() < 1e-10);
}

#[test]
fn hermite_laguerre_examples() {
    let q = IdentityQuadrature::default();
    let (lhs, rhs) = hermite_laguerre_sides(0, 0, C64::new(1.0, 0.0), &q).unwrap();
    assert!((lhs - (-1.0f64).exp()).abs() < 1e-14);
    assert!((rhs - C64::new(lhs, 0.0)).norm() < 1e-6);
    let (lhs, rhs) = hermite_laguerre_sides(0, 2, C64::new(1.0, 0.0), &q).unwrap();
    assert!((lhs - 0.5 * (-1.0f64).exp()).abs() < 1e-14);
    assert!((rhs - C64::new(lhs, 0.0)).norm() < 1e-6);
}
