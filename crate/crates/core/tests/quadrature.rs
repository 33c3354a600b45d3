use starprod_core::quadrature::*;
use starprod_core::C64;
use approx::assert_relative_eq;

#[test]
fn axis_parse_and_weights() {
    let ax: Axis = "-4:4:129".parse().unwrap();
    assert_eq!(ax.count, 129);
    assert_relative_eq!(ax.spacing(), 8.0 / 128.0);
    assert_eq!(ax.node(64), 0.0);
    assert_eq!(ax.node(128), 4.0);
    assert_relative_eq!(ax.weights().iter().sum::<f64>(), 8.0, epsilon = 1e-13);
    assert!("1:2".parse::<Axis>().is_err());
    assert!("1:0:5".parse::<Axis>().is_err());
    assert!("0:1:1".parse::<Axis>().is_err());
}

#[test]
fn gauss_legendre_integrates_polynomials() {
    let (x, w) = gauss_legendre(12, 0.0, 2.0);
    for deg in 0..24 {
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
        let want = 2f64.powi(deg + 1) / (deg + 1) as f64;
        assert_relative_eq!(got, want, max_relative = 1e-13);
    }
}

#[test]
fn gauss_legendre_odd_order_has_center_node() {
    let (x, w) = gauss_legendre(5, -1.0, 1.0);
    assert!(x[2].abs() < 1e-15);
    assert_relative_eq!(w[2], 128.0 / 225.0, epsilon = 1e-14);
}

#[test]
fn par_sum_is_deterministic() {
    let f = |i: usize| C64::new((i as f64).sin(), (i as f64 * 0.3).cos());
    let a = par_sum(100_003, f);
    let b = par_sum(100_003, f);
    assert_eq!(a, b);
}

#[test]
fn richardson_removes_polynomial_terms() {
    let hs = [1e-2, 5e-3, 2.5e-3];
    let vals: Vec<C64> = hs.iter().map(|h| C64::new(-2.0 - 12.0 * h + 40.0 * h * h, 0.0)).collect();
    assert_relative_eq!(richardson(&hs, &vals).re, -2.0, epsilon = 1e-12);
}
