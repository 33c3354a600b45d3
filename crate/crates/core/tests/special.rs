use starprod_core::special::*;
use approx::assert_relative_eq;
use std::f64::consts::PI;

#[test]
fn laguerre_low_orders() {
    let x = 0.7;
    assert_relative_eq!(laguerre(0, 0.0, x), 1.0);
    assert_relative_eq!(laguerre(1, 0.0, x), 1.0 - x);
    assert_relative_eq!(laguerre(2, 0.0, x), 0.5 * (x * x - 4.0 * x + 2.0), epsilon = 1e-15);
    assert_relative_eq!(laguerre(2, 3.0, x), 0.5 * (x * x - 10.0 * x + 20.0), epsilon = 1e-14);
    assert_relative_eq!(laguerre(1, 0.0, 1.0), 0.0);
}

#[test]
fn laguerre_all_matches_single() {
    let v = laguerre_all(9, 1.5, 2.3);
    for (n, val) in v.iter().enumerate() {
        assert_relative_eq!(*val, laguerre(n, 1.5, 2.3), epsilon = 1e-12);
    }
}

#[test]
fn normalized_laguerre_matches_direct() {
    for k in 0..5 {
        for &x in &[0.3, 1.0, 4.2] {
            let g = normalized_laguerre(8, k, x);
            for (n, val) in g.iter().enumerate() {
                let direct = (factorial(n) / factorial(n + k)).sqrt()
                    * x.powf(k as f64 / 2.0)
                    * (-x / 2.0).exp()
                    * laguerre(n, k as f64, x);
                assert_relative_eq!(*val, direct, epsilon = 1e-12, max_relative = 1e-10);
            }
        }
    }
}

#[test]
fn normalized_laguerre_bounded_at_large_argument() {
    for k in [0, 3, 20] {
        for v in normalized_laguerre(60, k, 300.0) {
            assert!(v.is_finite() && v.abs() <= 1.0 + 1e-9);
        }
    }
}

#[test]
fn hermite_functions_orthonormal() {
    let h = 0.01;
    let n = 6;
    let mut gram = vec![0.0; n * n];
    let mut x = -12.0;
    while x <= 12.0 {
        let psi = hermite_functions(n, x);
        for a in 0..n {
            for b in 0..n {
                gram[a * n + b] += psi[a] * psi[b] * h;
            }
        }
        x += h;
    }
    for a in 0..n {
        for b in 0..n {
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((gram[a * n + b] - want).abs() < 1e-10);
        }
    }
}

#[test]
fn hermite_function_matches_polynomial() {
    for m in 0..7 {
        for &x in &[-1.3, 0.0, 0.4, 2.2] {
            let psi = hermite_functions(m + 1, x)[m];
            let direct = hermite_poly(m, x) * (-x * x / 2.0).exp()
                / (2f64.powi(m as i32) * factorial(m) * PI.sqrt()).sqrt();
            assert_relative_eq!(psi, direct, epsilon = 1e-13);
        }
    }
}

#[test]
fn cutoff_shape() {
    assert_eq!(smooth_cutoff(1.0, 2.0, 5.0), 1.0);
    assert_eq!(smooth_cutoff(6.0, 2.0, 5.0), 0.0);
    assert_relative_eq!(smooth_cutoff(3.5, 2.0, 5.0), 0.5, epsilon = 1e-15);
}
