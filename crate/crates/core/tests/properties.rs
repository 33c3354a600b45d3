use proptest::prelude::*;

use starprod_core::classical::{classical_kernel, kernel_relation_deviation, pointwise_kernel_oracle, quantum_classical_kernel_ratio, PhaseDistribution};
use starprod_core::fock::{displacement_diagonal, displacement_projected, random_hermitian, random_state};
use starprod_core::io::parse_complex;
use starprod_core::photon::{fock_photon_branch_lower, fock_photon_branch_upper, fock_photon_tomogram_closed, photon_tomogram};
use starprod_core::scheme::dequantize;
use starprod_core::symplectic::symplectic_tomogram;
use starprod_core::wigner::{groenewold_kernel, PhaseGrid, WignerScheme, GROENEWOLD_PREFACTOR};
use starprod_core::fock::fock_state;
use starprod_core::{Axis, C64};

fn frame() -> impl Strategy<Value = (f64, f64)> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_filter("regular frame", |(m, n)| m.hypot(*n) > 0.1)
}

fn triple() -> impl Strategy<Value = (f64, f64, f64)> {
    (-4.0..4.0f64, -3.0..3.0f64, -3.0..3.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tomogram_is_nonnegative_and_homogeneous(seed in 0u64..1000, x in -5.0..5.0f64, (mu, nu) in frame(), lambda in 0.2..4.0f64) {
        let rho = random_state(16, 8, 2, seed).unwrap();
        let w = symplectic_tomogram(&rho, x, mu, nu).unwrap();
        prop_assert!(w >= -1e-12);
        for l in [lambda, -lambda] {
            let scaled = symplectic_tomogram(&rho, l * x, l * mu, l * nu).unwrap();
            prop_assert!((scaled - w / lambda).abs() < 1e-10 * (1.0 + w));
        }
    }

    #[test]
    fn photon_tomogram_is_a_distribution(seed in 0u64..1000, re in -1.5..1.5f64, im in -1.5..1.5f64) {
        let rho = random_state(40, 6, 3, seed).unwrap();
        let alpha = C64::new(re, im);
        let mut total = 0.0;
        for n in 0..40 {
            let w = photon_tomogram(&rho, n, alpha).unwrap();
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&w));
            total += w;
        }
        prop_assert!((total - 1.0).abs() < 1e-8);
    }

    #[test]
    fn number_state_tomogram_matches_matrix_route(m in 0usize..7, n in 0usize..7, re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let alpha = C64::new(re, im);
        let direct = photon_tomogram(&fock_state(m, 48).unwrap(), n, alpha).unwrap();
        prop_assert!((direct - fock_photon_tomogram_closed(m, n, alpha)).abs() < 1e-10);
    }

    #[test]
    fn laguerre_branches_coincide_on_the_diagonal(m in 0usize..20, x in 0.0..30.0f64) {
        prop_assert_eq!(fock_photon_branch_upper(m, m, x), fock_photon_branch_lower(m, m, x));
    }

    #[test]
    fn displacement_diagonal_matches_projection(n in 0usize..8, re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let a = C64::new(re, im);
        let d = displacement_projected(a, 12);
        prop_assert!((d.get(n, n) - C64::new(displacement_diagonal(n, a), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn groenewold_kernel_has_constant_modulus(v in prop::array::uniform6(-10.0..10.0f64)) {
        let k = groenewold_kernel(v[0], v[1], v[2], v[3], v[4], v[5]);
        prop_assert!((k.norm() - GROENEWOLD_PREFACTOR).abs() < 1e-15);
    }

    #[test]
    fn quantum_and_classical_kernels_differ_by_a_phase(x1 in triple(), x2 in triple(), x in triple()) {
        prop_assume!(x.1.abs() > 0.05 || x.2.abs() > 0.05);
        prop_assert!(kernel_relation_deviation(x1, x2, x).unwrap() < 1e-12);
        prop_assert!((quantum_classical_kernel_ratio(x1, x2).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn classical_kernel_is_symmetric(x1 in triple(), x2 in triple(), x in triple()) {
        prop_assume!(x.1.abs() > 0.05 || x.2.abs() > 0.05);
        let k = classical_kernel();
        prop_assert_eq!(k.smooth_factor(x1, x2, x).unwrap(), k.smooth_factor(x2, x1, x).unwrap());
    }

    #[test]
    fn pointwise_product_is_commutative_and_associative(
        a in prop::collection::vec(0.0..5.0f64, 25),
        b in prop::collection::vec(0.0..5.0f64, 25),
        c in prop::collection::vec(0.0..5.0f64, 25),
    ) {
        let g = PhaseGrid::square(2.0, 5).unwrap();
        let (fa, fb, fc) = (
            PhaseDistribution::new(g, a).unwrap(),
            PhaseDistribution::new(g, b).unwrap(),
            PhaseDistribution::new(g, c).unwrap(),
        );
        prop_assert_eq!(pointwise_kernel_oracle(&fa, &fb).unwrap(), pointwise_kernel_oracle(&fb, &fa).unwrap());
        let left = pointwise_kernel_oracle(&pointwise_kernel_oracle(&fa, &fb).unwrap(), &fc).unwrap();
        let right = pointwise_kernel_oracle(&fa, &pointwise_kernel_oracle(&fb, &fc).unwrap()).unwrap();
        for (l, r) in left.values().iter().zip(right.values()) {
            prop_assert!((l - r).abs() <= 1e-14 * l.abs().max(1.0));
        }
    }

    #[test]
    fn parsers_round_trip(re in -1e6..1e6f64, im in -1e6..1e6f64, lo in -50.0..0.0f64, span in 0.1..50.0f64, count in 2usize..500) {
        prop_assert_eq!(parse_complex(&format!("{re},{im}")).unwrap(), C64::new(re, im));
        let ax = Axis::new(lo, lo + span, count).unwrap();
        prop_assert_eq!(ax.to_string().parse::<Axis>().unwrap(), ax);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dequantization_is_linear(s1 in 0u64..1000, s2 in 0u64..1000, a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let scheme = WignerScheme::new(10, PhaseGrid::square(3.0, 9).unwrap()).unwrap();
        let (x, y) = (random_hermitian(10, 6, s1), random_hermitian(10, 6, s2));
        let (ca, cb) = (C64::new(a, 0.0), C64::new(b, 0.0));
        let combo = &x.scale(ca) + &y.scale(cb);
        let lhs = dequantize(&combo, &scheme).unwrap();
        let (fx, fy) = (dequantize(&x, &scheme).unwrap(), dequantize(&y, &scheme).unwrap());
        for i in 0..lhs.len() {
            let rhs = fx.values()[i] * ca + fy.values()[i] * cb;
            prop_assert!((lhs.values()[i] - rhs).norm() < 1e-12);
        }
    }
}
