use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use starprod_core::fock::{coherent_state, fock_state};
use starprod_core::maps::{hermite_laguerre_sides, IdentityQuadrature};
use starprod_core::photon::{photon_kernel_trace, photon_quantizer, photon_tomogram};
use starprod_core::scheme::{dequantize, kernel_by_trace_ordered, KernelOrder};
use starprod_core::symplectic::symplectic_tomogram;
use starprod_core::{LabelPoint, PhaseGrid, PhotonConfig, Scheme, WignerScheme, C64};

fn wigner(c: &mut Criterion) {
    let s = WignerScheme::new(64, PhaseGrid::square(1.0, 3).unwrap()).unwrap();
    let (a, b, x) = (LabelPoint::phase(0.3, -0.2), LabelPoint::phase(-0.1, 0.4), LabelPoint::phase(0.2, 0.1));
    c.bench_function("groenewold trace kernel, dim 64", |bch| {
        bch.iter(|| kernel_by_trace_ordered(&s, KernelOrder::Forward, black_box(&a), &b, &x).unwrap())
    });

    let s = WignerScheme::new(24, PhaseGrid::square(6.0, 64).unwrap()).unwrap();
    let rho = coherent_state(C64::new(0.5, -0.3), 24).unwrap();
    c.bench_function("wigner dequantize, dim 24 on 64x64", |bch| bch.iter(|| dequantize(black_box(rho.rho()), &s).unwrap()));
    let f = dequantize(rho.rho(), &s).unwrap();
    c.bench_function("wigner quantize, dim 24 on 64x64", |bch| bch.iter(|| s.quantize(black_box(&f)).unwrap()));
}

fn tomograms(c: &mut Criterion) {
    let rho = fock_state(3, 32).unwrap();
    c.bench_function("symplectic tomogram, dim 32", |bch| {
        bch.iter(|| symplectic_tomogram(black_box(&rho), 0.7, 0.6, -0.8).unwrap())
    });
    c.bench_function("photon tomogram, dim 32", |bch| {
        bch.iter(|| photon_tomogram(black_box(&rho), 2, C64::new(0.4, 0.1)).unwrap())
    });
}

fn photon(c: &mut Criterion) {
    let cfg = PhotonConfig::new(-0.5, 32).unwrap();
    c.bench_function("photon quantizer, dim 32", |bch| bch.iter(|| photon_quantizer(&cfg, black_box(2), C64::new(0.3, 0.2))));
    c.bench_function("photon trace kernel, dim 32", |bch| {
        bch.iter(|| {
            photon_kernel_trace(&cfg, 0, black_box(C64::new(0.1, 0.0)), 1, C64::new(0.0, -0.2), 1, C64::new(0.05, 0.05))
                .unwrap()
        })
    });
}

fn identity(c: &mut Criterion) {
    let q = IdentityQuadrature::default();
    let mut g = c.benchmark_group("hermite-laguerre");
    g.sample_size(10);
    g.bench_function("sides m=1 n=3", |bch| bch.iter(|| hermite_laguerre_sides(1, 3, black_box(C64::new(0.5, 0.5)), &q).unwrap()));
    g.finish();
}

criterion_group!(benches, wigner, tomograms, photon, identity);
criterion_main!(benches);
