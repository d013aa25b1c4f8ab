use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use saft_core::convolution::{dtsaft, eta};
use saft_core::sampling::synthesize_at;
use saft_core::shiftinv::{compute_weights, psnr, si_interpolate_at, Generator};
use saft_core::signal::{chirp, zeta};
use saft_core::transform::{forward, kernel};
use saft_core::{SaftParams, SampleSeq, Signal, UniformGrid};

fn params() -> impl Strategy<Value = SaftParams> {
    (-3.0..3.0f64, 0.2..3.0f64, any::<bool>(), -3.0..3.0f64, -2.0..2.0f64, -2.0..2.0f64)
        .prop_filter_map("degenerate", |(a, b, neg, c, p, q)| {
            let b = if neg { -b } else { b };
            if a.abs() < 0.2 {
                return None;
            }
            let d = (1.0 + b * c) / a;
            (d.abs() <= 20.0).then(|| SaftParams::new(a, b, c, d, p, q).ok()).flatten()
        })
}

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn seq(max: usize) -> impl Strategy<Value = SampleSeq> {
    (-10i64..10, prop::collection::vec(complex(), 1..max)).prop_map(|(o, v)| SampleSeq::new(o, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_is_an_involution(p in params()) {
        let back = p.inverse().unwrap().inverse().unwrap();
        for (x, y) in back.to_array().iter().zip(p.to_array()) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn chirps_have_unit_modulus(p in params(), t in -50.0..50.0f64, w in -50.0..50.0f64) {
        prop_assert!((chirp(&p, t).norm() - 1.0).abs() < 1e-14);
        prop_assert!((zeta(&p, t).norm() - 1.0).abs() < 1e-14);
        prop_assert!((eta(&p, w).norm() - 1.0).abs() < 1e-14);
        let k = kernel(&p, t, w).norm() * (2.0 * PI * p.b().abs()).sqrt();
        prop_assert!((k - 1.0).abs() < 1e-13);
    }

    #[test]
    fn sequence_transform_is_periodic_up_to_its_carrier(p in params(), s in seq(12), w in -5.0..5.0f64) {
        let delta = p.derived().delta;
        let x = dtsaft(&p, &s, w);
        let y = dtsaft(&p, &s, w + delta);
        let scale = 1.0 + x.norm();
        prop_assert!((y.norm() - x.norm()).abs() < 1e-9 * scale);
        prop_assert!((y * eta(&p, w + delta).conj() - x * eta(&p, w).conj()).norm() < 1e-9 * scale);
    }

    #[test]
    fn forward_transform_is_linear(
        p in params(),
        u in prop::collection::vec(complex(), 32),
        v in prop::collection::vec(complex(), 32),
        alpha in complex(),
        beta in complex(),
    ) {
        let g = UniformGrid::linspace(-2.0, 2.0, 32).unwrap();
        let w = UniformGrid::linspace(-3.0, 3.0, 17).unwrap();
        let f1 = Signal::new(g, u).unwrap();
        let f2 = Signal::new(g, v).unwrap();
        let mix = f1.scale(alpha).axpy(beta, &f2).unwrap();
        let lhs = forward(&p, &mix, &w);
        let a = forward(&p, &f1, &w);
        let b = forward(&p, &f2, &w);
        for i in 0..w.n() {
            let rhs = alpha * a.values()[i] + beta * b.values()[i];
            prop_assert!((lhs.values()[i] - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn bandlimited_series_interpolates(p in params(), s in seq(16), spacing in 0.1..2.0f64) {
        for (k, v) in s.iter() {
            prop_assert!((synthesize_at(&p, &s, spacing, k as f64 * spacing) - v).norm() < 1e-12);
        }
    }

    #[test]
    fn power_cosine_weights_interpolate(p in params(), s in seq(24), spacing in 0.1..2.0f64) {
        let g = Generator::power_cosine();
        let w = compute_weights(&p, &s, &g, spacing).unwrap();
        for (k, v) in s.iter() {
            prop_assert!((si_interpolate_at(&p, &w, &g, spacing, k as f64 * spacing) - v).norm() < 1e-8);
        }
    }

    #[test]
    fn psnr_is_scale_invariant(s in seq(20), e in seq(20), c in 0.01..100.0f64) {
        let e = SampleSeq::new(s.offset(), (0..s.len()).map(|i| s.values()[i] + 0.01 * e.values()[i % e.len()]).collect());
        prop_assume!(s.values().iter().any(|v| v.norm() > 0.0));
        let base = psnr(&s, &e).unwrap();
        let scaled = psnr(&s.map(|_, v| v * c), &e.map(|_, v| v * c)).unwrap();
        prop_assert!(base.is_infinite() && scaled.is_infinite() || (base - scaled).abs() < 1e-9);
    }
}
