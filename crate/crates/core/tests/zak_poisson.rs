mod common;

use std::f64::consts::PI;

use common::{chirped_gaussian, experiment, gaussian, grid, random_coeffs, rng, sampled};
use num_complex::Complex64 as C64;
use rand::RngExt;
use saft_core::convolution::dtsaft;
use saft_core::params::preset;
use saft_core::sampling::synthesize;
use saft_core::signal::{zeta, SampleSeq};
use saft_core::special::sinc_u;
use saft_core::zak_poisson::{
    bandlimited_energy_residual, integer_spectrum, poisson_lhs, poisson_residual, zak, zak_converged,
    zak_isometry_residual, zak_isometry_residual_signal, zak_quasiperiod_factor,
};
use saft_core::{SaftError, SaftParams, UniformGrid};

fn bump(t: f64) -> C64 {
    if t.abs() < 3.0 {
        C64::new((-1.0 / (9.0 - t * t)).exp(), 0.2 * t)
    } else {
        C64::new(0.0, 0.0)
    }
}

#[test]
fn zak_of_zero_is_zero() {
    let p = experiment();
    let zero = |_: f64| C64::new(0.0, 0.0);
    assert_eq!(zak(&p, &zero, 0.3, 1.0, 64).unwrap(), C64::new(0.0, 0.0));
}

#[test]
fn zak_of_unit_interval_support_keeps_one_term() {
    let p = experiment();
    let f = |t: f64| if (0.0..1.0).contains(&t) { C64::new(1.0 + t, -t) } else { C64::new(0.0, 0.0) };
    let b = p.b();
    for &(t, w) in &[(0.1, 0.0), (0.5, 3.3), (0.9, -7.2)] {
        let expected = f(t) * C64::cis((p.d() * w * w + p.omega_cap() * w) / (2.0 * b)) / (2.0 * PI * b).sqrt();
        assert!((zak(&p, &f, t, w, 16).unwrap() - expected).norm() < 1e-14);
    }
}

#[test]
fn zak_modulus_is_periodic_and_factor_is_exact() {
    let p = experiment();
    let mut r = rng(11);
    for _ in 0..20 {
        let (t, w) = (r.random_range(0.0..1.0), r.random_range(0.0..p.delta()));
        let z = zak(&p, &chirped_gaussian, t, w, 64).unwrap();
        let zs = zak(&p, &chirped_gaussian, t, w + p.delta(), 64).unwrap();
        assert!((zs.norm() - z.norm()).abs() < 1e-12);
        let fac = zak_quasiperiod_factor(&p, w).unwrap();
        assert!((fac.norm() - 1.0).abs() < 1e-15);
        assert!((zs - fac * z).norm() < 1e-10);
    }
    let ft = preset("ft", &[]).unwrap();
    assert!((zak_quasiperiod_factor(&ft, 1.7).unwrap() - 1.0).norm() < 1e-15);
}

#[test]
fn zak_requires_positive_b() {
    let p = SaftParams::new(0.0, -1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
    assert!(matches!(zak(&p, &gaussian, 0.0, 0.0, 8), Err(SaftError::NegativeB(_))));
    assert!(matches!(zak_quasiperiod_factor(&p, 0.0), Err(SaftError::NegativeB(_))));
    assert!(zak_isometry_residual(&p, &gaussian, 1.0, 8, 8, 8).is_err());
}

#[test]
fn zak_truncation_converges_for_gaussian_decay() {
    let v = zak_converged(&experiment(), &gaussian, 0.4, 2.0).unwrap();
    assert!(v.converged);
    assert_eq!(v.truncation, 128);
}

#[test]
fn isometry_for_gaussian_and_zero() {
    let p = experiment();
    let check = zak_isometry_residual(&p, &gaussian, PI.sqrt(), 64, 128, 128).unwrap();
    assert!(check.residual < 1e-3);
    let zero = |_: f64| C64::new(0.0, 0.0);
    let z = zak_isometry_residual(&p, &zero, 0.0, 64, 16, 16).unwrap();
    assert_eq!((z.zak_energy, z.residual), (0.0, 0.0));
}

#[test]
fn isometry_residual_shrinks_as_grid_refines() {
    let p = experiment();
    let wide = |t: f64| C64::new((-t * t / 50.0).exp(), 0.0);
    let energy = (50.0 * PI).sqrt() / 2.0_f64.sqrt();
    let res: Vec<f64> = [8, 16, 32, 64]
        .iter()
        .map(|&n| zak_isometry_residual(&p, &wide, energy, 64, n, n).unwrap().residual)
        .collect();
    for w in res.windows(2) {
        assert!(w[1] <= w[0] + 1e-14, "{res:?}");
    }
    assert!(res[3] < 1e-10, "{res:?}");
}

#[test]
fn isometry_for_sampled_signal() {
    let f = sampled(gaussian, grid(12.0, 4096));
    let c = zak_isometry_residual_signal(&experiment(), &f, 64, 64, 64).unwrap();
    assert!(c.residual < 1e-3, "{}", c.residual);
}

#[test]
fn zak_at_origin_is_transform_of_integer_samples() {
    let p = experiment();
    let seq = SampleSeq::from_fn(-3, 3, |k| bump(k as f64));
    for i in 0..16 {
        let w = i as f64 * 0.7 - 3.0;
        let z = zak(&p, &bump, 0.0, w, 64).unwrap();
        assert!((z - dtsaft(&p, &seq, w)).norm() < 1e-10);
    }
    // Energy over one period equals the sample energy.
    let n = 256;
    let h = p.delta() / n as f64;
    let e: f64 = (0..n).map(|i| zak(&p, &bump, 0.0, i as f64 * h, 64).unwrap().norm_sqr()).sum::<f64>() * h;
    assert!((e - seq.energy()).abs() < 1e-6 * seq.energy());
}

#[test]
fn poisson_summation_for_chirped_gaussian() {
    let p = experiment();
    let f = sampled(chirped_gaussian, grid(12.0, 4096));
    let f_int = integer_spectrum(&p, &f, 64);
    assert_eq!(f_int.offset(), -64);
    let ts: Vec<f64> = (0..64).map(|i| i as f64 * p.delta() / 64.0).collect();
    assert!(poisson_residual(&p, &chirped_gaussian, &f_int, &ts, 64).unwrap() < 1e-3);
    let zero = |_: f64| C64::new(0.0, 0.0);
    assert_eq!(poisson_residual(&p, &zero, &SampleSeq::zeros(-2, 5), &ts, 8).unwrap(), 0.0);
}

#[test]
fn poisson_lhs_of_interpolating_spectrum() {
    // Triangle spectrum vanishing at every nonzero integer frequency.
    let p = experiment();
    let b = p.b();
    let (height, half_width) = ((2.0 * PI * b).sqrt(), 1.0 / b);
    let u = move |t: f64| height * half_width / (2.0 * PI) * sinc_u(half_width * t / 2.0).powi(2);
    let f = move |t: f64| zeta(&p, t).conj() * u(t);
    let time_sum_target = 1.0 / (2.0 * PI * b).sqrt();
    for &t in &[0.0, 1.3, 5.0, 11.0] {
        let lhs = poisson_lhs(&p, &f, t, 4000).unwrap();
        assert!((lhs / (2.0 * PI * b).sqrt() - time_sum_target).norm() < 1e-3 * time_sum_target);
        assert!((lhs - 1.0).norm() < 1e-3);
    }
    let ts: Vec<f64> = (0..16).map(|i| i as f64 * p.delta() / 16.0).collect();
    assert!(poisson_residual(&p, &f, &SampleSeq::impulse(0), &ts, 4000).unwrap() < 1e-3);
}

#[test]
fn bandlimited_energy_with_half_band() {
    let p = experiment();
    let spacing = p.delta();
    let mut r = rng(13);
    let coeffs = random_coeffs(&mut r, -4, 4);
    let g = UniformGrid::new(-100.0 * spacing, spacing / 4.0, 801).unwrap();
    let sampled_g = synthesize(&p, &coeffs, spacing, &g);
    let exact = |t: f64| saft_core::sampling::synthesize_at(&p, &coeffs, spacing, t);
    let e = bandlimited_energy_residual(&p, &exact, &sampled_g, 128).unwrap();
    assert!(e.residual < 1e-2, "{e:?}");
    assert!((e.sample_energy - coeffs.energy()).abs() < 1e-12 * coeffs.energy());

    let one = SampleSeq::impulse(0);
    let atom = synthesize(&p, &one, spacing, &g);
    let at = |t: f64| saft_core::sampling::synthesize_at(&p, &one, spacing, t);
    let e1 = bandlimited_energy_residual(&p, &at, &atom, 128).unwrap();
    assert!((e1.sample_energy - 1.0).abs() < 1e-12 && (e1.spectral_energy - 1.0).abs() < 1e-2, "{e1:?}");

    let zero = |_: f64| C64::new(0.0, 0.0);
    let z = bandlimited_energy_residual(&p, &zero, &saft_core::Signal::zeros(g), 8).unwrap();
    assert_eq!(z.residual, 0.0);
}

#[test]
fn bandlimited_energy_with_full_printed_band_does_not_balance() {
    // Band (-1, 1): the lattice k Delta keeps only every other sample.
    let p = experiment();
    let spacing = p.delta() / 2.0;
    let coeffs = SampleSeq::new(0, vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
    let g = UniformGrid::new(-200.0 * spacing, spacing / 4.0, 1601).unwrap();
    let sampled_g = synthesize(&p, &coeffs, spacing, &g);
    let exact = |t: f64| saft_core::sampling::synthesize_at(&p, &coeffs, spacing, t);
    let e = bandlimited_energy_residual(&p, &exact, &sampled_g, 128).unwrap();
    assert!(e.residual > 0.5, "{e:?}");
}
