//! Shared test signals and parameter sets.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use saft_core::params::preset;
use saft_core::{SaftParams, Signal, UniformGrid};

/// Presets exercised by the transform checks.
pub fn battery() -> Vec<(&'static str, SaftParams)> {
    vec![
        ("ft", preset("ft", &[]).unwrap()),
        ("frft(1.0)", preset("frft", &[1.0]).unwrap()),
        ("lct(2,1,3,2)", preset("lct", &[2.0, 1.0, 3.0, 2.0]).unwrap()),
        ("experiment", preset("experiment", &[]).unwrap()),
    ]
}

pub fn experiment() -> SaftParams {
    preset("experiment", &[]).unwrap()
}

/// `exp(-(t - 0.3)^2 / 2) exp(j 0.4 t^2)`.
pub fn chirped_gaussian(t: f64) -> C64 {
    C64::cis(0.4 * t * t) * (-(t - 0.3).powi(2) / 2.0).exp()
}

/// `exp(-(t + 0.5)^2 / (2 * 0.8^2)) exp(-j 0.3 t^2)`.
pub fn second_gaussian(t: f64) -> C64 {
    C64::cis(-0.3 * t * t) * (-(t + 0.5).powi(2) / (2.0 * 0.64)).exp()
}

pub fn gaussian(t: f64) -> C64 {
    C64::new((-t * t / 2.0).exp(), 0.0)
}

/// `n` points covering `[-half, half)`.
pub fn grid(half: f64, n: usize) -> UniformGrid {
    UniformGrid::new(-half, 2.0 * half / n as f64, n).unwrap()
}

pub fn sampled(f: impl Fn(f64) -> C64, g: UniformGrid) -> Signal {
    Signal::from_fn(g, f)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut StdRng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random parameters with `ad - bc = 1` up to rounding and `|b| >= 0.2`.
pub fn random_params(rng: &mut StdRng) -> SaftParams {
    loop {
        let a: f64 = rng.random_range(-3.0..3.0);
        let b: f64 = rng.random_range(-3.0..3.0);
        let c: f64 = rng.random_range(-3.0..3.0);
        if b.abs() < 0.2 {
            continue;
        }
        let d = (1.0 + b * c) / a;
        if a.abs() < 0.2 || !d.is_finite() || d.abs() > 20.0 {
            continue;
        }
        let p = rng.random_range(-2.0..2.0);
        let q = rng.random_range(-2.0..2.0);
        if let Ok(v) = SaftParams::new(a, b, c, d, p, q) {
            return v;
        }
    }
}

pub fn max_abs_diff(x: &[C64], y: &[C64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

pub fn max_abs(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Random coefficients on `first..=last`.
pub fn random_coeffs(rng: &mut StdRng, first: i64, last: i64) -> saft_core::SampleSeq {
    let values = (first..=last).map(|_| random_complex(rng)).collect();
    saft_core::SampleSeq::new(first, values)
}
