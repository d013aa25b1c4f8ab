//! Forward and inverse transform by trapezoid quadrature.
//!
//! Integrals over the real line are truncated to the input grid; inputs are
//! assumed negligible outside it.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::params::SaftParams;
use crate::signal::{trapezoid_weight, Sampled, Signal, Spectrum, Summation, UniformGrid, Axis};

/// Kernel of the transform for a fixed parameter set.
#[derive(Clone, Copy, Debug)]
pub struct KernelSpec {
    pub params: SaftParams,
}

impl KernelSpec {
    pub fn eval(&self, t: f64, w: f64) -> C64 {
        kernel(&self.params, t, w)
    }
}

/// `exp{(j/2b)(a t^2 + d w^2 - 2 t w + 2 p t + 2(bq - dp) w)} / sqrt(2 pi |b|)`.
pub fn kernel(params: &SaftParams, t: f64, w: f64) -> C64 {
    let (a, b, d, p) = (params.a(), params.b(), params.d(), params.p());
    let phase = (a * t * t + d * w * w - 2.0 * t * w + 2.0 * p * t + params.omega_cap() * w) / (2.0 * b);
    C64::cis(phase) / norm(params)
}

#[inline]
fn norm(params: &SaftParams) -> f64 {
    (2.0 * PI * params.b().abs()).sqrt()
}

/// Default frequency grid for transforming `f`: the DFT-dual grid.
pub fn default_omega_grid(params: &SaftParams, tgrid: &UniformGrid) -> UniformGrid {
    tgrid.dual(params.b())
}

// Shared quadrature: out(y) = pre(y) * sum_i u_i exp(-j sign x_i y / b),
// with the x-only phase folded into u_i.
fn quadrature<A: Axis, B: Axis>(
    input: &Sampled<A>,
    out: &UniformGrid,
    b: f64,
    conj: bool,
    x_phase: impl Fn(f64) -> f64 + Sync,
    y_phase: impl Fn(f64) -> f64 + Sync,
    mode: Summation,
) -> Sampled<B> {
    let g = *input.grid();
    let n = g.n();
    let sign = if conj { -1.0 } else { 1.0 };
    let xs: Vec<f64> = g.points().collect();
    let u: Vec<C64> = input
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| v * trapezoid_weight(i, n) * C64::cis(sign * x_phase(xs[i])))
        .collect();
    let scale = g.dt() / (2.0 * PI * b.abs()).sqrt();
    let values: Vec<C64> = (0..out.n())
        .into_par_iter()
        .map(|j| {
            let y = out.point(j);
            let acc = crate::signal::sum(n, mode, |i| u[i] * C64::cis(-sign * xs[i] * y / b));
            acc * C64::cis(sign * y_phase(y)) * scale
        })
        .collect();
    Sampled::from_parts(*out, values)
}

/// Transform of `f` evaluated on `omega`.
pub fn forward(params: &SaftParams, f: &Signal, omega: &UniformGrid) -> Spectrum {
    forward_with(params, f, omega, Summation::Sequential)
}

pub fn forward_with(params: &SaftParams, f: &Signal, omega: &UniformGrid, mode: Summation) -> Spectrum {
    let (a, b, d, p, oc) = (params.a(), params.b(), params.d(), params.p(), params.omega_cap());
    quadrature(
        f,
        omega,
        b,
        false,
        |t| (a * t * t + 2.0 * p * t) / (2.0 * b),
        |w| (d * w * w + oc * w) / (2.0 * b),
        mode,
    )
}

/// Single-frequency transform value.
pub fn forward_at(params: &SaftParams, f: &Signal, w: f64) -> C64 {
    let g = f.grid();
    let n = g.n();
    crate::signal::sum(n, Summation::Sequential, |i| {
        kernel(params, g.point(i), w) * f.values()[i] * trapezoid_weight(i, n)
    }) * g.dt()
}

/// Inverse transform of `spec` evaluated on `tgrid` (conjugate kernel,
/// integrated over frequency).
pub fn inverse(params: &SaftParams, spec: &Spectrum, tgrid: &UniformGrid) -> Signal {
    inverse_with(params, spec, tgrid, Summation::Sequential)
}

pub fn inverse_with(params: &SaftParams, spec: &Spectrum, tgrid: &UniformGrid, mode: Summation) -> Signal {
    let (a, b, d, p, oc) = (params.a(), params.b(), params.d(), params.p(), params.omega_cap());
    quadrature(
        spec,
        tgrid,
        b,
        true,
        |w| (d * w * w + oc * w) / (2.0 * b),
        |t| (a * t * t + 2.0 * p * t) / (2.0 * b),
        mode,
    )
}
