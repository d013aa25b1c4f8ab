//! Convolution, sequence transforms, Grammians and Riesz bounds.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SaftError};
use crate::params::SaftParams;
use crate::signal::{chirp, chirp_dn, chirp_up, l2_norm, SampleSeq, Signal, Spectrum, UniformGrid};
use crate::transform::forward;

/// Unit-modulus frequency factor `exp((j/2b)(d w^2 + Omega w))` that the
/// convolution theorem leaves behind.
#[derive(Clone, Copy, Debug)]
pub struct EtaFactor {
    pub params: SaftParams,
}

impl EtaFactor {
    pub fn eval(&self, w: f64) -> C64 {
        eta(&self.params, w)
    }
}

#[inline]
pub fn eta(params: &SaftParams, w: f64) -> C64 {
    C64::cis((params.d() * w * w + params.omega_cap() * w) / (2.0 * params.b()))
}

/// `(f * g)(t) = 1/sqrt(2 pi) * integral f(t - x) g(x) dx` as a discrete sum.
/// The output grid starts at `f.t0 + g.t0` and has `nf + ng - 1` points.
pub fn std_convolve(f: &Signal, g: &Signal) -> Result<Signal> {
    let (gf, gg) = (f.grid(), g.grid());
    if (gf.dt() - gg.dt()).abs() > 1e-12 * gf.dt() {
        return Err(SaftError::GridMismatch(format!(
            "convolution needs a shared step, got {} and {}",
            gf.dt(),
            gg.dt()
        )));
    }
    let (nf, ng) = (gf.n(), gg.n());
    let out = UniformGrid::new(gf.t0() + gg.t0(), gf.dt(), nf + ng - 1)?;
    let (fv, gv) = (f.values(), g.values());
    let scale = gf.dt() / (2.0 * PI).sqrt();
    let values: Vec<C64> = (0..out.n())
        .into_par_iter()
        .map(|i| {
            let lo = i.saturating_sub(nf - 1);
            let hi = i.min(ng - 1);
            let mut acc = C64::new(0.0, 0.0);
            for j in lo..=hi {
                acc += fv[i - j] * gv[j];
            }
            acc * scale
        })
        .collect();
    Ok(Signal::from_parts(out, values))
}

/// `(f *_A g)(t) = conj(L(t))/sqrt|b| * (L f * L g)(t)` with the chirp
/// `L(t) = exp(j a t^2 / 2b)`.
pub fn saft_convolve(params: &SaftParams, f: &Signal, g: &Signal) -> Result<Signal> {
    let h = std_convolve(&chirp_up(params, f), &chirp_up(params, g))?;
    let s = 1.0 / params.b().abs().sqrt();
    Ok(chirp_dn(params, &h.scale(C64::new(s, 0.0))))
}

/// Relative mismatch between the transform of `f *_A g` and
/// `conj(eta) F G` on `omega`.
pub fn convolution_theorem_residual(
    params: &SaftParams,
    f: &Signal,
    g: &Signal,
    omega: &UniformGrid,
) -> Result<f64> {
    let h = saft_convolve(params, f, g)?;
    let hh = forward(params, &h, omega);
    let ff = forward(params, f, omega);
    let gg = forward(params, g, omega);
    let rhs = Spectrum::from_parts(
        *omega,
        omega
            .points()
            .enumerate()
            .map(|(i, w)| eta(params, w).conj() * ff.values()[i] * gg.values()[i])
            .collect(),
    );
    let denom = l2_norm(&rhs);
    if denom == 0.0 {
        return Err(SaftError::DivisionByZeroNorm);
    }
    let diff = hh.axpy(C64::new(-1.0, 0.0), &rhs)?;
    Ok(l2_norm(&diff) / denom)
}

/// Transform of a finite sequence:
/// `1/sqrt(2 pi |b|) sum_k P(k) exp{(j/2b)(a k^2 + d w^2 - 2 w k + Omega w + 2 p k)}`.
pub fn dtsaft(params: &SaftParams, seq: &SampleSeq, w: f64) -> C64 {
    let b = params.b();
    let mut acc = C64::new(0.0, 0.0);
    for (k, v) in seq.iter() {
        let k = k as f64;
        acc += v * C64::cis((params.a() * k * k + 2.0 * params.p() * k - 2.0 * w * k) / (2.0 * b));
    }
    acc * eta(params, w) / (2.0 * PI * b.abs()).sqrt()
}

pub fn dtsaft_grid(params: &SaftParams, seq: &SampleSeq, omega: &UniformGrid) -> Spectrum {
    let values = (0..omega.n())
        .into_par_iter()
        .map(|i| dtsaft(params, seq, omega.point(i)))
        .collect();
    Spectrum::from_parts(*omega, values)
}

/// `integral over one period |Delta| of |dtsaft|^2` by the periodic
/// trapezoid rule on `n` points. The integrand is a trigonometric
/// polynomial, so the rule is exact once `n` exceeds the support length.
pub fn dtsaft_energy(params: &SaftParams, seq: &SampleSeq, n: usize) -> f64 {
    let period = params.delta().abs();
    let h = period / n as f64;
    let total: f64 = (0..n)
        .into_par_iter()
        .map(|i| dtsaft(params, seq, i as f64 * h).norm_sqr())
        .collect::<Vec<_>>()
        .iter()
        .sum();
    total * h
}

/// Semi-discrete convolution of a sequence with a function:
/// `1/sqrt(2 pi |b|) conj(L(t)) sum_k L(k) P(k) L(t - k) phi(t - k)`.
pub fn semidiscrete(
    params: &SaftParams,
    seq: &SampleSeq,
    phi: &(dyn Fn(f64) -> C64 + Sync),
    tgrid: &UniformGrid,
) -> Signal {
    let norm = (2.0 * PI * params.b().abs()).sqrt();
    let weighted: Vec<(f64, C64)> = seq
        .iter()
        .map(|(k, v)| (k as f64, v * chirp(params, k as f64)))
        .collect();
    let values = (0..tgrid.n())
        .into_par_iter()
        .map(|i| {
            let t = tgrid.point(i);
            let mut acc = C64::new(0.0, 0.0);
            for &(k, v) in &weighted {
                acc += v * chirp(params, t - k) * phi(t - k);
            }
            acc * chirp(params, t).conj() / norm
        })
        .collect();
    Signal::from_parts(*tgrid, values)
}

/// `sum_{|k| <= K} |Phi(w + k Delta)|^2`.
pub fn grammian(params: &SaftParams, spectrum: &dyn Fn(f64) -> C64, w: f64, k_max: usize) -> f64 {
    let delta = params.delta();
    let k_max = k_max as i64;
    (-k_max..=k_max)
        .map(|k| spectrum(w + k as f64 * delta).norm_sqr())
        .sum()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GrammianProfile {
    pub omega: f64,
    pub value: f64,
    pub truncation: usize,
    pub converged: bool,
}

/// Grammian with the truncation doubled from 64 until successive values
/// differ by less than 1e-10 (cap 4096).
///
/// Only meaningful for closed-form spectra; a spectrum computed by quadrature
/// on a grid of step `dt` is itself periodic with period `2 pi |b| / dt` and
/// must be summed at a fixed truncation.
pub fn grammian_converged(params: &SaftParams, spectrum: &dyn Fn(f64) -> C64, w: f64) -> GrammianProfile {
    let mut k = 64;
    let mut prev = grammian(params, spectrum, w, k);
    loop {
        let next = grammian(params, spectrum, w, 2 * k);
        k *= 2;
        let converged = (next - prev).abs() < 1e-10;
        if converged || k >= 4096 {
            return GrammianProfile {
                omega: w,
                value: next,
                truncation: k,
                converged,
            };
        }
        prev = next;
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RieszBounds {
    pub eta1: f64,
    pub eta2: f64,
    pub argmin: f64,
    pub argmax: f64,
}

/// Lower and upper bounds of the Grammian over `sweep_n` equispaced
/// frequencies in one period.
pub fn riesz_bounds(
    params: &SaftParams,
    spectrum: &(dyn Fn(f64) -> C64 + Sync),
    k_max: usize,
    sweep_n: usize,
) -> Result<RieszBounds> {
    if sweep_n < 16 {
        return Err(SaftError::InvalidArgument(format!("sweep_n = {sweep_n} < 16")));
    }
    let h = params.delta().abs() / sweep_n as f64;
    let values: Vec<f64> = (0..sweep_n)
        .into_par_iter()
        .map(|i| grammian(params, spectrum, i as f64 * h, k_max))
        .collect();
    let (mut imin, mut imax) = (0, 0);
    for (i, &v) in values.iter().enumerate() {
        if v < values[imin] {
            imin = i;
        }
        if v > values[imax] {
            imax = i;
        }
    }
    let eta1 = values[imin];
    if !(eta1 >= 1e-12) {
        return Err(SaftError::DegenerateGenerator(eta1));
    }
    Ok(RieszBounds {
        eta1,
        eta2: values[imax],
        argmin: imin as f64 * h,
        argmax: imax as f64 * h,
    })
}
