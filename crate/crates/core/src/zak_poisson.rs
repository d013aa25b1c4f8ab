//! Zak transform, Poisson summation and the bandlimited energy identity.
//! All of these use `sqrt(2 pi b)` and are defined for `b > 0` only.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::convolution::eta;
use crate::error::{Result, SaftError};
use crate::params::SaftParams;
use crate::signal::{l2_norm, zeta, SampleSeq, Signal};
use crate::transform::{default_omega_grid, forward, forward_at};

fn require_positive_b(params: &SaftParams) -> Result<f64> {
    let b = params.b();
    if b > 0.0 {
        Ok(b)
    } else {
        Err(SaftError::NegativeB(b))
    }
}

/// Truncated Zak sum
/// `1/sqrt(2 pi b) sum_{|k|<=K} f(t+k) exp{(j/2b)(d w^2 + a k^2 - 2 k w + Omega w + 2 p k)}`.
pub fn zak(params: &SaftParams, f: &dyn Fn(f64) -> C64, t: f64, w: f64, k_max: usize) -> Result<C64> {
    let b = require_positive_b(params)?;
    let k_max = k_max as i64;
    let mut acc = C64::new(0.0, 0.0);
    for k in -k_max..=k_max {
        let kf = k as f64;
        let v = f(t + kf);
        if v != C64::new(0.0, 0.0) {
            acc += v * C64::cis((params.a() * kf * kf - 2.0 * kf * w + 2.0 * params.p() * kf) / (2.0 * b));
        }
    }
    Ok(acc * eta(params, w) / (2.0 * PI * b).sqrt())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZakValue {
    pub t: f64,
    pub omega: f64,
    pub value: C64,
    pub truncation: usize,
    pub converged: bool,
}

/// Zak value with the truncation doubled from 64 until the change is
/// below 1e-10 (cap 4096).
pub fn zak_converged(params: &SaftParams, f: &dyn Fn(f64) -> C64, t: f64, w: f64) -> Result<ZakValue> {
    let mut k = 64;
    let mut prev = zak(params, f, t, w, k)?;
    loop {
        let next = zak(params, f, t, w, 2 * k)?;
        k *= 2;
        let converged = (next - prev).norm() < 1e-10;
        if converged || k >= 4096 {
            return Ok(ZakValue {
                t,
                omega: w,
                value: next,
                truncation: k,
                converged,
            });
        }
        prev = next;
    }
}

/// `Z(t, w + Delta) = factor(w) Z(t, w)`.
pub fn zak_quasiperiod_factor(params: &SaftParams, w: f64) -> Result<C64> {
    let b = require_positive_b(params)?;
    let delta = params.delta();
    Ok(C64::cis(
        delta / (2.0 * b) * (params.d() * delta + 2.0 * params.d() * w + params.omega_cap()),
    ))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IsometryCheck {
    /// `integral over [0,1] x [0,Delta] of |Z|^2`.
    pub zak_energy: f64,
    pub signal_energy: f64,
    pub residual: f64,
}

/// Energy of the Zak transform over the fundamental cell against `||f||^2`.
///
/// Both integrands are periodic on the cell (`|Z|^2` in `w`, and its
/// `w`-integral in `t`), so the periodic rectangle rule is used on an
/// `nt x nw` grid.
pub fn zak_isometry_residual(
    params: &SaftParams,
    f: &(dyn Fn(f64) -> C64 + Sync),
    signal_energy: f64,
    k_max: usize,
    nt: usize,
    nw: usize,
) -> Result<IsometryCheck> {
    require_positive_b(params)?;
    if nt == 0 || nw == 0 {
        return Err(SaftError::EmptyGrid);
    }
    let delta = params.delta();
    let (ht, hw) = (1.0 / nt as f64, delta / nw as f64);
    let rows: Vec<f64> = (0..nt)
        .into_par_iter()
        .map(|i| {
            let t = i as f64 * ht;
            let mut acc = 0.0;
            for j in 0..nw {
                acc += zak(params, f, t, j as f64 * hw, k_max).expect("b checked above").norm_sqr();
            }
            acc
        })
        .collect();
    let zak_energy = rows.iter().sum::<f64>() * ht * hw;
    let residual = if signal_energy == 0.0 {
        if zak_energy == 0.0 {
            0.0
        } else {
            return Err(SaftError::DivisionByZeroNorm);
        }
    } else {
        (zak_energy - signal_energy).abs() / signal_energy
    };
    Ok(IsometryCheck {
        zak_energy,
        signal_energy,
        residual,
    })
}

/// Same check for a sampled signal (interpolated between grid points).
pub fn zak_isometry_residual_signal(
    params: &SaftParams,
    f: &Signal,
    k_max: usize,
    nt: usize,
    nw: usize,
) -> Result<IsometryCheck> {
    let energy = l2_norm(f).powi(2);
    zak_isometry_residual(params, &|t| f.interpolate(t), energy, k_max, nt, nw)
}

/// Transform values at the integers `|n| <= K`.
pub fn integer_spectrum(params: &SaftParams, f: &Signal, k_max: usize) -> SampleSeq {
    let k = k_max as i64;
    let values = (-k..=k)
        .into_par_iter()
        .map(|n| forward_at(params, f, n as f64))
        .collect();
    SampleSeq::new(-k, values)
}

/// Time side: `sqrt(2 pi b) sum_{|k|<=K} f(t + k Delta) zeta(t + k Delta)`.
pub fn poisson_lhs(params: &SaftParams, f: &dyn Fn(f64) -> C64, t: f64, k_max: usize) -> Result<C64> {
    let b = require_positive_b(params)?;
    let delta = params.delta();
    let k_max = k_max as i64;
    let mut acc = C64::new(0.0, 0.0);
    for k in -k_max..=k_max {
        let x = t + k as f64 * delta;
        acc += f(x) * zeta(params, x);
    }
    Ok(acc * (2.0 * PI * b).sqrt())
}

/// Frequency side: `sum_n exp{(-j/2b)(d n^2 + Omega n - 2 n t)} F(n)`.
pub fn poisson_rhs(params: &SaftParams, f_int: &SampleSeq, t: f64) -> C64 {
    let b = params.b();
    let mut acc = C64::new(0.0, 0.0);
    for (n, v) in f_int.iter() {
        let n = n as f64;
        acc += v * C64::cis(-(params.d() * n * n + params.omega_cap() * n - 2.0 * n * t) / (2.0 * b));
    }
    acc
}

/// `max_t |LHS - RHS| / max_t |RHS|` over `tgrid`.
pub fn poisson_residual(
    params: &SaftParams,
    f: &(dyn Fn(f64) -> C64 + Sync),
    f_int: &SampleSeq,
    tgrid: &[f64],
    k_max: usize,
) -> Result<f64> {
    require_positive_b(params)?;
    let pairs: Vec<(C64, C64)> = tgrid
        .par_iter()
        .map(|&t| {
            let l = poisson_lhs(params, f, t, k_max).expect("b checked above");
            (l, poisson_rhs(params, f_int, t))
        })
        .collect();
    let err = pairs.iter().map(|(l, r)| (l - r).norm()).fold(0.0, f64::max);
    let scale = pairs.iter().map(|(_, r)| r.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return if err == 0.0 { Ok(0.0) } else { Err(SaftError::DivisionByZeroNorm) };
    }
    Ok(err / scale)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BandEnergy {
    /// `sum_{|k|<=K} |g(k Delta)|^2`.
    pub sample_energy: f64,
    /// `1/(2 pi b) integral |G(w)|^2 dw`.
    pub spectral_energy: f64,
    pub residual: f64,
}

/// Compares the energy of the samples `g(k Delta)` with the scaled spectral
/// energy. `g` gives exact point values; `sampled` is the same function on a
/// grid wide enough for its transform, which is evaluated on the dual grid.
///
/// The identity is exact when `g` is bandlimited to `(-1/2, 1/2)` in the
/// transform domain, since `k Delta` is then the critical sampling lattice.
pub fn bandlimited_energy_residual(
    params: &SaftParams,
    g: &dyn Fn(f64) -> C64,
    sampled: &Signal,
    k_max: usize,
) -> Result<BandEnergy> {
    let b = require_positive_b(params)?;
    let delta = params.delta();
    let k_max = k_max as i64;
    let sample_energy: f64 = (-k_max..=k_max).map(|k| g(k as f64 * delta).norm_sqr()).sum();
    let spec = forward(params, sampled, &default_omega_grid(params, sampled.grid()));
    let spectral_energy = l2_norm(&spec).powi(2) / (2.0 * PI * b);
    let residual = if spectral_energy == 0.0 {
        if sample_energy == 0.0 {
            0.0
        } else {
            return Err(SaftError::DivisionByZeroNorm);
        }
    } else {
        (sample_energy - spectral_energy).abs() / spectral_energy
    };
    Ok(BandEnergy {
        sample_energy,
        spectral_energy,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::preset;

    #[test]
    fn negative_b_is_rejected() {
        let p = SaftParams::new(0.0, -1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        let f = |_: f64| C64::new(1.0, 0.0);
        assert!(matches!(zak(&p, &f, 0.0, 0.0, 4), Err(SaftError::NegativeB(_))));
        assert!(matches!(zak_quasiperiod_factor(&p, 0.0), Err(SaftError::NegativeB(_))));
        assert!(poisson_lhs(&p, &f, 0.0, 2).is_err());
    }

    #[test]
    fn quasiperiod_factor_trivial_case() {
        let p = preset("frft", &[std::f64::consts::FRAC_PI_2]).unwrap();
        // d = cos(pi/2) is only zero to rounding, hence the tolerance.
        assert!((zak_quasiperiod_factor(&p, 1.3).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-14);
    }
}
