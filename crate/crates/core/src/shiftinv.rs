//! Shift-invariant reconstruction with arbitrary generators and fractional
//! delay filtering.
//!
//! On the lattice `kT` a signal is modelled as
//!
//! ```text
//! f(t) = conj(zeta(t)) sum_k p[k] zeta(kT) nu(t/T - k)
//! ```
//!
//! Demodulating the samples, `zeta(mT) f(mT) = sum_k q[k] nu(m - k)` with
//! `q[k] = zeta(kT) p[k]`, so the weights follow from one discrete
//! convolution with the inverse filter of the integer samples `nu(k)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::convolution::eta;
use crate::error::{Result, SaftError};
use crate::params::SaftParams;
use crate::signal::{zeta, SampleSeq, Signal, UniformGrid};
use crate::special::{sinc, sinc_u};

/// `(2/3) cos^4(pi t / 4)` on `[-2, 2]`, zero elsewhere.
pub fn power_cosine(t: f64) -> f64 {
    if t.abs() > 2.0 {
        0.0
    } else {
        (2.0 / 3.0) * (PI * t / 4.0).cos().powi(4)
    }
}

/// Expansion weights `4 / ((2+k)! (2-k)!)` for `k = -2..=2`.
pub const POWER_COSINE_RHO: [f64; 5] = [1.0 / 6.0, 2.0 / 3.0, 1.0, 2.0 / 3.0, 1.0 / 6.0];

/// `integral nu(t) exp(-j xi t) dt = sum_k rho_k sin(2 xi - k pi)/(2 xi - k pi)`.
pub fn power_cosine_fourier(xi: f64) -> f64 {
    POWER_COSINE_RHO
        .iter()
        .enumerate()
        .map(|(i, r)| r * sinc_u(2.0 * xi - (i as f64 - 2.0) * PI))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GeneratorKind {
    PowerCosine,
    /// Sinc cut to `|t| <= half_width`; `None` keeps every term.
    Sinc { half_width: Option<usize> },
    Custom,
}

type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Real generator profile with its support and integer samples.
#[derive(Clone)]
pub struct Generator {
    name: String,
    kind: GeneratorKind,
    support: (f64, f64),
    profile: Profile,
    integer_samples: SampleSeq,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("support", &self.support)
            .finish()
    }
}

impl Generator {
    pub fn power_cosine() -> Self {
        Generator {
            name: "power-cosine".into(),
            kind: GeneratorKind::PowerCosine,
            support: (-2.0, 2.0),
            profile: Arc::new(power_cosine),
            integer_samples: SampleSeq::from_fn(-2, 2, |k| C64::new(power_cosine(k as f64), 0.0)),
        }
    }

    /// Sinc truncated to `|t| <= half_width` lattice steps, or the full
    /// series when `None`.
    pub fn sinc(half_width: Option<usize>) -> Self {
        let (name, support, profile): (String, (f64, f64), Profile) = match half_width {
            Some(h) => {
                let h = h as f64;
                (
                    format!("sinc-{}", h),
                    (-h, h),
                    Arc::new(move |t: f64| if t.abs() > h { 0.0 } else { sinc(t) }),
                )
            }
            None => (
                "sinc".into(),
                (f64::NEG_INFINITY, f64::INFINITY),
                Arc::new(sinc),
            ),
        };
        Generator {
            name,
            kind: GeneratorKind::Sinc { half_width },
            support,
            profile,
            integer_samples: SampleSeq::impulse(0),
        }
    }

    /// Generator from a profile with finite support `[lo, hi]`.
    pub fn custom(
        name: &str,
        support: (f64, f64),
        profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let (lo, hi) = support;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(SaftError::InvalidArgument(format!(
                "generator support [{lo}, {hi}] must be finite"
            )));
        }
        let profile: Profile = Arc::new(move |t| if t < lo || t > hi { 0.0 } else { profile(t) });
        let (k0, k1) = (lo.ceil() as i64, hi.floor() as i64);
        let integer_samples = if k0 <= k1 {
            SampleSeq::from_fn(k0, k1, |k| C64::new(profile(k as f64), 0.0))
        } else {
            SampleSeq::new(0, Vec::new())
        };
        Ok(Generator {
            name: name.to_string(),
            kind: GeneratorKind::Custom,
            support,
            profile,
            integer_samples,
        })
    }

    /// `power-cosine`, `sinc` (half-width 64), `sinc:N` or `sinc:full`.
    pub fn by_name(spec: &str) -> Result<Self> {
        let spec = spec.trim().to_ascii_lowercase();
        match spec.split_once(':') {
            None if spec == "power-cosine" => Ok(Self::power_cosine()),
            None if spec == "sinc" => Ok(Self::sinc(Some(DEFAULT_SINC_HALF_WIDTH))),
            Some(("sinc", "full")) => Ok(Self::sinc(None)),
            Some(("sinc", h)) => h
                .parse::<usize>()
                .map(|h| Self::sinc(Some(h)))
                .map_err(|_| SaftError::InvalidArgument(format!("bad sinc half-width `{h}`"))),
            _ => Err(SaftError::InvalidArgument(format!("unknown generator `{spec}`"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }
    pub fn support(&self) -> (f64, f64) {
        self.support
    }
    pub fn integer_samples(&self) -> &SampleSeq {
        &self.integer_samples
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.profile)(t)
    }

    /// Largest distance from the origin covered by the support.
    pub fn half_support(&self) -> f64 {
        self.support.0.abs().max(self.support.1.abs())
    }

    /// `integral nu(t) exp(-j xi t) dt`. Closed forms for power-cosine and the
    /// full sinc, trapezoid quadrature (64 points per unit) otherwise.
    pub fn fourier(&self, xi: f64) -> C64 {
        match self.kind {
            GeneratorKind::PowerCosine => C64::new(power_cosine_fourier(xi), 0.0),
            GeneratorKind::Sinc { half_width: None } => {
                let v = if xi.abs() < PI {
                    1.0
                } else if xi.abs() == PI {
                    0.5
                } else {
                    0.0
                };
                C64::new(v, 0.0)
            }
            _ => {
                let (lo, hi) = self.support;
                let n = (((hi - lo) * 64.0).ceil() as usize).max(2) + 1;
                let h = (hi - lo) / (n - 1) as f64;
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..n {
                    let t = lo + i as f64 * h;
                    let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                    acc += C64::cis(-xi * t) * (self.eval(t) * w);
                }
                acc * h
            }
        }
    }

    /// Kernel `psi(t) = sqrt(2 pi |b|) conj(zeta(t)) nu(t)`.
    pub fn psi(&self, params: &SaftParams, t: f64) -> C64 {
        (2.0 * PI * params.b().abs()).sqrt() * zeta(params, t).conj() * self.eval(t)
    }

    /// Transform of `psi`: `eta(w) * nu_hat(w / b)`.
    pub fn saft_spectrum(&self, params: &SaftParams, w: f64) -> C64 {
        eta(params, w) * self.fourier(w / params.b())
    }

    /// Symbol of the integer samples, `sum_k nu(k) exp(-j w k)`.
    pub fn symbol(&self, w: f64) -> C64 {
        self.integer_samples
            .iter()
            .map(|(k, v)| v * C64::cis(-w * k as f64))
            .sum()
    }
}

pub const DEFAULT_SINC_HALF_WIDTH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FilterKind {
    ExactGeometric,
    Identity,
    DftDerived,
}

/// Taps below this magnitude are dropped.
pub const TAP_CUTOFF: f64 = 1e-12;
const DFT_POINTS: usize = 4096;
const SYMBOL_SWEEP: usize = 1024;

/// Inverse of the integer-sample sequence, applied as a symmetric FIR.
#[derive(Clone, Debug, Serialize)]
pub struct InverseDiscreteFilter {
    pub kind: FilterKind,
    pub mu: Option<f64>,
    pub gain: f64,
    pub max_lag: usize,
    /// `taps[i]` is the tap at lag `i - max_lag`.
    taps: Vec<f64>,
}

impl InverseDiscreteFilter {
    pub fn identity() -> Self {
        InverseDiscreteFilter {
            kind: FilterKind::Identity,
            mu: None,
            gain: 1.0,
            max_lag: 0,
            taps: vec![1.0],
        }
    }

    /// `gain * mu^|k|` with `mu = sqrt(3) - 2`, the inverse of `(1, 4, 1)/6`.
    pub fn power_cosine() -> Self {
        let mu = 3f64.sqrt() - 2.0;
        let gain = -6.0 * mu / (1.0 - mu * mu);
        let mut max_lag = 0;
        while gain * mu.abs().powi(max_lag as i32 + 1) >= TAP_CUTOFF {
            max_lag += 1;
        }
        let taps = (0..=2 * max_lag)
            .map(|i| gain * mu.powi((i as i64 - max_lag as i64).unsigned_abs() as i32))
            .collect();
        InverseDiscreteFilter {
            kind: FilterKind::ExactGeometric,
            mu: Some(mu),
            gain,
            max_lag,
            taps,
        }
    }

    pub fn tap(&self, k: i64) -> f64 {
        let i = k + self.max_lag as i64;
        if i < 0 || i >= self.taps.len() as i64 {
            0.0
        } else {
            self.taps[i as usize]
        }
    }

    pub fn taps(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let m = self.max_lag as i64;
        self.taps.iter().enumerate().map(move |(i, &v)| (i as i64 - m, v))
    }

    /// Frequency response of the truncated taps.
    pub fn response(&self, w: f64) -> C64 {
        self.taps().map(|(k, v)| C64::cis(-w * k as f64) * v).sum()
    }

    /// `max_{|m| <= m_max} |(filter * nu)(m) - delta_m|`.
    pub fn interpolation_defect(&self, gen: &Generator, m_max: i64) -> f64 {
        (-m_max..=m_max)
            .map(|m| {
                let mut acc = 0.0;
                for (k, v) in gen.integer_samples().iter() {
                    acc += self.tap(m - k) * v.re;
                }
                (acc - if m == 0 { 1.0 } else { 0.0 }).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Inverse filter of a generator's integer samples: closed form for the
/// power-cosine, identity for sinc, DFT inversion otherwise.
pub fn inverse_filter(gen: &Generator) -> Result<InverseDiscreteFilter> {
    match gen.kind() {
        GeneratorKind::PowerCosine => Ok(InverseDiscreteFilter::power_cosine()),
        GeneratorKind::Sinc { .. } => Ok(InverseDiscreteFilter::identity()),
        GeneratorKind::Custom => dft_inverse_filter(gen),
    }
}

fn dft_inverse_filter(gen: &Generator) -> Result<InverseDiscreteFilter> {
    let samples = gen.integer_samples();
    let peak = samples.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(SaftError::NonInvertibleSymbol(0.0));
    }
    // Sweep check on the coarse grid, then on the DFT grid itself.
    let floor = 1e-8 * samples.values().iter().map(|v| v.norm()).sum::<f64>();
    for i in 0..SYMBOL_SWEEP {
        let w = 2.0 * PI * i as f64 / SYMBOL_SWEEP as f64;
        if gen.symbol(w).norm() < floor {
            return Err(SaftError::NonInvertibleSymbol(w));
        }
    }
    let n = DFT_POINTS;
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for (k, v) in samples.iter() {
        buf[k.rem_euclid(n as i64) as usize] += v;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (i, v) in buf.iter_mut().enumerate() {
        if v.norm() < floor {
            return Err(SaftError::NonInvertibleSymbol(2.0 * PI * i as f64 / n as f64));
        }
        *v = v.inv();
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let lag = |k: i64| buf[k.rem_euclid(n as i64) as usize].re / n as f64;
    let half = (n / 2 - 1) as i64;
    let max_lag = (0..=half)
        .rev()
        .find(|&k| lag(k).abs() >= TAP_CUTOFF || lag(-k).abs() >= TAP_CUTOFF)
        .unwrap_or(0) as usize;
    let m = max_lag as i64;
    let taps = (-m..=m).map(lag).collect();
    Ok(InverseDiscreteFilter {
        kind: FilterKind::DftDerived,
        mu: None,
        gain: lag(0),
        max_lag,
        taps,
    })
}

/// Expansion weights `p` whose interpolant reproduces `samples` on the
/// lattice `kT`. The support grows by the filter's `max_lag` on each side so
/// the interpolation condition also holds at the edge samples.
pub fn compute_weights(
    params: &SaftParams,
    samples: &SampleSeq,
    gen: &Generator,
    spacing: f64,
) -> Result<SampleSeq> {
    let filter = inverse_filter(gen)?;
    Ok(compute_weights_with(params, samples, &filter, spacing))
}

pub fn compute_weights_with(
    params: &SaftParams,
    samples: &SampleSeq,
    filter: &InverseDiscreteFilter,
    spacing: f64,
) -> SampleSeq {
    if filter.kind == FilterKind::Identity {
        return samples.clone();
    }
    if samples.is_empty() {
        return samples.clone();
    }
    let demod = samples.map(|k, v| v * zeta(params, k as f64 * spacing));
    let lag = filter.max_lag as i64;
    let (first, last) = (samples.offset() - lag, samples.last_index() + lag);
    let values = (first..=last)
        .into_par_iter()
        .map(|k| {
            let mut acc = C64::new(0.0, 0.0);
            for (j, v) in demod.iter() {
                let t = filter.tap(k - j);
                if t != 0.0 {
                    acc += v * t;
                }
            }
            acc * zeta(params, k as f64 * spacing).conj()
        })
        .collect();
    SampleSeq::new(first, values)
}

/// Interpolant `conj(zeta(t)) sum_k p[k] zeta(kT) nu(t/T - k)` at `t`.
pub fn si_interpolate_at(params: &SaftParams, weights: &SampleSeq, gen: &Generator, spacing: f64, t: f64) -> C64 {
    if weights.is_empty() {
        return C64::new(0.0, 0.0);
    }
    let x = t / spacing;
    let (lo, hi) = gen.support();
    let first = if lo.is_finite() {
        ((x - hi).ceil() as i64).max(weights.offset())
    } else {
        weights.offset()
    };
    let last = if hi.is_finite() {
        ((x - lo).floor() as i64).min(weights.last_index())
    } else {
        weights.last_index()
    };
    let mut acc = C64::new(0.0, 0.0);
    for k in first..=last {
        let v = gen.eval(x - k as f64);
        if v != 0.0 {
            acc += weights.get(k) * zeta(params, k as f64 * spacing) * v;
        }
    }
    acc * zeta(params, t).conj()
}

pub fn si_interpolate(
    params: &SaftParams,
    weights: &SampleSeq,
    gen: &Generator,
    tgrid: &UniformGrid,
    spacing: f64,
) -> Signal {
    let values = (0..tgrid.n())
        .into_par_iter()
        .map(|i| si_interpolate_at(params, weights, gen, spacing, tgrid.point(i)))
        .collect();
    Signal::from_parts(*tgrid, values)
}

/// Estimates of `f(mT - tau)` for every index `m` of `samples`.
pub fn fdf(params: &SaftParams, samples: &SampleSeq, gen: &Generator, tau: f64, spacing: f64) -> Result<SampleSeq> {
    if !(0.0..=spacing).contains(&tau) {
        return Err(SaftError::DelayOutOfRange { tau, period: spacing });
    }
    let weights = compute_weights(params, samples, gen, spacing)?;
    let values = (samples.offset()..=samples.last_index())
        .into_par_iter()
        .map(|m| si_interpolate_at(params, &weights, gen, spacing, m as f64 * spacing - tau))
        .collect();
    Ok(SampleSeq::new(samples.offset(), values))
}

/// `10 log10(max|ref|^2 / mean|est - ref|^2)`; `+inf` when the sequences are
/// identical.
pub fn psnr(reference: &SampleSeq, estimate: &SampleSeq) -> Result<f64> {
    if reference.len() != estimate.len() || reference.offset() != estimate.offset() {
        return Err(SaftError::LengthMismatch {
            expected: reference.len(),
            got: estimate.len(),
        });
    }
    if reference.is_empty() {
        return Err(SaftError::EmptyWindow);
    }
    let peak = reference.values().iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(SaftError::ZeroReference);
    }
    let mse = reference
        .values()
        .iter()
        .zip(estimate.values())
        .map(|(r, e)| (e - r).norm_sqr())
        .sum::<f64>()
        / reference.len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak / mse).log10())
}
