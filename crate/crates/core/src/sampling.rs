//! Shannon-type sampling for signals bandlimited in the transform domain.
//!
//! A signal bandlimited to `[-sigma, sigma]` has the form
//! `conj(zeta(t)) h(t)` with `h` an ordinary bandlimited function of band
//! `sigma / |b|`, so it is determined by samples at spacing
//! `T = pi |b| / sigma`. The atoms are
//!
//! ```text
//! phi_n(t) = 1/sqrt(T) exp{-j(a t^2 - a (nT)^2)/2b} exp{-j p (t - nT)/b} sinc(t/T - n)
//! ```
//!
//! with `sinc(x) = sin(pi x)/(pi x)`. They are orthonormal for every `T`.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SaftError};
use crate::params::SaftParams;
use crate::signal::{trapezoid_weight, zeta, SampleSeq, Signal, UniformGrid};
use crate::special::{si_ci, sinc, sinpi};

/// Largest tolerated fraction of an atom's energy lying outside the grid.
pub const ATOM_TRUNCATION_LIMIT: f64 = 0.05;

/// Band edge and the matching sample spacing, `T sigma = pi |b|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BandlimitSpec {
    pub sigma: f64,
    pub spacing: f64,
}

impl BandlimitSpec {
    pub fn from_sigma(params: &SaftParams, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(SaftError::InvalidArgument(format!("sigma = {sigma}")));
        }
        Ok(BandlimitSpec {
            sigma,
            spacing: PI * params.b().abs() / sigma,
        })
    }

    pub fn from_spacing(params: &SaftParams, spacing: f64) -> Result<Self> {
        check_spacing(spacing)?;
        Ok(BandlimitSpec {
            sigma: PI * params.b().abs() / spacing,
            spacing,
        })
    }
}

fn check_spacing(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(SaftError::InvalidArgument(format!("sample spacing T = {t}")))
    }
}

/// Atom `phi_n` at `t`.
pub fn basis_phi(params: &SaftParams, spacing: f64, n: i64, t: f64) -> C64 {
    let tn = n as f64 * spacing;
    zeta(params, t).conj() * zeta(params, tn) * sinc(t / spacing - n as f64) / spacing.sqrt()
}

/// Low-pass kernel `sqrt(2 pi |b|) exp(-j a t^2/2b) exp(-j p t/b) sinc(t/T)`.
pub fn lowpass_psi(params: &SaftParams, spacing: f64, t: f64) -> C64 {
    (2.0 * PI * params.b().abs()).sqrt() * zeta(params, t).conj() * sinc(t / spacing)
}

/// Estimated fraction of the energy of atom `n` outside `grid`
/// (the `sinc^2` tail beyond distance `x` samples is about `1/(2 pi^2 x)`).
pub fn atom_truncation(grid: &UniformGrid, spacing: f64, n: i64) -> f64 {
    let c = n as f64 * spacing;
    if !grid.contains(c) {
        return 1.0;
    }
    let tail = |d: f64| if d <= 0.0 { 0.5 } else { (spacing / (2.0 * PI * PI * d)).min(0.5) };
    tail(c - grid.t0()) + tail(grid.last() - c)
}

/// Coefficients `c_k = <f, phi_k>` for `k` in `range` by the trapezoid rule.
pub fn analyze(
    params: &SaftParams,
    f: &Signal,
    spacing: f64,
    range: RangeInclusive<i64>,
) -> Result<SampleSeq> {
    check_spacing(spacing)?;
    let grid = *f.grid();
    for k in [*range.start(), *range.end()] {
        let lost = atom_truncation(&grid, spacing, k);
        if lost > ATOM_TRUNCATION_LIMIT {
            return Err(SaftError::GridTooNarrow(format!(
                "atom {k} loses about {:.1}% of its energy outside [{}, {}]",
                100.0 * lost,
                grid.t0(),
                grid.last()
            )));
        }
    }
    let n = grid.n();
    // f(t) zeta(t) times the quadrature weight, and sin(pi t/T) shared by all atoms.
    let (u, s): (Vec<C64>, Vec<f64>) = (0..n)
        .into_par_iter()
        .map(|i| {
            let t = grid.point(i);
            (
                f.values()[i] * zeta(params, t) * trapezoid_weight(i, n),
                sinpi(t / spacing),
            )
        })
        .unzip();
    let first = *range.start();
    let values = range
        .into_par_iter()
        .map(|k| {
            let kf = k as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                let x = grid.point(i) / spacing - kf;
                let sk = if x == 0.0 { 1.0 } else { sign * s[i] / (PI * x) };
                acc += u[i] * sk;
            }
            acc * zeta(params, kf * spacing).conj() * grid.dt() / spacing.sqrt()
        })
        .collect();
    Ok(SampleSeq::new(first, values))
}

/// Value of the sampling series at `t`:
/// `conj(zeta(t)) sum_k s_k zeta(kT) sinc(t/T - k)`.
pub fn synthesize_at(params: &SaftParams, samples: &SampleSeq, spacing: f64, t: f64) -> C64 {
    let x = t / spacing;
    let mut acc = C64::new(0.0, 0.0);
    for (k, v) in samples.iter() {
        acc += v * zeta(params, k as f64 * spacing) * sinc(x - k as f64);
    }
    acc * zeta(params, t).conj()
}

/// Sampling series on `tgrid`; reproduces `samples[m]` at `t = mT`. The
/// series is truncated to the given samples (sinc tails decay like `1/k`).
pub fn synthesize(params: &SaftParams, samples: &SampleSeq, spacing: f64, tgrid: &UniformGrid) -> Signal {
    let values = (0..tgrid.n())
        .into_par_iter()
        .map(|i| synthesize_at(params, samples, spacing, tgrid.point(i)))
        .collect();
    Signal::from_parts(*tgrid, values)
}

/// Orthogonal projection onto the span of `phi_k`, `k` in `range`.
pub fn project(
    params: &SaftParams,
    f: &Signal,
    spacing: f64,
    range: RangeInclusive<i64>,
    tgrid: &UniformGrid,
) -> Result<Signal> {
    let c = analyze(params, f, spacing, range)?;
    let s = 1.0 / spacing.sqrt();
    Ok(synthesize(params, &c.map(|_, v| v * s), spacing, tgrid))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GramOptions {
    /// Quadrature window `[-L T, L T]`, in units of `T`.
    pub half_window: f64,
    pub points: usize,
    /// Add the exact contribution of the sinc tails outside the window.
    pub tail_correction: bool,
}

impl Default for GramOptions {
    fn default() -> Self {
        GramOptions {
            half_window: 60.0,
            points: 1 << 15,
            tail_correction: true,
        }
    }
}

/// Inner products `<phi_n, phi_k>` for `|n|, |k| <= N`.
#[derive(Clone, Debug, Serialize)]
pub struct GramMatrix {
    pub half: usize,
    pub entries: Vec<C64>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        2 * self.half + 1
    }

    pub fn get(&self, n: i64, k: i64) -> C64 {
        let h = self.half as i64;
        self.entries[((n + h) as usize) * self.dim() + (k + h) as usize]
    }

    pub fn max_offdiag(&self) -> f64 {
        let d = self.dim();
        (0..d * d)
            .filter(|i| i / d != i % d)
            .map(|i| self.entries[i].norm())
            .fold(0.0, f64::max)
    }

    pub fn max_diag_deviation(&self) -> f64 {
        let d = self.dim();
        (0..d).map(|i| (self.entries[i * d + i] - 1.0).norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_defect(&self) -> f64 {
        let d = self.dim();
        (0..d * d)
            .map(|i| (self.entries[i] - self.entries[(i % d) * d + i / d].conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// `integral_{L}^{inf} sinc(u - n) sinc(u - k) du` for `L > max(n, k)`.
fn sinc_product_tail(l: f64, n: f64, k: f64) -> f64 {
    let pi2 = PI * PI;
    if n == k {
        let x = l - n;
        let (si, _) = si_ci(2.0 * PI * x);
        (sinpi(x).powi(2) / x + PI * (PI / 2.0 - si)) / pi2
    } else {
        let (xn, xk) = (l - n, l - k);
        let (_, ci_n) = si_ci(2.0 * PI * xn);
        let (_, ci_k) = si_ci(2.0 * PI * xk);
        let sign = if (n + k) as i64 % 2 == 0 { 1.0 } else { -1.0 };
        // sin^2 over [L-n, L-k] against 1/v, split into log and cosine-integral parts.
        let integral = 0.5 * ((xk / xn).ln() - (ci_k - ci_n));
        sign * integral / (pi2 * (n - k))
    }
}

/// Gram matrix of the atoms by trapezoid quadrature on `[-L T, L T]`,
/// optionally completed with the closed-form outer tails.
pub fn gram_matrix(params: &SaftParams, spacing: f64, half: usize, opts: GramOptions) -> Result<GramMatrix> {
    check_spacing(spacing)?;
    let l = opts.half_window;
    if !(l > half as f64) {
        return Err(SaftError::GridTooNarrow(format!(
            "window half-width {l} T does not contain atoms up to {half}"
        )));
    }
    let grid = UniformGrid::linspace(-l * spacing, l * spacing, opts.points)?;
    let h = half as i64;
    let atoms: Vec<Vec<C64>> = (-h..=h)
        .into_par_iter()
        .map(|n| grid.points().map(|t| basis_phi(params, spacing, n, t)).collect())
        .collect();
    let d = 2 * half + 1;
    let np = grid.n();
    let entries = (0..d * d)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / d, idx % d);
            let (n, k) = (i as i64 - h, j as i64 - h);
            let mut acc = C64::new(0.0, 0.0);
            for (m, (x, y)) in atoms[i].iter().zip(&atoms[j]).enumerate() {
                acc += x * y.conj() * trapezoid_weight(m, np);
            }
            acc *= grid.dt();
            if opts.tail_correction {
                let (nf, kf) = (n as f64, k as f64);
                let tail = sinc_product_tail(l, nf, kf) + sinc_product_tail(l, -nf, -kf);
                acc += zeta(params, nf * spacing) * zeta(params, kf * spacing).conj() * tail;
            }
            acc
        })
        .collect();
    Ok(GramMatrix { half, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_tail_matches_brute_force() {
        // Midpoint rule on a long stretch plus the leading 1/(2 pi^2 x) remainder.
        for &(n, k) in &[(0.0, 0.0), (1.0, -2.0), (3.0, 3.0)] {
            let (l, end, m) = (20.0, 4020.0, 4_000_000);
            let h = (end - l) / m as f64;
            let mut s = 0.0;
            for i in 0..m {
                let u = l + (i as f64 + 0.5) * h;
                s += sinc(u - n) * sinc(u - k);
            }
            s *= h;
            let sign = if (n + k) as i64 % 2 == 0 { 1.0 } else { -1.0 };
            s += sign / (2.0 * PI * PI * (end - 0.5 * (n + k)));
            assert!((s - sinc_product_tail(l, n, k)).abs() < 1e-7, "{n} {k}");
        }
    }

    #[test]
    fn spacing_and_band_are_dual() {
        let p = SaftParams::new(0.0, 2.0, -0.5, 0.0, 0.0, 0.0).unwrap();
        let s = BandlimitSpec::from_sigma(&p, 0.5).unwrap();
        assert!((s.spacing * s.sigma - 2.0 * PI).abs() < 1e-14);
        assert!(BandlimitSpec::from_spacing(&p, -1.0).is_err());
    }
}
