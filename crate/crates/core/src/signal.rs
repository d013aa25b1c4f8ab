//! Grids, sampled signals, chirp operators and trapezoid quadrature.

use std::f64::consts::PI;
use std::marker::PhantomData;

use num_complex::Complex64 as C64;

use crate::error::{Result, SaftError};
use crate::params::SaftParams;

/// `t0 + i*dt` for `0 <= i < n`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct UniformGrid {
    t0: f64,
    dt: f64,
    n: usize,
}

impl UniformGrid {
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(SaftError::EmptyGrid);
        }
        if !(t0.is_finite() && dt.is_finite() && dt > 0.0) {
            return Err(SaftError::InvalidGrid(format!("t0 = {t0}, dt = {dt}")));
        }
        Ok(UniformGrid { t0, dt, n })
    }

    /// `n` points from `start` to `end` inclusive.
    pub fn linspace(start: f64, end: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(SaftError::EmptyGrid);
        }
        if n == 1 {
            return Self::new(start, 1.0, 1);
        }
        Self::new(start, (end - start) / (n - 1) as f64, n)
    }

    /// `n` points `t0 + i*dt` with `i` running over `[-n/2, n/2)`.
    pub fn centered(dt: f64, n: usize) -> Result<Self> {
        Self::new(-((n / 2) as f64) * dt, dt, n)
    }

    /// Frequency grid dual to this time grid for a transform with parameter
    /// `b`: same length, spacing `2 pi |b| / (n dt)`, covering
    /// `[-pi |b| / dt, pi |b| / dt)`. With this choice forward and inverse
    /// quadratures alias onto each other exactly as a DFT pair would.
    pub fn dual(&self, b: f64) -> Self {
        let dw = 2.0 * PI * b.abs() / (self.n as f64 * self.dt);
        UniformGrid {
            t0: -((self.n / 2) as f64) * dw,
            dt: dw,
            n: self.n,
        }
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }
    pub fn dt(&self) -> f64 {
        self.dt
    }
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn last(&self) -> f64 {
        self.point(self.n - 1)
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.point(i))
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t0 && t <= self.last()
    }

    /// Same point set up to a relative tolerance on `t0` and `dt`.
    pub fn matches(&self, other: &UniformGrid) -> bool {
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs()));
        self.n == other.n && close(self.t0, other.t0) && close(self.dt, other.dt)
    }
}

/// Marker for the axis a sampled function lives on.
pub trait Axis: Clone + Copy + std::fmt::Debug + Default {
    const LABEL: &'static str;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Time;
#[derive(Clone, Copy, Debug, Default)]
pub struct Frequency;

impl Axis for Time {
    const LABEL: &'static str = "t";
}
impl Axis for Frequency {
    const LABEL: &'static str = "omega";
}

/// Complex samples on a uniform grid.
#[derive(Clone, Debug)]
pub struct Sampled<A: Axis> {
    grid: UniformGrid,
    values: Vec<C64>,
    _axis: PhantomData<A>,
}

pub type Signal = Sampled<Time>;
pub type Spectrum = Sampled<Frequency>;

impl<A: Axis> Sampled<A> {
    pub fn new(grid: UniformGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(SaftError::LengthMismatch {
                expected: grid.n(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(SaftError::NonFiniteSample(i));
        }
        Ok(Sampled {
            grid,
            values,
            _axis: PhantomData,
        })
    }

    /// Trusted constructor for values produced inside the crate.
    pub(crate) fn from_parts(grid: UniformGrid, values: Vec<C64>) -> Self {
        debug_assert_eq!(grid.n(), values.len());
        Sampled {
            grid,
            values,
            _axis: PhantomData,
        }
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> C64) -> Self {
        Self::from_parts(grid, grid.points().map(f).collect())
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        Self::from_parts(grid, vec![C64::new(0.0, 0.0); grid.n()])
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }
    pub fn values(&self) -> &[C64] {
        &self.values
    }
    pub fn into_values(self) -> Vec<C64> {
        self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise map with access to the grid coordinate.
    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| f(self.grid.point(i), v))
            .collect();
        Self::from_parts(self.grid, values)
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|_, v| v * s)
    }

    /// `self + s * other` on a shared grid.
    pub fn axpy(&self, s: C64, other: &Self) -> Result<Self> {
        check_grids(&self.grid, &other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x + s * y)
            .collect();
        Ok(Self::from_parts(self.grid, values))
    }

    /// Cubic Lagrange interpolation; zero outside the grid.
    pub fn interpolate(&self, t: f64) -> C64 {
        let n = self.grid.n();
        let zero = C64::new(0.0, 0.0);
        if !self.grid.contains(t) {
            return zero;
        }
        if n < 4 {
            let x = (t - self.grid.t0()) / self.grid.dt();
            let i = (x.round() as usize).min(n - 1);
            return self.values[i];
        }
        let x = (t - self.grid.t0()) / self.grid.dt();
        let i = (x.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let u = x - i as f64;
        let mut acc = zero;
        for j in 0..4 {
            let mut w = 1.0;
            for m in 0..4 {
                if m != j {
                    w *= (u - m as f64) / (j as f64 - m as f64);
                }
            }
            acc += self.values[i + j] * w;
        }
        acc
    }
}

pub(crate) fn check_grids(a: &UniformGrid, b: &UniformGrid) -> Result<()> {
    if a.matches(b) {
        Ok(())
    } else {
        Err(SaftError::GridMismatch(format!("{a:?} vs {b:?}")))
    }
}

/// Integer-indexed finite sequence `values[i]` at index `offset + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSeq {
    offset: i64,
    values: Vec<C64>,
}

impl SampleSeq {
    pub fn new(offset: i64, values: Vec<C64>) -> Self {
        SampleSeq { offset, values }
    }

    pub fn zeros(offset: i64, len: usize) -> Self {
        Self::new(offset, vec![C64::new(0.0, 0.0); len])
    }

    pub fn impulse(k: i64) -> Self {
        Self::new(k, vec![C64::new(1.0, 0.0)])
    }

    /// Values `f(k)` for `k` in `first..=last`.
    pub fn from_fn(first: i64, last: i64, f: impl Fn(i64) -> C64) -> Self {
        Self::new(first, (first..=last).map(f).collect())
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }
    pub fn values(&self) -> &[C64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    /// Last index of the support; `offset - 1` when empty.
    pub fn last_index(&self) -> i64 {
        self.offset + self.values.len() as i64 - 1
    }

    /// Value at index `k`, zero outside the stored support.
    pub fn get(&self, k: i64) -> C64 {
        let i = k - self.offset;
        if i < 0 || i >= self.values.len() as i64 {
            C64::new(0.0, 0.0)
        } else {
            self.values[i as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.offset + i as i64, v))
    }

    pub fn map(&self, f: impl Fn(i64, C64) -> C64) -> Self {
        Self::new(self.offset, self.iter().map(|(k, v)| f(k, v)).collect())
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Restriction to `first..=last` (zero-filled where unsupported).
    pub fn window(&self, first: i64, last: i64) -> Self {
        Self::from_fn(first, last, |k| self.get(k))
    }
}

/// Summation order for quadratures.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub enum Summation {
    /// Left to right, bit-reproducible.
    #[default]
    Sequential,
    /// Recursive halving; smaller rounding error on long sums.
    Pairwise,
}

fn pairwise(v: &[C64]) -> C64 {
    if v.len() <= 16 {
        v.iter().sum()
    } else {
        let (l, r) = v.split_at(v.len() / 2);
        pairwise(l) + pairwise(r)
    }
}

/// Sum of `terms(i)` for `0 <= i < n` in the requested order.
pub fn sum(n: usize, mode: Summation, terms: impl Fn(usize) -> C64) -> C64 {
    match mode {
        Summation::Sequential => {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                acc += terms(i);
            }
            acc
        }
        Summation::Pairwise => {
            let v: Vec<C64> = (0..n).map(terms).collect();
            pairwise(&v)
        }
    }
}

/// Trapezoid weight of node `i` (in units of the step).
#[inline]
pub fn trapezoid_weight(i: usize, n: usize) -> f64 {
    if n == 1 {
        0.0
    } else if i == 0 || i == n - 1 {
        0.5
    } else {
        1.0
    }
}

/// Trapezoid rule for `integrand(i)` sampled on `grid`.
pub fn trapezoid(grid: &UniformGrid, mode: Summation, integrand: impl Fn(usize) -> C64) -> C64 {
    let n = grid.n();
    sum(n, mode, |i| integrand(i) * trapezoid_weight(i, n)) * grid.dt()
}

/// `exp(j a t^2 / 2b)`.
#[inline]
pub fn chirp(params: &SaftParams, t: f64) -> C64 {
    C64::cis(params.a() * t * t / (2.0 * params.b()))
}

/// `exp(j (a t^2 + 2 p t) / 2b)`, the modulation that maps bandlimited
/// signals to the transform's native form.
#[inline]
pub fn zeta(params: &SaftParams, t: f64) -> C64 {
    C64::cis((params.a() * t * t + 2.0 * params.p() * t) / (2.0 * params.b()))
}

pub fn chirp_up(params: &SaftParams, s: &Signal) -> Signal {
    s.map(|t, v| v * chirp(params, t))
}

pub fn chirp_dn(params: &SaftParams, s: &Signal) -> Signal {
    s.map(|t, v| v * chirp(params, t).conj())
}

pub fn l2_norm<A: Axis>(s: &Sampled<A>) -> f64 {
    l2_norm_with(s, Summation::Sequential)
}

pub fn l2_norm_with<A: Axis>(s: &Sampled<A>, mode: Summation) -> f64 {
    trapezoid(s.grid(), mode, |i| C64::new(s.values[i].norm_sqr(), 0.0))
        .re
        .max(0.0)
        .sqrt()
}

/// `integral s(t) conj(r(t)) dt` by the trapezoid rule.
pub fn inner<A: Axis>(s: &Sampled<A>, r: &Sampled<A>) -> Result<C64> {
    inner_with(s, r, Summation::Sequential)
}

pub fn inner_with<A: Axis>(s: &Sampled<A>, r: &Sampled<A>, mode: Summation) -> Result<C64> {
    check_grids(s.grid(), r.grid())?;
    Ok(trapezoid(s.grid(), mode, |i| s.values[i] * r.values[i].conj()))
}

/// `||s - r|| / ||r||`.
pub fn relative_l2_error<A: Axis>(s: &Sampled<A>, r: &Sampled<A>) -> Result<f64> {
    let diff = s.axpy(C64::new(-1.0, 0.0), r)?;
    let nr = l2_norm(r);
    if nr == 0.0 {
        return Err(SaftError::DivisionByZeroNorm);
    }
    Ok(l2_norm(&diff) / nr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = UniformGrid::new(-1.0, 0.5, 5).unwrap();
        assert_eq!(g.points().collect::<Vec<_>>(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(UniformGrid::new(0.0, 0.0, 3).is_err());
        assert!(matches!(UniformGrid::new(0.0, 1.0, 0), Err(SaftError::EmptyGrid)));
    }

    #[test]
    fn dual_grid_spacing() {
        let g = UniformGrid::centered(0.01, 1000).unwrap();
        let w = g.dual(2.0);
        assert!((w.dt() * g.dt() * 1000.0 - 4.0 * PI).abs() < 1e-12);
        assert!((w.t0() + 2.0 * PI / 0.01).abs() < 1e-9);
    }

    #[test]
    fn pairwise_matches_sequential() {
        let n = 1000;
        let s = sum(n, Summation::Sequential, |i| C64::new(i as f64, -(i as f64)));
        let p = sum(n, Summation::Pairwise, |i| C64::new(i as f64, -(i as f64)));
        assert_eq!(s, p);
    }

    #[test]
    fn interpolation_is_exact_for_cubics() {
        let g = UniformGrid::linspace(-1.0, 1.0, 21).unwrap();
        let f = |t: f64| C64::new(t * t * t - 2.0 * t, 0.5 * t * t);
        let s = Signal::from_fn(g, f);
        for &t in &[-0.97, -0.33, 0.0, 0.41, 0.99] {
            assert!((s.interpolate(t) - f(t)).norm() < 1e-13);
        }
        assert_eq!(s.interpolate(1.5), C64::new(0.0, 0.0));
    }

    #[test]
    fn sequence_indexing() {
        let s = SampleSeq::from_fn(-2, 2, |k| C64::new(k as f64, 0.0));
        assert_eq!(s.get(-2).re, -2.0);
        assert_eq!(s.get(3), C64::new(0.0, 0.0));
        assert_eq!(s.last_index(), 2);
        assert_eq!(s.window(1, 3).values().len(), 3);
    }
}
