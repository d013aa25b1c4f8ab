//! Special affine Fourier transform toolkit.
//!
//! The transform with parameters `(a, b, c, d | p, q)` maps `f` to
//!
//! ```text
//! F(w) = 1/sqrt(2 pi |b|) * integral f(t) exp{(j/2b)(a t^2 + d w^2 - 2 t w + 2 p t + 2(bq - dp) w)} dt
//! ```
//!
//! All integrals are trapezoid quadratures on uniform grids. The modules
//! follow the theory bottom-up: parameters, sampled signals, the transform,
//! convolution and sequence transforms, Zak/Poisson identities, Shannon-type
//! sampling, and shift-invariant reconstruction with fractional delays.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convolution;
pub mod error;
pub mod experiment;
pub mod io;
pub mod params;
pub mod report;
pub mod sampling;
pub mod shiftinv;
pub mod signal;
pub mod special;
pub mod transform;
pub mod zak_poisson;

pub use error::{Result, SaftError};
pub use num_complex::Complex64 as C64;
pub use params::SaftParams;
pub use signal::{SampleSeq, Signal, Spectrum, Summation, UniformGrid};
