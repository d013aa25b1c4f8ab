//! C ABI over `saft-core`.
//!
//! Objects are opaque handles created by `*_new`/`*_preset`/transform calls
//! and released with the matching `*_free`. Every fallible call returns a
//! [`SaftStatus`]; the message of the last failure on the calling thread is
//! available from [`saft_last_error`].
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use num_complex::Complex64 as C64;
use saft_core::convolution::{dtsaft, saft_convolve as core_convolve};
use saft_core::experiment::{run_experiment, ExperimentConfig};
use saft_core::params::preset;
use saft_core::shiftinv::{fdf, psnr, Generator};
use saft_core::signal::{SampleSeq, Signal, Spectrum, UniformGrid};
use saft_core::transform::{forward, inverse, kernel};
use saft_core::{SaftError, SaftParams};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaftStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DeterminantViolation = 3,
    ZeroB = 4,
    UnknownPreset = 5,
    ComplexParameterUnsupported = 6,
    GridMismatch = 7,
    EmptyGrid = 8,
    DivisionByZeroNorm = 9,
    DegenerateGenerator = 10,
    NegativeB = 11,
    GridTooNarrow = 12,
    NonInvertibleSymbol = 13,
    DelayOutOfRange = 14,
    ZeroReference = 15,
    Io = 16,
    BufferTooSmall = 17,
    Panic = 99,
}

impl From<&SaftError> for SaftStatus {
    fn from(e: &SaftError) -> Self {
        use SaftError::*;
        match e {
            DeterminantViolation { .. } => SaftStatus::DeterminantViolation,
            ZeroB => SaftStatus::ZeroB,
            UnknownPreset(_) => SaftStatus::UnknownPreset,
            ComplexParameterUnsupported(_) => SaftStatus::ComplexParameterUnsupported,
            GridMismatch(_) | LengthMismatch { .. } => SaftStatus::GridMismatch,
            EmptyGrid | EmptyWindow => SaftStatus::EmptyGrid,
            DivisionByZeroNorm => SaftStatus::DivisionByZeroNorm,
            DegenerateGenerator(_) => SaftStatus::DegenerateGenerator,
            NegativeB(_) => SaftStatus::NegativeB,
            GridTooNarrow(_) => SaftStatus::GridTooNarrow,
            NonInvertibleSymbol(_) => SaftStatus::NonInvertibleSymbol,
            DelayOutOfRange { .. } => SaftStatus::DelayOutOfRange,
            ZeroReference => SaftStatus::ZeroReference,
            Io(_) | MalformedCsv(_) | NonUniformGrid { .. } => SaftStatus::Io,
            _ => SaftStatus::InvalidArgument,
        }
    }
}

/// Opaque validated parameter set.
pub struct SaftParamsHandle(SaftParams);
/// Opaque sampled time signal.
pub struct SaftSignal(Signal);
/// Opaque sampled spectrum.
pub struct SaftSpectrum(Spectrum);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(SaftStatus, String);

impl From<SaftError> for Fail {
    fn from(e: SaftError) -> Self {
        Fail(SaftStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(SaftStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SaftStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SaftStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            SaftStatus::Panic
        }
    }
}

unsafe fn href<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn complex_in(re: *const f64, im: *const f64, n: usize) -> Result<Vec<C64>, Fail> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if re.is_null() {
        return Err(null("re"));
    }
    let re = slice::from_raw_parts(re, n);
    let im = if im.is_null() { None } else { Some(slice::from_raw_parts(im, n)) };
    Ok((0..n)
        .map(|i| C64::new(re[i], im.map_or(0.0, |v| v[i])))
        .collect())
}

unsafe fn complex_out(values: &[C64], re: *mut f64, im: *mut f64, cap: usize) -> Result<(), Fail> {
    if cap < values.len() {
        return Err(Fail(
            SaftStatus::BufferTooSmall,
            format!("buffer holds {cap}, need {}", values.len()),
        ));
    }
    if values.is_empty() {
        return Ok(());
    }
    if re.is_null() || im.is_null() {
        return Err(null("output buffer"));
    }
    let (re, im) = (slice::from_raw_parts_mut(re, cap), slice::from_raw_parts_mut(im, cap));
    for (i, v) in values.iter().enumerate() {
        re[i] = v.re;
        im[i] = v.im;
    }
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn saft_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn saft_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub unsafe extern "C" fn saft_params_new(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    p: f64,
    q: f64,
    tol: f64,
    out_params: *mut *mut SaftParamsHandle,
) -> SaftStatus {
    guard(|| {
        let slot = out(out_params, "out_params")?;
        let v = SaftParams::with_tol([a, b, c, d, p, q], tol)?;
        *slot = boxed(SaftParamsHandle(v));
        Ok(())
    })
}

/// Named preset (`ft`, `frft`, `lct`, `experiment`, ...) with `nargs` reals.
#[no_mangle]
pub unsafe extern "C" fn saft_params_preset(
    name: *const c_char,
    args: *const f64,
    nargs: usize,
    out_params: *mut *mut SaftParamsHandle,
) -> SaftStatus {
    guard(|| {
        let slot = out(out_params, "out_params")?;
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| Fail(SaftStatus::InvalidArgument, "name is not UTF-8".into()))?;
        let args = if nargs == 0 {
            &[][..]
        } else if args.is_null() {
            return Err(null("args"));
        } else {
            slice::from_raw_parts(args, nargs)
        };
        *slot = boxed(SaftParamsHandle(preset(name, args)?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn saft_params_inverse(
    params: *const SaftParamsHandle,
    out_params: *mut *mut SaftParamsHandle,
) -> SaftStatus {
    guard(|| {
        let p = href(params, "params")?;
        let slot = out(out_params, "out_params")?;
        *slot = boxed(SaftParamsHandle(p.0.inverse()?));
        Ok(())
    })
}

/// Copies `(a, b, c, d, p, q)` into `out6`.
#[no_mangle]
pub unsafe extern "C" fn saft_params_get(params: *const SaftParamsHandle, out6: *mut f64) -> SaftStatus {
    guard(|| {
        let p = href(params, "params")?;
        if out6.is_null() {
            return Err(null("out6"));
        }
        slice::from_raw_parts_mut(out6, 6).copy_from_slice(&p.0.to_array());
        Ok(())
    })
}

/// `Omega = 2(bq - dp)`, `Delta = 2 pi b`, chirp rate `a / 2b`.
#[no_mangle]
pub unsafe extern "C" fn saft_params_derived(
    params: *const SaftParamsHandle,
    omega_cap: *mut f64,
    delta: *mut f64,
    chirp_rate: *mut f64,
) -> SaftStatus {
    guard(|| {
        let d = href(params, "params")?.0.derived();
        *out(omega_cap, "omega_cap")? = d.omega_cap;
        *out(delta, "delta")? = d.delta;
        *out(chirp_rate, "chirp_rate")? = d.chirp_rate;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn saft_params_free(params: *mut SaftParamsHandle) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

#[no_mangle]
pub unsafe extern "C" fn saft_kernel(
    params: *const SaftParamsHandle,
    t: f64,
    omega: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SaftStatus {
    guard(|| {
        let k = kernel(&href(params, "params")?.0, t, omega);
        *out(out_re, "out_re")? = k.re;
        *out(out_im, "out_im")? = k.im;
        Ok(())
    })
}

/// Signal on `t0 + i dt`, `i < n`. `im` may be null for real input.
#[no_mangle]
pub unsafe extern "C" fn saft_signal_new(
    t0: f64,
    dt: f64,
    n: usize,
    re: *const f64,
    im: *const f64,
    out_signal: *mut *mut SaftSignal,
) -> SaftStatus {
    guard(|| {
        let slot = out(out_signal, "out_signal")?;
        let grid = UniformGrid::new(t0, dt, n)?;
        let s = Signal::new(grid, complex_in(re, im, n)?)?;
        *slot = boxed(SaftSignal(s));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn saft_signal_len(signal: *const SaftSignal) -> usize {
    signal.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the samples into caller buffers of capacity `cap`.
#[no_mangle]
pub unsafe extern "C" fn saft_signal_values(
    signal: *const SaftSignal,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
) -> SaftStatus {
    guard(|| complex_out(href(signal, "signal")?.0.values(), re, im, cap))
}

#[no_mangle]
pub unsafe extern "C" fn saft_signal_free(signal: *mut SaftSignal) {
    if !signal.is_null() {
        drop(Box::from_raw(signal));
    }
}

#[no_mangle]
pub unsafe extern "C" fn saft_spectrum_len(spectrum: *const SaftSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn saft_spectrum_values(
    spectrum: *const SaftSpectrum,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
) -> SaftStatus {
    guard(|| complex_out(href(spectrum, "spectrum")?.0.values(), re, im, cap))
}

#[no_mangle]
pub unsafe extern "C" fn saft_spectrum_free(spectrum: *mut SaftSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Forward transform on `w0 + i dw`, `i < nw`.
#[no_mangle]
pub unsafe extern "C" fn saft_forward(
    params: *const SaftParamsHandle,
    signal: *const SaftSignal,
    w0: f64,
    dw: f64,
    nw: usize,
    out_spectrum: *mut *mut SaftSpectrum,
) -> SaftStatus {
    guard(|| {
        let p = href(params, "params")?;
        let f = href(signal, "signal")?;
        let slot = out(out_spectrum, "out_spectrum")?;
        let grid = UniformGrid::new(w0, dw, nw)?;
        *slot = boxed(SaftSpectrum(forward(&p.0, &f.0, &grid)));
        Ok(())
    })
}

/// Inverse transform on `t0 + i dt`, `i < n`.
#[no_mangle]
pub unsafe extern "C" fn saft_inverse(
    params: *const SaftParamsHandle,
    spectrum: *const SaftSpectrum,
    t0: f64,
    dt: f64,
    n: usize,
    out_signal: *mut *mut SaftSignal,
) -> SaftStatus {
    guard(|| {
        let p = href(params, "params")?;
        let s = href(spectrum, "spectrum")?;
        let slot = out(out_signal, "out_signal")?;
        let grid = UniformGrid::new(t0, dt, n)?;
        *slot = boxed(SaftSignal(inverse(&p.0, &s.0, &grid)));
        Ok(())
    })
}

/// Transform-domain convolution; both signals need the same step.
#[no_mangle]
pub unsafe extern "C" fn saft_convolve(
    params: *const SaftParamsHandle,
    f: *const SaftSignal,
    g: *const SaftSignal,
    out_signal: *mut *mut SaftSignal,
) -> SaftStatus {
    guard(|| {
        let p = href(params, "params")?;
        let (f, g) = (href(f, "f")?, href(g, "g")?);
        let slot = out(out_signal, "out_signal")?;
        *slot = boxed(SaftSignal(core_convolve(&p.0, &f.0, &g.0)?));
        Ok(())
    })
}

/// Transform of the sequence `seq[i]` at index `offset + i`, at one frequency.
#[no_mangle]
pub unsafe extern "C" fn saft_dtsaft(
    params: *const SaftParamsHandle,
    offset: i64,
    re: *const f64,
    im: *const f64,
    n: usize,
    omega: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SaftStatus {
    guard(|| {
        let p = href(params, "params")?;
        let seq = SampleSeq::new(offset, complex_in(re, im, n)?);
        let v = dtsaft(&p.0, &seq, omega);
        *out(out_re, "out_re")? = v.re;
        *out(out_im, "out_im")? = v.im;
        Ok(())
    })
}

/// Delays `n` samples taken at `(offset + i) T` by `tau` with the named
/// generator (`power-cosine`, `sinc`, `sinc:N`, `sinc:full`). Writes `n`
/// values.
#[no_mangle]
pub unsafe extern "C" fn saft_fdf(
    params: *const SaftParamsHandle,
    offset: i64,
    re: *const f64,
    im: *const f64,
    n: usize,
    generator: *const c_char,
    tau: f64,
    spacing: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SaftStatus {
    guard(|| {
        let p = href(params, "params")?;
        if generator.is_null() {
            return Err(null("generator"));
        }
        let name = CStr::from_ptr(generator)
            .to_str()
            .map_err(|_| Fail(SaftStatus::InvalidArgument, "generator is not UTF-8".into()))?;
        let g = Generator::by_name(name)?;
        let seq = SampleSeq::new(offset, complex_in(re, im, n)?);
        let res = fdf(&p.0, &seq, &g, tau, spacing)?;
        complex_out(res.values(), out_re, out_im, n)
    })
}

/// PSNR in dB of `est` against `reference` (`+inf` when identical).
#[no_mangle]
pub unsafe extern "C" fn saft_psnr(
    ref_re: *const f64,
    ref_im: *const f64,
    est_re: *const f64,
    est_im: *const f64,
    n: usize,
    out_db: *mut f64,
) -> SaftStatus {
    guard(|| {
        let r = SampleSeq::new(0, complex_in(ref_re, ref_im, n)?);
        let e = SampleSeq::new(0, complex_in(est_re, est_im, n)?);
        *out(out_db, "out_db")? = psnr(&r, &e)?;
        Ok(())
    })
}

/// Default delay study. Writes five PSNR values (delays 0.1 T .. 0.5 T)
/// per generator.
#[no_mangle]
pub unsafe extern "C" fn saft_experiment_default(
    out_power_cosine: *mut f64,
    out_sinc: *mut f64,
) -> SaftStatus {
    guard(|| {
        if out_power_cosine.is_null() || out_sinc.is_null() {
            return Err(null("output buffer"));
        }
        let cfg = ExperimentConfig::default();
        let sinc_name = cfg.generators()[1].name().to_string();
        let r = run_experiment(&cfg)?;
        let n = cfg.delay_fractions.len();
        slice::from_raw_parts_mut(out_power_cosine, n).copy_from_slice(&r.psnr_by_generator["power-cosine"]);
        slice::from_raw_parts_mut(out_sinc, n).copy_from_slice(&r.psnr_by_generator[&sinc_name]);
        Ok(())
    })
}
