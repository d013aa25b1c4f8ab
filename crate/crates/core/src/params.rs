//! Six-parameter SAFT matrices `(a, b, c, d | p, q)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Result, SaftError};

/// Default tolerance on `|ad - bc - 1|`.
pub const DEFAULT_TOL: f64 = 1e-9;

/// The printed `d = 0.3143` of the delay experiment gives `ad - bc = 1.0001`,
/// so that preset carries a looser tolerance instead of a corrected `d`.
pub const EXPERIMENT_TOL: f64 = 1e-3;

/// Parameter vector of the transform. Fields are private so every instance
/// has passed [`validate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaftParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    p: f64,
    q: f64,
    tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivedConstants {
    /// `2(bq - dp)`, the linear frequency phase coefficient.
    pub omega_cap: f64,
    /// `2 pi b`, the frequency period of sequence transforms.
    pub delta: f64,
    /// `a / 2b`, the time chirp rate.
    pub chirp_rate: f64,
}

/// Checks the determinant and `b != 0` for a raw vector.
pub fn validate(v: [f64; 6], tol: f64) -> Result<()> {
    const NAMES: [&str; 6] = ["a", "b", "c", "d", "p", "q"];
    for (x, name) in v.iter().zip(NAMES) {
        if !x.is_finite() {
            return Err(SaftError::NonFinite(name));
        }
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(SaftError::NonFinite("tol"));
    }
    let [a, b, c, d, _, _] = v;
    if b == 0.0 {
        return Err(SaftError::ZeroB);
    }
    let residual = (a * d - b * c - 1.0).abs();
    if residual > tol {
        return Err(SaftError::DeterminantViolation { residual, tol });
    }
    Ok(())
}

impl SaftParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, p: f64, q: f64) -> Result<Self> {
        Self::with_tol([a, b, c, d, p, q], DEFAULT_TOL)
    }

    pub fn with_tol(v: [f64; 6], tol: f64) -> Result<Self> {
        validate(v, tol)?;
        let [a, b, c, d, p, q] = v;
        Ok(SaftParams { a, b, c, d, p, q, tol })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.p, self.q]
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Re-checks the determinant at a different tolerance.
    pub fn validate(&self, tol: f64) -> Result<()> {
        validate(self.to_array(), tol)
    }

    /// Parameters of the inverse transform: `(d, -b, -c, a | bq - dp, cp - aq)`.
    ///
    /// Applying this twice scales the offsets by `ad - bc`, so it is an exact
    /// involution only when the determinant is exactly one.
    pub fn inverse(&self) -> Result<Self> {
        let (a, b, c, d, p, q) = (self.a, self.b, self.c, self.d, self.p, self.q);
        Self::with_tol([d, -b, -c, a, b * q - d * p, c * p - a * q], self.tol)
    }

    pub fn omega_cap(&self) -> f64 {
        2.0 * (self.b * self.q - self.d * self.p)
    }

    pub fn delta(&self) -> f64 {
        2.0 * PI * self.b
    }

    pub fn chirp_rate(&self) -> f64 {
        self.a / (2.0 * self.b)
    }

    pub fn derived(&self) -> DerivedConstants {
        DerivedConstants {
            omega_cap: self.omega_cap(),
            delta: self.delta(),
            chirp_rate: self.chirp_rate(),
        }
    }
}

impl Serialize for SaftParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl fmt::Display for SaftParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{}",
            self.a, self.b, self.c, self.d, self.p, self.q
        )
    }
}

/// Parses `a,b,c,d,p,q` at the default tolerance.
impl FromStr for SaftParams {
    type Err = SaftError;

    fn from_str(s: &str) -> Result<Self> {
        let v = parse_reals(s)?;
        let arr: [f64; 6] = v.as_slice().try_into().map_err(|_| {
            SaftError::InvalidArgument(format!("expected 6 comma-separated numbers, got {}", v.len()))
        })?;
        Self::with_tol(arr, DEFAULT_TOL)
    }
}

pub const PRESET_NAMES: [&str; 10] = [
    "ft",
    "offset-ft",
    "frft",
    "offset-frft",
    "lct",
    "fresnel",
    "time-shift",
    "frequency-shift",
    "time-scale",
    "experiment",
];

const COMPLEX_PRESETS: [&str; 5] = [
    "laplace",
    "fractional-laplace",
    "bilateral-laplace",
    "gauss-weierstrass",
    "bargmann",
];

fn arity(name: &str, args: &[f64], expected: usize) -> Result<()> {
    if args.len() != expected {
        return Err(SaftError::PresetArity {
            name: name.to_string(),
            expected,
            got: args.len(),
        });
    }
    Ok(())
}

/// Raw table vector of a named preset, without validation. The signal
/// operations (shifts, scaling) have `b = 0` and are returned here even
/// though the integral kernel cannot represent them.
pub fn preset_vector(name: &str, args: &[f64]) -> Result<[f64; 6]> {
    let name = name.trim().to_ascii_lowercase();
    if COMPLEX_PRESETS.contains(&name.as_str()) {
        return Err(SaftError::ComplexParameterUnsupported(name));
    }
    let v = match name.as_str() {
        "ft" => {
            arity(&name, args, 0)?;
            [0.0, 1.0, -1.0, 0.0, 0.0, 0.0]
        }
        "offset-ft" => {
            arity(&name, args, 2)?;
            [0.0, 1.0, -1.0, 0.0, args[0], args[1]]
        }
        "frft" => {
            arity(&name, args, 1)?;
            let (s, c) = args[0].sin_cos();
            [c, s, -s, c, 0.0, 0.0]
        }
        "offset-frft" => {
            arity(&name, args, 3)?;
            let (s, c) = args[0].sin_cos();
            [c, s, -s, c, args[1], args[2]]
        }
        "lct" => {
            arity(&name, args, 4)?;
            [args[0], args[1], args[2], args[3], 0.0, 0.0]
        }
        "fresnel" => {
            arity(&name, args, 1)?;
            [1.0, args[0], 0.0, 1.0, 0.0, 0.0]
        }
        "time-shift" => {
            arity(&name, args, 1)?;
            [1.0, 0.0, 0.0, 1.0, args[0], 0.0]
        }
        "frequency-shift" => {
            arity(&name, args, 1)?;
            [1.0, 0.0, 0.0, 1.0, 0.0, args[0]]
        }
        "time-scale" => {
            arity(&name, args, 1)?;
            [1.0 / args[0], 0.0, 0.0, args[0], 0.0, 0.0]
        }
        "experiment" => {
            arity(&name, args, 0)?;
            [7.0, 2.0, 0.6, 0.3143, 2.5, 1.0]
        }
        _ => return Err(SaftError::UnknownPreset(name)),
    };
    Ok(v)
}

/// Validated preset. Shift and scaling presets fail with `ZeroB`.
pub fn preset(name: &str, args: &[f64]) -> Result<SaftParams> {
    let v = preset_vector(name, args)?;
    let tol = if name.trim().eq_ignore_ascii_case("experiment") {
        EXPERIMENT_TOL
    } else {
        DEFAULT_TOL
    };
    SaftParams::with_tol(v, tol)
}

/// Parses `name` or `name:x,y,...`.
pub fn parse_preset(spec: &str) -> Result<SaftParams> {
    let (name, args) = match spec.split_once(':') {
        Some((n, rest)) => (n, parse_reals(rest)?),
        None => (spec, Vec::new()),
    };
    preset(name, &args)
}

fn parse_reals(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            let x = x.trim();
            x.parse::<f64>()
                .map_err(|_| SaftError::InvalidArgument(format!("not a number: `{x}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accessors_round_trip() {
        let p = SaftParams::new(0.0, 1.0, -1.0, 0.0, 0.5, -0.25).unwrap();
        assert_eq!(p.to_array(), [0.0, 1.0, -1.0, 0.0, 0.5, -0.25]);
        assert_eq!(p.tol(), DEFAULT_TOL);
    }

    #[test]
    fn parse_vector_and_preset() {
        let p: SaftParams = "0, 1, -1, 0, 0, 0".parse().unwrap();
        assert_eq!(p, preset("ft", &[]).unwrap());
        assert!("1,2,3".parse::<SaftParams>().is_err());
        let l = parse_preset("lct:2,1,3,2").unwrap();
        assert_eq!(l.to_array(), [2.0, 1.0, 3.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn arity_is_checked() {
        assert!(matches!(
            preset("frft", &[]),
            Err(SaftError::PresetArity { expected: 1, got: 0, .. })
        ));
    }

    #[test]
    fn json_is_a_six_tuple() {
        let p = preset("experiment", &[]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[7.0,2.0,0.6,0.3143,2.5,1.0]");
    }
}
