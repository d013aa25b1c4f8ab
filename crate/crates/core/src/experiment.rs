//! Fractional delay study: chirped cosine mixture sampled at `T = pi b / 60`,
//! delayed by fractions of `T` with the power-cosine and truncated sinc
//! generators, scored by PSNR.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Serialize, Serializer};

use crate::error::{Result, SaftError};
use crate::params::{preset, SaftParams};
use crate::shiftinv::{fdf, psnr, Generator, DEFAULT_SINC_HALF_WIDTH};
use crate::signal::SampleSeq;

/// Samples excluded from scoring at each window end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EdgePolicy {
    /// Largest generator half-support among those compared, applied to all.
    CommonInterior,
    Fixed(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub params: SaftParams,
    pub alpha: [f64; 3],
    pub freqs: [f64; 3],
    pub spacing: f64,
    /// Delays as fractions of `spacing`.
    pub delay_fractions: Vec<f64>,
    pub window: (i64, i64),
    /// `None` for the untruncated sinc.
    pub sinc_half_width: Option<usize>,
    pub edge: EdgePolicy,
    /// Reserved; the test signal is deterministic.
    pub seed: u64,
}

impl ExperimentConfig {
    /// Reference study configuration for given parameters.
    pub fn for_params(params: SaftParams) -> Self {
        ExperimentConfig {
            params,
            alpha: [35.0, 18.0, 10.0],
            freqs: [0.77, 0.31, 0.25],
            spacing: PI * params.b() / 60.0,
            delay_fractions: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            window: (-256, 255),
            sinc_half_width: Some(DEFAULT_SINC_HALF_WIDTH),
            edge: EdgePolicy::CommonInterior,
            seed: 0,
        }
    }

    pub fn delays(&self) -> Vec<f64> {
        self.delay_fractions.iter().map(|f| f * self.spacing).collect()
    }

    pub fn generators(&self) -> Vec<Generator> {
        vec![Generator::power_cosine(), Generator::sinc(self.sinc_half_width)]
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::for_params(preset("experiment", &[]).expect("built-in preset is valid"))
    }
}

/// `exp{-j((a/2b) t^2 + (p/b) t)} sum_m alpha_m cos(2 pi w_m t)`.
pub fn gen_experiment_signal(cfg: &ExperimentConfig, t: f64) -> C64 {
    let p = &cfg.params;
    let phase = -(p.a() / (2.0 * p.b()) * t * t + p.p() / p.b() * t);
    let s: f64 = cfg
        .alpha
        .iter()
        .zip(&cfg.freqs)
        .map(|(a, w)| a * (2.0 * PI * w * t).cos())
        .sum();
    C64::cis(phase) * s
}

fn serialize_db<S: Serializer>(v: &BTreeMap<String, Vec<f64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let m: BTreeMap<&String, Vec<serde_json::Value>> = v
        .iter()
        .map(|(k, xs)| {
            let xs = xs
                .iter()
                .map(|&x| {
                    if x.is_finite() {
                        serde_json::json!(x)
                    } else {
                        serde_json::json!("+inf")
                    }
                })
                .collect();
            (k, xs)
        })
        .collect();
    m.serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct FdfReport {
    pub delays: Vec<f64>,
    pub delay_fractions: Vec<f64>,
    /// PSNR in dB per generator name, aligned with `delays`; identical
    /// sequences serialize as `"+inf"`.
    #[serde(serialize_with = "serialize_db")]
    pub psnr_by_generator: BTreeMap<String, Vec<f64>>,
    pub parameters: SaftParams,
    pub spacing: f64,
    pub window: (i64, i64),
    /// Index range the PSNR was computed on.
    pub evaluated: (i64, i64),
}

impl FdfReport {
    /// PSNR of `first` minus that of `second` per delay.
    pub fn margin(&self, first: &str, second: &str) -> Option<Vec<f64>> {
        let a = self.psnr_by_generator.get(first)?;
        let b = self.psnr_by_generator.get(second)?;
        Some(a.iter().zip(b).map(|(x, y)| x - y).collect())
    }
}

/// Runs every delay with every generator and scores against the exact
/// delayed signal on a common interior index range.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<FdfReport> {
    let (lo, hi) = cfg.window;
    if hi < lo {
        return Err(SaftError::EmptyWindow);
    }
    let t = cfg.spacing;
    let samples = SampleSeq::from_fn(lo, hi, |k| gen_experiment_signal(cfg, k as f64 * t));
    let gens = cfg.generators();
    let margin = match cfg.edge {
        EdgePolicy::Fixed(m) => m as i64,
        EdgePolicy::CommonInterior => {
            let h = gens.iter().map(|g| g.half_support()).fold(0.0, f64::max);
            if h.is_finite() {
                h.ceil() as i64
            } else {
                0
            }
        }
    };
    let (e0, e1) = (lo + margin, hi - margin);
    if e1 < e0 {
        return Err(SaftError::EmptyWindow);
    }
    let mut table = BTreeMap::new();
    for g in &gens {
        let mut row = Vec::with_capacity(cfg.delay_fractions.len());
        for tau in cfg.delays() {
            let est = fdf(&cfg.params, &samples, g, tau, t)?.window(e0, e1);
            let reference = SampleSeq::from_fn(e0, e1, |m| gen_experiment_signal(cfg, m as f64 * t - tau));
            row.push(psnr(&reference, &est)?);
        }
        table.insert(g.name().to_string(), row);
    }
    Ok(FdfReport {
        delays: cfg.delays(),
        delay_fractions: cfg.delay_fractions.clone(),
        psnr_by_generator: table,
        parameters: cfg.params,
        spacing: t,
        window: cfg.window,
        evaluated: (e0, e1),
    })
}
