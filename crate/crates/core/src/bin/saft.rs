use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use saft_core::convolution::{convolution_theorem_residual, dtsaft_energy, dtsaft_grid, riesz_bounds, saft_convolve};
use saft_core::experiment::{run_experiment, EdgePolicy, ExperimentConfig};
use saft_core::io::{read_seq_file, read_signal_file, write_sampled, write_seq, write_seq_file, write_signal_file};
use saft_core::params::{parse_preset, preset_vector, SaftParams, DEFAULT_TOL, PRESET_NAMES};
use saft_core::report::{Residual, RunReport};
use saft_core::sampling::{analyze, synthesize, BandlimitSpec};
use saft_core::shiftinv::{fdf, inverse_filter, Generator};
use saft_core::signal::{l2_norm, relative_l2_error, Axis, SampleSeq, Sampled, Signal, Spectrum, Summation, UniformGrid};
use saft_core::transform::{default_omega_grid, forward_with, inverse_with};
use saft_core::zak_poisson::{integer_spectrum, poisson_residual, zak, zak_isometry_residual_signal, zak_quasiperiod_factor};
use saft_core::{SaftError, C64};

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "saft", version, about = "Special affine Fourier transform toolkit")]
struct Cli {
    /// Parameters as a,b,c,d,p,q.
    #[arg(long, global = true, conflicts_with = "preset", allow_hyphen_values = true)]
    saft: Option<String>,
    /// Named preset, e.g. ft, frft:1.0, lct:2,1,3,2, experiment.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Determinant tolerance |ad - bc - 1|.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output CSV (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the JSON run report here.
    #[arg(long, global = true)]
    json_report: Option<PathBuf>,
    /// Exit with status 3 when a checked residual exceeds its threshold.
    #[arg(long, global = true)]
    assert: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct OmegaGrid {
    #[arg(long, allow_hyphen_values = true)]
    omega_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega_max: Option<f64>,
    #[arg(long)]
    omega_n: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Forward transform of a signal CSV.
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        omega: OmegaGrid,
        #[arg(long)]
        pairwise: bool,
    },
    /// Inverse transform of a spectrum CSV.
    Inverse {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t_max: Option<f64>,
        #[arg(long)]
        t_n: Option<usize>,
        #[arg(long)]
        pairwise: bool,
    },
    /// Transform-domain convolution of two signals on a shared step.
    Convolve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        with: PathBuf,
    },
    /// Transform of a finite sequence (`k,re,im`).
    Dtsaft {
        #[arg(long)]
        seq: PathBuf,
        #[command(flatten)]
        omega: OmegaGrid,
        /// Points for the one-period energy check.
        #[arg(long, default_value_t = 8192)]
        energy_points: usize,
    },
    /// Zak transform value at one point, with isometry and quasi-period checks.
    Zak {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long = "K", default_value_t = 64)]
        k: usize,
        #[arg(long, default_value_t = 128)]
        grid: usize,
    },
    /// Poisson summation residual for a signal.
    PoissonCheck {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "K", default_value_t = 64)]
        k: usize,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Riesz bounds of a generator's kernel.
    Riesz {
        #[arg(long, default_value = "power-cosine")]
        generator: String,
        #[arg(long = "K", default_value_t = 64)]
        k: usize,
        #[arg(long, default_value_t = 1024)]
        sweep: usize,
    },
    /// Sampling-theorem projection or interpolation of a signal.
    Sample {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, conflicts_with = "spacing")]
        sigma: Option<f64>,
        #[arg(long = "T")]
        spacing: Option<f64>,
        #[arg(long, default_value = "project")]
        mode: String,
        /// Coefficient index range lo,hi (default: atoms inside the grid).
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
    },
    /// Fractional delay of a sample sequence.
    Fdf {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "power-cosine")]
        generator: String,
        #[arg(long)]
        tau: f64,
        #[arg(long = "T")]
        spacing: f64,
    },
    /// Delay study with power-cosine and truncated sinc generators.
    Experiment {
        /// Sample index window lo,hi.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Sinc half-width in samples, or `full`.
        #[arg(long, default_value = "64")]
        sinc_half_width: String,
        /// `common` or a fixed number of excluded edge samples.
        #[arg(long, default_value = "common")]
        edge: String,
        /// Delays as fractions of T, comma separated.
        #[arg(long)]
        delays: Option<String>,
    },
    /// List presets.
    Presets,
}

struct Ctx {
    cli_params: Option<SaftParams>,
    out: Option<PathBuf>,
    report: RunReport,
}

impl Ctx {
    fn params(&self) -> Result<SaftParams, SaftError> {
        self.cli_params
            .ok_or_else(|| SaftError::InvalidArgument("pass --saft a,b,c,d,p,q or --preset NAME".into()))
    }

    fn check(&mut self, invariant: &str, value: f64, threshold: f64) {
        self.report.residuals.push(Residual::new(invariant, value, Some(threshold)));
    }

    fn detail(&mut self, key: &str, v: serde_json::Value) {
        self.report.details.insert(key.to_string(), v);
    }

    fn emit_sampled<A: Axis>(&self, s: &Sampled<A>) -> Result<(), SaftError> {
        match &self.out {
            Some(p) => write_signal_file(p, s),
            None => write_sampled(std::io::stdout().lock(), s),
        }
    }

    fn emit_seq(&self, s: &SampleSeq) -> Result<(), SaftError> {
        match &self.out {
            Some(p) => write_seq_file(p, s),
            None => write_seq(std::io::stdout().lock(), s),
        }
    }
}

fn parse_params(cli: &Cli) -> Result<Option<SaftParams>, SaftError> {
    let p = match (&cli.saft, &cli.preset) {
        (Some(s), _) => {
            let v: Vec<f64> = s
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| SaftError::InvalidArgument(format!("bad --saft `{s}`")))?;
            let arr: [f64; 6] = v
                .try_into()
                .map_err(|_| SaftError::InvalidArgument("--saft needs 6 numbers".into()))?;
            Some(SaftParams::with_tol(arr, cli.tol.unwrap_or(DEFAULT_TOL))?)
        }
        (None, Some(name)) => {
            let p = parse_preset(name)?;
            Some(match cli.tol {
                Some(t) => SaftParams::with_tol(p.to_array(), t)?,
                None => p,
            })
        }
        (None, None) => None,
    };
    Ok(p)
}

fn omega_grid(params: &SaftParams, f: &Signal, o: &OmegaGrid) -> Result<UniformGrid, SaftError> {
    match (o.omega_min, o.omega_max, o.omega_n) {
        (None, None, None) => Ok(default_omega_grid(params, f.grid())),
        (Some(lo), Some(hi), n) => UniformGrid::linspace(lo, hi, n.unwrap_or(f.grid().n())),
        _ => Err(SaftError::InvalidArgument("give both --omega-min and --omega-max".into())),
    }
}

fn pair(s: &str) -> Result<(i64, i64), SaftError> {
    let bad = || SaftError::InvalidArgument(format!("expected lo,hi, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn mode(pairwise: bool) -> Summation {
    if pairwise {
        Summation::Pairwise
    } else {
        Summation::Sequential
    }
}

fn run(cmd: &Cmd, ctx: &mut Ctx) -> Result<(), SaftError> {
    match cmd {
        Cmd::Transform { input, omega, pairwise } => {
            let p = ctx.params()?;
            let f: Signal = read_signal_file(input)?;
            let grid = omega_grid(&p, &f, omega)?;
            let spec = forward_with(&p, &f, &grid, mode(*pairwise));
            let nf = l2_norm(&f);
            if nf > 0.0 {
                ctx.check("parseval: |‖F‖ - ‖f‖| / ‖f‖", (l2_norm(&spec) - nf).abs() / nf, 1e-3);
            }
            ctx.emit_sampled(&spec)
        }
        Cmd::Inverse { input, t_min, t_max, t_n, pairwise } => {
            let p = ctx.params()?;
            let spec: Spectrum = read_signal_file(input)?;
            let grid = match (t_min, t_max) {
                (Some(lo), Some(hi)) => UniformGrid::linspace(*lo, *hi, t_n.unwrap_or(spec.len()))?,
                (None, None) => spec.grid().dual(p.b()),
                _ => return Err(SaftError::InvalidArgument("give both --t-min and --t-max".into())),
            };
            let f = inverse_with(&p, &spec, &grid, mode(*pairwise));
            ctx.emit_sampled(&f)
        }
        Cmd::Convolve { input, with } => {
            let p = ctx.params()?;
            let f: Signal = read_signal_file(input)?;
            let g: Signal = read_signal_file(with)?;
            let h = saft_convolve(&p, &f, &g)?;
            let grid = default_omega_grid(&p, f.grid());
            match convolution_theorem_residual(&p, &f, &g, &grid) {
                Ok(r) => ctx.check("convolution theorem: ‖H - conj(eta) F G‖ / ‖conj(eta) F G‖", r, 1e-3),
                Err(SaftError::DivisionByZeroNorm) => ctx.detail("theorem", json!("skipped: F G vanishes")),
                Err(e) => return Err(e),
            }
            ctx.emit_sampled(&h)
        }
        Cmd::Dtsaft { seq, omega, energy_points } => {
            let p = ctx.params()?;
            let s = read_seq_file(seq)?;
            let delta = p.delta().abs();
            let grid = match (omega.omega_min, omega.omega_max) {
                (Some(lo), Some(hi)) => UniformGrid::linspace(lo, hi, omega.omega_n.unwrap_or(1024))?,
                (None, None) => UniformGrid::new(0.0, delta / 1024.0, omega.omega_n.unwrap_or(1024))?,
                _ => return Err(SaftError::InvalidArgument("give both --omega-min and --omega-max".into())),
            };
            let spec = dtsaft_grid(&p, &s, &grid);
            let e = s.energy();
            if e > 0.0 {
                let q = dtsaft_energy(&p, &s, *energy_points);
                ctx.check("one-period energy vs sequence energy (relative)", (q - e).abs() / e, 1e-6);
            }
            ctx.emit_sampled(&spec)
        }
        Cmd::Zak { input, t, omega, k, grid } => {
            let p = ctx.params()?;
            let f: Signal = read_signal_file(input)?;
            let fun = |x: f64| f.interpolate(x);
            let z = zak(&p, &fun, *t, *omega, *k)?;
            let z2 = zak(&p, &fun, *t, *omega + p.delta(), *k)?;
            let factor = zak_quasiperiod_factor(&p, *omega)?;
            let quasi = (z2 - factor * z).norm() / z.norm().max(f64::MIN_POSITIVE);
            ctx.check("quasi-periodicity: |Z(t,w+Delta) - factor Z(t,w)| / |Z|", quasi, 1e-10);
            let iso = zak_isometry_residual_signal(&p, &f, *k, *grid, *grid)?;
            ctx.check("isometry: |‖Z‖² - ‖f‖²| / ‖f‖²", iso.residual, 1e-3);
            ctx.detail("zak", json!({"t": t, "omega": omega, "re": z.re, "im": z.im, "K": k}));
            ctx.detail("isometry", serde_json::to_value(iso).unwrap());
            Ok(())
        }
        Cmd::PoissonCheck { input, k, grid } => {
            let p = ctx.params()?;
            let f: Signal = read_signal_file(input)?;
            let f_int = integer_spectrum(&p, &f, *k);
            let h = p.delta() / *grid as f64;
            let ts: Vec<f64> = (0..*grid).map(|i| i as f64 * h).collect();
            let r = poisson_residual(&p, &|x| f.interpolate(x), &f_int, &ts, *k)?;
            ctx.check("poisson summation: max|LHS - RHS| / max|RHS|", r, 1e-3);
            ctx.detail("poisson", json!({"residual": r, "K": k, "grid": grid}));
            Ok(())
        }
        Cmd::Riesz { generator, k, sweep } => {
            let p = ctx.params()?;
            let g = Generator::by_name(generator)?;
            let b = riesz_bounds(&p, &|w| g.saft_spectrum(&p, w), *k, *sweep)?;
            ctx.detail("generator", json!(g.name()));
            ctx.detail("bounds", serde_json::to_value(b).unwrap());
            if let Ok(filter) = inverse_filter(&g) {
                ctx.detail("inverse_filter", serde_json::to_value(&filter).unwrap());
            }
            println!("eta1 = {:.12e}\neta2 = {:.12e}", b.eta1, b.eta2);
            Ok(())
        }
        Cmd::Sample { input, sigma, spacing, mode, range } => {
            let p = ctx.params()?;
            let f: Signal = read_signal_file(input)?;
            let spec = match (sigma, spacing) {
                (Some(s), None) => BandlimitSpec::from_sigma(&p, *s)?,
                (None, Some(t)) => BandlimitSpec::from_spacing(&p, *t)?,
                _ => return Err(SaftError::InvalidArgument("give --sigma or --T".into())),
            };
            let t = spec.spacing;
            let (lo, hi) = match range {
                Some(r) => pair(r)?,
                None => ((f.grid().t0() / t).ceil() as i64 + 2, (f.grid().last() / t).floor() as i64 - 2),
            };
            if hi < lo {
                return Err(SaftError::GridTooNarrow("no sample inside the signal grid".into()));
            }
            let coeffs = match mode.as_str() {
                "project" => analyze(&p, &f, t, lo..=hi)?.map(|_, v| v / t.sqrt()),
                "interpolate" => SampleSeq::from_fn(lo, hi, |k| f.interpolate(k as f64 * t)),
                m => return Err(SaftError::InvalidArgument(format!("unknown mode `{m}`"))),
            };
            let recon = synthesize(&p, &coeffs, t, f.grid());
            let rel = relative_l2_error(&recon, &f).unwrap_or(f64::NAN);
            ctx.detail("band", serde_json::to_value(spec).unwrap());
            ctx.detail(
                "coefficients",
                json!(coeffs.iter().map(|(k, v)| json!([k, v.re, v.im])).collect::<Vec<_>>()),
            );
            ctx.detail("relative_residual", json!(rel));
            ctx.detail("residual_norm", json!(l2_norm(&recon.axpy(C64::new(-1.0, 0.0), &f)?)));
            ctx.emit_sampled(&recon)
        }
        Cmd::Fdf { input, generator, tau, spacing } => {
            let p = ctx.params()?;
            let s = read_seq_file(input)?;
            let g = Generator::by_name(generator)?;
            let out = fdf(&p, &s, &g, *tau, *spacing)?;
            ctx.detail("generator", json!(g.name()));
            ctx.emit_seq(&out)
        }
        Cmd::Experiment { window, sinc_half_width, edge, delays } => {
            let mut cfg = match ctx.cli_params {
                Some(p) => ExperimentConfig::for_params(p),
                None => ExperimentConfig::default(),
            };
            if let Some(w) = window {
                cfg.window = pair(w)?;
            }
            cfg.sinc_half_width = match sinc_half_width.as_str() {
                "full" => None,
                h => Some(h.parse().map_err(|_| SaftError::InvalidArgument(format!("bad half-width `{h}`")))?),
            };
            cfg.edge = match edge.as_str() {
                "common" => EdgePolicy::CommonInterior,
                n => EdgePolicy::Fixed(n.parse().map_err(|_| SaftError::InvalidArgument(format!("bad edge `{n}`")))?),
            };
            if let Some(d) = delays {
                cfg.delay_fractions = d
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| SaftError::InvalidArgument(format!("bad delays `{d}`")))?;
            }
            let r = run_experiment(&cfg)?;
            let sinc_name = cfg.generators()[1].name().to_string();
            println!("tau/T    {:>14} {:>14}", "power-cosine", sinc_name);
            let pc = &r.psnr_by_generator["power-cosine"];
            let sc = &r.psnr_by_generator[&sinc_name];
            for (i, f) in r.delay_fractions.iter().enumerate() {
                println!("{f:<8.3} {:>14.3} {:>14.3}", pc[i], sc[i]);
                let margin = sc[i] - pc[i];
                ctx.check(&format!("psnr(sinc) - psnr(power-cosine) at tau = {f} T"), margin, 0.0);
            }
            ctx.report.params = Some(cfg.params);
            ctx.report.tolerances.insert("determinant".into(), cfg.params.tol());
            ctx.detail("config", serde_json::to_value(&cfg).unwrap());
            ctx.report.psnr = Some(r);
            Ok(())
        }
        Cmd::Presets => {
            let mut out = std::io::stdout().lock();
            for name in PRESET_NAMES {
                let args: &[f64] = match name {
                    "offset-ft" => &[0.5, -0.5],
                    "frft" => &[1.0],
                    "offset-frft" => &[1.0, 0.5, -0.5],
                    "lct" => &[2.0, 1.0, 3.0, 2.0],
                    "fresnel" | "time-shift" | "frequency-shift" | "time-scale" => &[2.0],
                    _ => &[],
                };
                let v = preset_vector(name, args).expect("listed preset");
                let usable = if v[1] == 0.0 { "  (b = 0: not an integral transform)" } else { "" };
                let shown = if args.is_empty() {
                    name.to_string()
                } else {
                    format!("{name}:{}", args.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
                };
                writeln!(out, "{shown:<28} {v:?}{usable}")?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let cli_params = match parse_params(&cli) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    let mut tolerances = BTreeMap::new();
    if let Some(p) = &cli_params {
        tolerances.insert("determinant".to_string(), p.tol());
    }
    let mut ctx = Ctx {
        cli_params,
        out: cli.out.clone(),
        report: RunReport {
            command: std::env::args().collect(),
            params: cli_params,
            tolerances,
            ..Default::default()
        },
    };
    if let Err(e) = run(&cli.cmd, &mut ctx) {
        // A closed downstream pipe (e.g. `| head`) is not a failure.
        if matches!(&e, SaftError::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe) {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: {e}");
        return ExitCode::from(if matches!(e, SaftError::Io(_)) { 1 } else { EXIT_VALIDATION });
    }
    ctx.report.wall_time_s = start.elapsed().as_secs_f64();
    for r in &ctx.report.residuals {
        let verdict = match r.pass {
            Some(true) => "ok",
            Some(false) => "FAIL",
            None => "-",
        };
        eprintln!("[{verdict}] {} = {:.3e}", r.invariant, r.value);
    }
    if let Some(path) = &cli.json_report {
        let text = serde_json::to_string_pretty(&ctx.report).expect("report serializes");
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    if cli.assert && ctx.report.failed() {
        return ExitCode::from(EXIT_NUMERIC);
    }
    ExitCode::SUCCESS
}
