//! Command-line front end: argument parsing, job resolution, reports, cache.

mod cache;
mod range;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use cache::Cache;
pub use range::IntRange;

use crate::error::{Error, Result};
use crate::quot_vi::{
    calibrate, vi_sum, Backend, CalibratedConvention, ConventionSearchSpace, SumOptions,
    VIConvention, VIInstance,
};
use crate::triangle::{
    build_alpha, derive_params, DNormalizationPolicy, Engine, ModuliInput, TriangleReport,
    VerifyOptions,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const WORKERS_ENV: &str = "SEGRE_VERLINDE_WORKERS";
pub const DEFAULT_CONFIG: &str = ".segre-verlinde/convention.json";
pub const DEFAULT_CACHE: &str = ".segre-verlinde/cache";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "segre-verlinde",
    version,
    about = "Verlinde, Quot-scheme and Segre numbers for moduli of bundles on curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Calibrated convention file written by `calibrate`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for the root-of-unity sums.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, default_value = "exact")]
    pub backend: Backend,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Defaults to the extension of `--out`, else JSON.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Include wall-clock timings in reports (makes output run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
    /// Use this normalized degree instead of the automatic choice.
    #[arg(long = "d-norm", global = true, allow_hyphen_values = true)]
    pub d_norm: Option<i64>,
    /// Maximum number of `d' -> d' + r` bumps while waiting for stabilization.
    #[arg(long, global = true, default_value_t = 10)]
    pub stabilization_cap: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Clone)]
pub struct RangeArgs {
    #[arg(long)]
    pub g: IntRange,
    #[arg(long)]
    pub r: IntRange,
    #[arg(long, allow_hyphen_values = true)]
    pub d: IntRange,
    #[arg(long)]
    pub ell: IntRange,
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct ViArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub g: u32,
    #[arg(long)]
    pub d: u64,
    /// Power of `a_r`; defaults to `vdim / r`.
    #[arg(long)]
    pub exponent: Option<u64>,
}

#[derive(Debug, Args, Clone)]
pub struct FitArgs {
    #[arg(long)]
    pub g: u32,
    #[arg(long)]
    pub r: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long)]
    pub ell: IntRange,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the derived parameters (h, n, d', N, vdim, alpha).
    Params(RangeArgs),
    /// Evaluate one virtual intersection on a Quot scheme.
    Vi(ViArgs),
    /// Verlinde numbers over a range of inputs.
    Verlinde(RangeArgs),
    /// Top Segre numbers over a range of inputs.
    Segre(RangeArgs),
    /// Full consistency report per input.
    Verify(RangeArgs),
    /// Corner values with integrality and d-shift checks only.
    Sweep(RangeArgs),
    /// Exact polynomial in the level.
    Fit(FitArgs),
    /// Search for the unique convention passing the oracle battery.
    Calibrate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Params,
    Vi,
    Verlinde,
    Segre,
    Verify,
    Sweep,
    Fit,
    Calibrate,
}

/// A fully resolved job. Only the fields that determine the output are
/// serialized into reports.
#[derive(Debug, Clone, Serialize)]
pub struct JobSpec {
    pub command: CommandKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<IntRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<IntRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<IntRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<IntRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vi: Option<ViArgs>,
    pub backend: Backend,
    pub policy: DNormalizationPolicy,
    #[serde(skip)]
    pub workers: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub config: PathBuf,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    #[serde(skip)]
    pub timings: bool,
}

/// Flag, then `SEGRE_VERLINDE_WORKERS`, then the machine's parallelism.
pub fn resolve_workers(flag: Option<usize>) -> Result<usize> {
    let workers = match flag {
        Some(w) => w,
        None => match std::env::var(WORKERS_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| {
                Error::Config(format!("{WORKERS_ENV}={v:?} is not a positive integer"))
            })?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if workers == 0 {
        return Err(Error::Config("worker count must be positive".into()));
    }
    Ok(workers)
}

impl JobSpec {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let gl = &cli.global;
        let format = gl.format.unwrap_or_else(|| match &gl.out {
            Some(p) if p.extension().is_some_and(|e| e == "csv") => Format::Csv,
            _ => Format::Json,
        });
        let policy = match gl.d_norm {
            Some(d) => DNormalizationPolicy::Fixed(d),
            None => DNormalizationPolicy::Auto {
                cap: gl.stabilization_cap,
            },
        };
        let mut spec = JobSpec {
            command: CommandKind::Calibrate,
            g: None,
            r: None,
            d: None,
            ell: None,
            vi: None,
            backend: gl.backend,
            policy,
            workers: resolve_workers(gl.workers)?,
            out: gl.out.clone(),
            format,
            config: gl
                .config
                .clone()
                .unwrap_or_else(|| PathBuf::from(DEFAULT_CONFIG)),
            cache_dir: if gl.no_cache {
                None
            } else {
                Some(
                    gl.cache_dir
                        .clone()
                        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE)),
                )
            },
            timings: gl.timings,
        };
        let ranges = |spec: &mut JobSpec, a: &RangeArgs| {
            spec.g = Some(a.g);
            spec.r = Some(a.r);
            spec.d = Some(a.d);
            spec.ell = Some(a.ell);
        };
        spec.command = match &cli.command {
            Command::Params(a) => {
                ranges(&mut spec, a);
                CommandKind::Params
            }
            Command::Verlinde(a) => {
                ranges(&mut spec, a);
                CommandKind::Verlinde
            }
            Command::Segre(a) => {
                ranges(&mut spec, a);
                CommandKind::Segre
            }
            Command::Verify(a) => {
                ranges(&mut spec, a);
                CommandKind::Verify
            }
            Command::Sweep(a) => {
                ranges(&mut spec, a);
                CommandKind::Sweep
            }
            Command::Vi(a) => {
                spec.vi = Some(a.clone());
                CommandKind::Vi
            }
            Command::Fit(a) => {
                spec.g = Some(IntRange::single(a.g as i64));
                spec.r = Some(IntRange::single(a.r as i64));
                spec.d = Some(IntRange::single(a.d));
                spec.ell = Some(a.ell);
                CommandKind::Fit
            }
            Command::Calibrate => CommandKind::Calibrate,
        };
        Ok(spec)
    }

    /// Every input in the Cartesian product, validated before any work.
    pub fn inputs(&self) -> Result<Vec<ModuliInput>> {
        let (Some(g), Some(r), Some(d), Some(ell)) = (self.g, self.r, self.d, self.ell) else {
            return Err(Error::InvalidParameters("missing parameter ranges".into()));
        };
        let to_u32 = |v: i64, what: &str| {
            u32::try_from(v)
                .map_err(|_| Error::InvalidParameters(format!("{what}={v} out of range")))
        };
        let mut out = vec![];
        for g in g.values() {
            for r in r.values() {
                for d in d.values() {
                    for l in ell.values() {
                        out.push(ModuliInput::new(
                            to_u32(g, "g")?,
                            to_u32(r, "r")?,
                            d,
                            to_u32(l, "ell")?,
                        )?);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sum_options(&self) -> SumOptions {
        SumOptions {
            backend: self.backend,
            workers: self.workers,
            ..SumOptions::default()
        }
    }

    fn engine(&self) -> Result<Engine> {
        let conv = CalibratedConvention::load(&self.config).map_err(|e| match e {
            Error::Calibration(m) => Error::Config(m),
            other => other,
        })?;
        Ok(Engine::new(conv, self.sum_options()).with_policy(self.policy))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregateVerdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct JobTimings {
    pub total_ms: u128,
}

/// Versioned report written by `verify` and `sweep`.
#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub job: JobSpec,
    pub convention: VIConvention,
    pub records: Vec<TriangleReport>,
    pub verdict: AggregateVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<JobTimings>,
}

impl ReportFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record([
            "g",
            "r",
            "d",
            "d_norm",
            "ell",
            "n",
            "N",
            "verlinde",
            "quot",
            "segre",
            "independent",
            "verdict",
        ])
        .expect("in-memory write");
        let opt =
            |v: &Option<num_bigint::BigInt>| v.as_ref().map_or(String::new(), |x| x.to_string());
        for rec in &self.records {
            let i = &rec.input;
            let (d_norm, n, big_n) = rec
                .params
                .map_or((String::new(), String::new(), String::new()), |p| {
                    (p.d_norm.to_string(), p.n.to_string(), p.big_n.to_string())
                });
            w.write_record([
                i.g.to_string(),
                i.r.to_string(),
                i.d.to_string(),
                d_norm,
                i.level.to_string(),
                n,
                big_n,
                opt(&rec.verlinde),
                opt(&rec.quot),
                opt(&rec.segre),
                rec.segre_independent.to_string(),
                if rec.passes() { "pass" } else { "fail" }.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameters(_)
        | Error::Config(_)
        | Error::Io(_)
        | Error::DegreeMismatch { .. } => EXIT_INVALID,
        _ => EXIT_MISMATCH,
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, text)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the job.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_PASS
            };
        }
    };
    match JobSpec::from_cli(&cli) {
        Ok(spec) => run(&spec),
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(spec: &JobSpec) -> i32 {
    let result = match spec.command {
        CommandKind::Calibrate => run_calibrate(spec),
        CommandKind::Params => run_params(spec),
        CommandKind::Vi => run_vi(spec),
        CommandKind::Verlinde | CommandKind::Segre => run_values(spec),
        CommandKind::Verify | CommandKind::Sweep => run_report(spec),
        CommandKind::Fit => run_fit(spec),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn run_calibrate(spec: &JobSpec) -> Result<i32> {
    match calibrate(&ConventionSearchSpace::default()) {
        Ok(cal) => {
            cal.convention.save(&spec.config)?;
            let c = cal.convention.convention();
            let text = format!(
                "{}unique convention: root_target={:+} phase={:+} weight_exponent_tweak={:+}\nwritten to {}\n",
                cal.matrix,
                i8::from(c.root_target),
                c.phase,
                c.weight_exponent_tweak,
                spec.config.display()
            );
            emit(&spec.out, &text)?;
            Ok(EXIT_PASS)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(EXIT_INVALID)
        }
    }
}

fn run_params(spec: &JobSpec) -> Result<i32> {
    let mut text = String::new();
    for input in spec.inputs()? {
        let p = derive_params(&input, &spec.policy)?;
        let a = build_alpha(&input, &p);
        text += &format!(
            "g={} r={} d={} ell={} h={} r0={} d0={} d'={} d0'={} n={} N={} vdim={} rank_alpha={} deg_alpha={} rank_alpha_M={}\n",
            input.g, input.r, input.d, input.level, p.h, p.r0, p.d0, p.d_norm, p.d0_norm, p.n,
            p.big_n, p.vdim, a.alpha.rank, a.alpha.degree, a.rank_alpha_m
        );
    }
    emit(&spec.out, &text)?;
    Ok(EXIT_PASS)
}

fn run_vi(spec: &JobSpec) -> Result<i32> {
    let a = spec.vi.as_ref().expect("vi arguments");
    let inst = match a.exponent {
        Some(e) => VIInstance::new(a.n, a.r, a.g, a.d, e)?,
        None => VIInstance::with_matching_exponent(a.n, a.r, a.g, a.d)?,
    };
    let conv = spec.engine()?;
    let value = vi_sum(&inst, conv.convention().convention(), &spec.sum_options())?;
    emit(&spec.out, &format!("{value}\n"))?;
    Ok(EXIT_PASS)
}

fn run_values(spec: &JobSpec) -> Result<i32> {
    let inputs = spec.inputs()?;
    let engine = spec.engine()?;
    let mut text = String::new();
    let mut code = EXIT_PASS;
    for input in inputs {
        let prefix = format!(
            "g={} r={} d={} ell={}",
            input.g, input.r, input.d, input.level
        );
        let line = if spec.command == CommandKind::Segre {
            engine
                .segre_number(&input)
                .map(|s| format!("segre={} independent={}", s.value, s.independent))
        } else {
            engine
                .verlinde_number(&input)
                .map(|v| format!("verlinde={v}"))
        };
        match line {
            Ok(l) => text += &format!("{prefix} {l}\n"),
            Err(e) => {
                text += &format!("{prefix} error=\"{e}\"\n");
                code = code.max(exit_code(&e));
            }
        }
    }
    emit(&spec.out, &text)?;
    Ok(code)
}

fn run_report(spec: &JobSpec) -> Result<i32> {
    let start = Instant::now();
    let inputs = spec.inputs()?;
    let engine = spec.engine()?;
    let options = if spec.command == CommandKind::Sweep {
        VerifyOptions {
            level_rank: false,
            exponent: false,
            timings: spec.timings,
        }
    } else {
        VerifyOptions {
            timings: spec.timings,
            ..VerifyOptions::default()
        }
    };
    let command = if spec.command == CommandKind::Sweep {
        "sweep"
    } else {
        "verify"
    };
    let conv = *engine.convention().convention();
    let mut cache = spec.cache_dir.as_deref().map(Cache::new);
    let mut records = Vec::with_capacity(inputs.len());
    for input in &inputs {
        let key = Cache::key(command, input, &spec.policy, &conv, spec.backend);
        let cached = cache.as_mut().and_then(|c| c.lookup(&key));
        let report = match cached {
            Some(rep) if rep.input == *input => rep,
            _ => {
                let rep = engine.verify_triangle(input, &options);
                if let Some(c) = &cache {
                    if rep.error.is_none() {
                        if let Err(e) = c.store(&key, &rep) {
                            log::warn!("could not write cache entry: {e}");
                        }
                    }
                }
                rep
            }
        };
        records.push(report);
    }
    let verdict = if records.iter().all(|r| r.passes()) {
        AggregateVerdict::Pass
    } else {
        AggregateVerdict::Fail
    };
    let passed = records.iter().filter(|r| r.passes()).count();
    let file = ReportFile {
        schema_version: SCHEMA_VERSION,
        job: spec.clone(),
        convention: conv,
        records,
        verdict,
        timings: spec.timings.then(|| JobTimings {
            total_ms: start.elapsed().as_millis(),
        }),
    };
    let text = match spec.format {
        Format::Json => file.to_json(),
        Format::Csv => file.to_csv(),
    };
    emit(&spec.out, &text)?;
    eprintln!("{passed}/{} records pass", file.records.len());
    if let Some(c) = &cache {
        eprintln!("cache: {} hit(s), {} miss(es)", c.hits, c.misses);
    }
    Ok(match verdict {
        AggregateVerdict::Pass => EXIT_PASS,
        AggregateVerdict::Fail => EXIT_MISMATCH,
    })
}

fn run_fit(spec: &JobSpec) -> Result<i32> {
    let (g, r, d, ell) = (
        spec.g.expect("g").start,
        spec.r.expect("r").start,
        spec.d.expect("d").start,
        spec.ell.expect("ell"),
    );
    ModuliInput::new(g as u32, r as u32, d, ell.start.max(1) as u32)?;
    if ell.start < 1 {
        return Err(Error::InvalidParameters("levels must be >= 1".into()));
    }
    let engine = spec.engine()?;
    let poly =
        engine.fit_level_polynomial(g as u32, r as u32, d, ell.start as u32..=ell.end as u32)?;
    let text = serde_json::to_string_pretty(&poly).expect("fit serializes") + "\n";
    emit(&spec.out, &text)?;
    Ok(EXIT_PASS)
}
