//! `adsmagic` command-line front end: single points, sweeps to CSV, the
//! acceptance checks, and SVG plots of sweep files.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage or input error,
//! 3 numerical non-convergence.

pub mod compute;
pub mod config;
pub mod csvio;
pub mod format;
pub mod plot;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use adsmagic::background::AdsRadius;
use adsmagic::mana::build_state;
use adsmagic::series::DEFAULT_TOL;
use adsmagic::verify::{run_suite, Suite};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use compute::{evaluate, parse_radius, Method, Point};
use config::{layered, Config};
use csvio::{write_rows, SweepRow};
use format::number;

pub const DEFAULT_SIGMA: f64 = 1.0;
pub const DEFAULT_LAMBDA: f64 = 1.0;
pub const DEFAULT_R: f64 = 0.1;
pub const DEFAULT_OMEGA_MIN: f64 = 0.05;
pub const DEFAULT_OMEGA_MAX: f64 = 6.0;
pub const DEFAULT_OMEGA_STEPS: usize = 120;

/// Invalid flags, config entries or input files.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Some acceptance check failed.
#[derive(Debug)]
pub struct VerificationFailed(pub usize);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} check(s) failed", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

#[derive(Debug, Parser)]
#[command(name = "adsmagic", version, about = "Mana harvested by a qutrit detector in AdS")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate q, beta, the discriminant and the mana at one point.
    Eval(EvalArgs),
    /// Evaluate a (d, ell, omega) grid and write it as CSV.
    Sweep(SweepArgs),
    /// Run the acceptance checks.
    Verify(VerifyArgs),
    /// Draw a sweep CSV as an SVG line chart.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    /// Number of spatial dimensions.
    #[arg(long)]
    pub d: Option<u32>,
    /// AdS radius, or `minkowski`.
    #[arg(long, value_parser = parse_radius)]
    pub ell: Option<AdsRadius>,
    /// Radial position of the detector [default: 0.1].
    #[arg(long = "R")]
    pub r: Option<f64>,
    /// Gaussian switching width [default: 1].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Coupling constant [default: 1].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Energy gap.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Evaluation method [default: series].
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Regulator; selects the regulated series, required by quad.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Relative tolerance [default: 1e-14].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Flat `key = value` file supplying any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// d = 3, ell in {0.2, 0.5, 1, 5}.
    RadiusScan,
    /// ell = 1, d in {3, 4, 5, 6}.
    DimensionScan,
}

impl std::str::FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Preset as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    /// Comma-separated dimensions, e.g. `3,4,5`.
    #[arg(long = "d-list")]
    pub d_list: Option<String>,
    /// Comma-separated AdS radii; `minkowski` allowed.
    #[arg(long = "ell-list")]
    pub ell_list: Option<String>,
    /// Radial position [default: 0.1].
    #[arg(long = "R")]
    pub r: Option<f64>,
    /// [default: 1]
    #[arg(long)]
    pub sigma: Option<f64>,
    /// [default: 1]
    #[arg(long)]
    pub lambda: Option<f64>,
    /// [default: 0.05]
    #[arg(long = "omega-min")]
    pub omega_min: Option<f64>,
    /// [default: 6]
    #[arg(long = "omega-max")]
    pub omega_max: Option<f64>,
    /// Number of grid points, endpoints included [default: 120].
    #[arg(long = "omega-steps")]
    pub omega_steps: Option<usize>,
    /// [default: series]
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// [default: 1e-14]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Fills in the d and ell lists of one of the two standard figures.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Specfn,
    Identity,
    Limits,
    Figures,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: SuiteArg,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Sweep CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// SVG to write.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value = "omega")]
    pub x: String,
    #[arg(long, default_value = "mana")]
    pub y: String,
    #[arg(long = "group-by", default_value = "ell")]
    pub group_by: String,
    #[arg(long, default_value = "")]
    pub title: String,
}

/// Exit code for an error, following the contract in the crate docs.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<VerificationFailed>() {
            return 1;
        }
        if let Some(adsmagic::Error::NonConvergence { .. }) = cause.downcast_ref::<adsmagic::Error>() {
            return 3;
        }
    }
    2
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(&a, stdout, stderr),
        Command::Sweep(a) => cmd_sweep(&a, stdout, stderr),
        Command::Verify(a) => cmd_verify(&a, stdout),
        Command::Plot(a) => cmd_plot(&a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            exit_code(&e)
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(UsageError(format!("--{name} must be positive and finite (got {v})")).into())
    }
}

fn required<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| UsageError(format!("missing --{name} (flag or config key)")).into())
}

fn radius_from_config(config: &Config, key: &str) -> Result<Option<AdsRadius>> {
    config.raw(key).map(|v| parse_radius(v).map_err(|e| UsageError(e).into())).transpose()
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let c = Config::load(a.config.as_deref())?;
    let ell = match a.ell {
        Some(e) => Some(e),
        None => radius_from_config(&c, "ell")?,
    };
    let point = Point {
        d: required(layered(a.d, &c, "d")?, "d")?,
        ell: required(ell, "ell")?,
        r: layered(a.r, &c, "R")?.unwrap_or(DEFAULT_R),
        sigma: layered(a.sigma, &c, "sigma")?.unwrap_or(DEFAULT_SIGMA),
        lambda: layered(a.lambda, &c, "lambda")?.unwrap_or(DEFAULT_LAMBDA),
        omega: required(layered(a.omega, &c, "omega")?, "omega")?,
    };
    let method = layered(a.method, &c, "method")?.unwrap_or(Method::Series);
    let eps = layered(a.eps, &c, "eps")?.map(|e| positive("eps", e)).transpose()?;
    let tol = positive("tol", layered(a.tol, &c, "tol")?.unwrap_or(DEFAULT_TOL))?;
    let e = evaluate(&point, method, eps, tol).map_err(usage_unless_numerical)?;
    if e.capped {
        return Err(adsmagic::Error::NonConvergence {
            what: "eval",
            detail: format!("series reached the term cap; truncation bound {}", number(e.trunc_err)),
        }
        .into());
    }
    let state = build_state(e.q.clamp(0.0, 1.0), Complex64::new(e.beta, 0.0))?;
    let line = |k: &str, v: String| format!("{k:<15} = {v}\n");
    let mut s = String::new();
    s += &line("d", point.d.to_string());
    s += &line("ell", number(point.ell.as_f64()));
    s += &line("R", number(point.r));
    s += &line("sigma", number(point.sigma));
    s += &line("lambda", number(point.lambda));
    s += &line("omega", number(point.omega));
    s += &line("gamma", number(e.gamma));
    s += &line("alpha", e.alpha.map_or("n/a".into(), number));
    s += &line("method", e.method.to_string());
    s += &line("epsilon", number(e.epsilon));
    s += &line("q", number(e.q));
    s += &line("beta", number(e.beta));
    s += &line("delta", number(e.delta));
    s += &line("mana", number(e.mana));
    s += &line("harvestable", (e.delta > 0.0).to_string());
    s += &line("n_terms", e.n_terms.to_string());
    s += &line("trunc_err", number(e.trunc_err));
    s += &line("min_eigenvalue", number(state.min_eigenvalue()));
    out.write_all(s.as_bytes())?;
    if e.q > 0.1 {
        writeln!(err, "warning: q = {} exceeds 0.1; second-order perturbation theory is doubtful", number(e.q))?;
    }
    if state.min_eigenvalue() < 0.0 {
        writeln!(
            err,
            "note: the second-order density matrix has eigenvalue {} < 0 (expected at this order)",
            number(state.min_eigenvalue())
        )?;
    }
    Ok(())
}

/// Library errors other than non-convergence come from bad parameter values.
fn usage_unless_numerical(e: anyhow::Error) -> anyhow::Error {
    match e.downcast_ref::<adsmagic::Error>() {
        Some(adsmagic::Error::NonConvergence { .. }) | None => e,
        Some(other) => UsageError(other.to_string()).into(),
    }
}

fn parse_list<T, F>(text: &str, name: &str, parse: F) -> Result<Vec<T>>
where
    F: Fn(&str) -> Option<T>,
{
    let items: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        bail!(UsageError(format!("--{name} is empty")));
    }
    items
        .into_iter()
        .map(|s| parse(s).ok_or_else(|| UsageError(format!("--{name}: cannot parse {s:?}")).into()))
        .collect()
}

/// Fully resolved sweep parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub d_list: Vec<u32>,
    pub ell_list: Vec<AdsRadius>,
    pub r: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub omegas: Vec<f64>,
    pub method: Method,
    pub eps: Option<f64>,
    pub tol: f64,
}

pub fn resolve_sweep(a: &SweepArgs) -> Result<SweepSpec> {
    let c = Config::load(a.config.as_deref())?;
    let preset = layered(a.preset, &c, "preset")?;
    let (preset_d, preset_ell) = match preset {
        Some(Preset::RadiusScan) => (Some("3"), Some("0.2,0.5,1,5")),
        Some(Preset::DimensionScan) => (Some("3,4,5,6"), Some("1")),
        None => (None, None),
    };
    let d_text = layered(a.d_list.clone(), &c, "d-list")?.or(preset_d.map(String::from));
    let ell_text = layered(a.ell_list.clone(), &c, "ell-list")?.or(preset_ell.map(String::from));
    let d_list = parse_list(&required(d_text, "d-list")?, "d-list", |s| s.parse::<u32>().ok().filter(|&d| d >= 2))?;
    let ell_list = parse_list(&required(ell_text, "ell-list")?, "ell-list", |s| parse_radius(s).ok())?;
    let omega_min = positive("omega-min", layered(a.omega_min, &c, "omega-min")?.unwrap_or(DEFAULT_OMEGA_MIN))?;
    let omega_max = layered(a.omega_max, &c, "omega-max")?.unwrap_or(DEFAULT_OMEGA_MAX);
    let steps = layered(a.omega_steps, &c, "omega-steps")?.unwrap_or(DEFAULT_OMEGA_STEPS);
    if steps < 2 || !(omega_max > omega_min) {
        bail!(UsageError(format!(
            "need omega-steps >= 2 and omega-max > omega-min (got {steps}, [{omega_min}, {omega_max}])"
        )));
    }
    Ok(SweepSpec {
        d_list,
        ell_list,
        r: layered(a.r, &c, "R")?.unwrap_or(DEFAULT_R),
        sigma: layered(a.sigma, &c, "sigma")?.unwrap_or(DEFAULT_SIGMA),
        lambda: layered(a.lambda, &c, "lambda")?.unwrap_or(DEFAULT_LAMBDA),
        omegas: adsmagic::verify::linspace(omega_min, omega_max, steps),
        method: layered(a.method, &c, "method")?.unwrap_or(Method::Series),
        eps: layered(a.eps, &c, "eps")?.map(|e| positive("eps", e)).transpose()?,
        tol: positive("tol", layered(a.tol, &c, "tol")?.unwrap_or(DEFAULT_TOL))?,
    })
}

fn flag_for(err: &anyhow::Error) -> &'static str {
    match exit_code(err) {
        3 => "nonconvergence",
        _ => "error",
    }
}

/// Evaluates every grid point (in parallel) and returns rows ordered by
/// Rows in `(d, ell, omega)` order, d outermost.
pub fn sweep_rows(spec: &SweepSpec) -> Vec<SweepRow> {
    let mut points = Vec::new();
    for &d in &spec.d_list {
        for &ell in &spec.ell_list {
            for &omega in &spec.omegas {
                points.push(Point { d, ell, r: spec.r, sigma: spec.sigma, lambda: spec.lambda, omega });
            }
        }
    }
    points
        .par_iter()
        .map(|p| {
            let mut row = SweepRow {
                d: p.d,
                ell: p.ell.as_f64(),
                r: p.r,
                sigma: p.sigma,
                lambda: p.lambda,
                omega: p.omega,
                gamma: f64::NAN,
                q: f64::NAN,
                beta: f64::NAN,
                delta: f64::NAN,
                mana: f64::NAN,
                method: String::new(),
                epsilon: spec.eps.unwrap_or(0.0),
                n_terms: 0,
                trunc_err: f64::NAN,
                flag: "ok".into(),
            };
            match evaluate(p, spec.method, spec.eps, spec.tol) {
                Ok(e) => {
                    row.gamma = e.gamma;
                    row.q = e.q;
                    row.beta = e.beta;
                    row.delta = e.delta;
                    row.mana = e.mana;
                    row.method = e.method.into();
                    row.epsilon = e.epsilon;
                    row.n_terms = e.n_terms;
                    row.trunc_err = e.trunc_err;
                    if e.capped {
                        row.flag = "nonconvergence".into();
                    } else if e.q > 0.1 {
                        row.flag = "large_q".into();
                    }
                }
                Err(err) => {
                    row.method = format!("{:?}", spec.method).to_lowercase();
                    row.flag = flag_for(&err).into();
                }
            }
            row
        })
        .collect()
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let spec = resolve_sweep(a)?;
    if spec.method == Method::Quad && spec.eps.is_none() {
        bail!(UsageError("--method quad needs --eps > 0".into()));
    }
    let rows = sweep_rows(&spec);
    let bad = rows.iter().filter(|r| r.flag == "nonconvergence" || r.flag == "error").count();
    match &a.out {
        Some(path) => {
            let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_rows(std::io::BufWriter::new(file), &rows)?;
        }
        None => write_rows(&mut *out, &rows)?,
    }
    if bad > 0 {
        writeln!(err, "warning: {bad} of {} rows did not evaluate cleanly (see the flag column)", rows.len())?;
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<()> {
    let suite = match a.suite {
        SuiteArg::Specfn => Suite::Specfn,
        SuiteArg::Identity => Suite::Identity,
        SuiteArg::Limits => Suite::Limits,
        SuiteArg::Figures => Suite::Figures,
        SuiteArg::All => Suite::All,
    };
    let outcomes = run_suite(suite);
    for o in &outcomes {
        writeln!(out, "{o}")?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    writeln!(out, "summary: {} passed, {failed} failed", outcomes.len() - failed)?;
    if failed > 0 {
        return Err(VerificationFailed(failed).into());
    }
    Ok(())
}

fn cmd_plot(a: &PlotArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.input)
        .with_context(|| format!("reading {}", a.input.display()))
        .map_err(|e| UsageError(format!("{e:#}")))?;
    let series = plot::series_from_csv(&text, &a.x, &a.y, &a.group_by).map_err(|e| UsageError(format!("{e:#}")))?;
    let title = if a.title.is_empty() { format!("{} versus {}", a.y, a.x) } else { a.title.clone() };
    let svg = plot::render_svg(&series, &a.x, &a.y, &title)?;
    std::fs::write(&a.output, svg).with_context(|| format!("writing {}", a.output.display()))?;
    Ok(())
}
