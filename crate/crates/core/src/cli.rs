//! Command-line front end.
//!
//! Parameters come from flags, optionally layered over a JSON config file
//! (`--config`); flags win. Tables are CSV, reports JSON. The primary output
//! goes to `--out` when given and to stdout otherwise; summaries and errors go
//! to stderr.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, and any check passed |
//! | 1 | runtime failure (quadrature non-convergence, I/O) |
//! | 2 | invalid arguments, config or domain (including poles) |
//! | 3 | fit rejected (`r²` below threshold) |
//! | 4 | a check ran but exceeded its tolerance |

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Result, SmlError};
use crate::exponent_regions::{boundary_table, boundary_table_csv, classify, p_range};
use crate::output::csv_row;
use crate::quadrature::{lp_norm_radial, QuadratureSpec};
use crate::radial_fourier::{multiplier_decay_check, multiplier_m, sphere_fourier, MeansSpec};
use crate::scaling_lab::{dyadic_lambdas, Quantity, ScalingLab, SweepGeometry, DEFAULT_C0, DEFAULT_FAR_RADIUS};
use crate::special_functions::{bessel_j_with_route, BesselRoute};
use crate::spherical_means::{
    evaluate_mean, evaluations_to_csv, gaussian_fourier_profile, mean_direct_oracle, mean_of_radial_transform,
    GAUSSIAN_SUPPORT,
};
use crate::test_function::{f_lambda, f_lambda_profile_for, TestFunctionSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_FIT_REJECTED: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

pub const DEFAULT_SLOPE_TOLERANCE: f64 = 0.05;
pub const DEFAULT_ORACLE_TOLERANCE: f64 = 1e-6;
const ORACLE_REFINEMENT_TOL: f64 = 1e-9;
const ORACLE_RADII: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

#[derive(Debug, Parser)]
#[command(name = "sml", version, about = "Generalized spherical means laboratory")]
pub struct Cli {
    /// JSON file with default parameters; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Pass/fail tolerance for checking commands.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bessel function J_β(r) of complex order.
    Bessel(BesselArgs),
    /// Fourier transform of the unit sphere's surface measure, ϑ(s).
    Theta(ThetaArgs),
    /// Multiplier m^α(s), or its decay table over a grid.
    Multiplier(MultiplierArgs),
    /// Test function f_λ: one value, its profile, or L^p norms.
    Testfn(TestfnArgs),
    /// A_t^α f_λ at one radius over λ and t grids.
    Mean(MeanArgs),
    /// λ-sweep and exponent fit, or the necessity report.
    Scaling(ScalingArgs),
    /// Necessary vs sufficient thresholds, or one classified point.
    Regions(RegionsArgs),
    /// Multiplier route vs direct ball integral on a Gaussian.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteArg {
    Auto,
    Series,
    Asymptotic,
    Both,
}

#[derive(Debug, Args)]
pub struct BesselArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub order_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub order_im: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    #[arg(long, value_enum)]
    pub route: Option<RouteArg>,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AlphaArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_im: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MultiplierArgs {
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Comma-separated grid; emits the decay table as CSV.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub s_grid: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct TestfnArgs {
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Evaluate at this radius only.
    #[arg(long, allow_negative_numbers = true)]
    pub radius: Option<f64>,
    /// Comma-separated exponents; prints the L^p norms.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub t: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub radius: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[arg(long)]
    pub quantity: Option<Quantity>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub radius: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c0: Option<f64>,
    /// Assemble both necessary conditions instead of a single fit.
    #[arg(long)]
    pub necessity: bool,
    /// Emit CSV instead of JSON (single fits only).
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args)]
pub struct RegionsArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub p_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub step: Option<f64>,
    /// With --re-alpha, classify the single point (p, Re α).
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub re_alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Comma-separated radii (default 0,0.5,1,2).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub radius: Option<Vec<f64>>,
}

/// Overrides applied to the command's default quadrature spec.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOverrides {
    pub nodes_per_panel: Option<usize>,
    pub max_phase_per_panel: Option<f64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
}

impl QuadratureOverrides {
    fn apply(&self, base: QuadratureSpec) -> Result<QuadratureSpec> {
        let spec = QuadratureSpec {
            nodes_per_panel: self.nodes_per_panel.unwrap_or(base.nodes_per_panel),
            max_phase_per_panel: self.max_phase_per_panel.unwrap_or(base.max_phase_per_panel),
            abs_tol: self.abs_tol.unwrap_or(base.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(base.rel_tol),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: Option<u32>,
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    pub p: Option<f64>,
    pub p_list: Option<Vec<f64>>,
    pub lambda: Option<f64>,
    pub lambdas: Option<Vec<f64>>,
    pub t: Option<f64>,
    pub t_grid: Option<Vec<f64>>,
    pub radius: Option<f64>,
    pub radii: Option<Vec<f64>>,
    pub c0: Option<f64>,
    pub quantity: Option<Quantity>,
    pub necessity: Option<bool>,
    pub order_re: Option<f64>,
    pub order_im: Option<f64>,
    pub r: Option<f64>,
    pub route: Option<RouteArg>,
    pub s: Option<f64>,
    pub s_grid: Option<Vec<f64>>,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
    pub step: Option<f64>,
    pub re_alpha: Option<f64>,
    pub quadrature: Option<QuadratureOverrides>,
    pub out: Option<PathBuf>,
    pub tolerance: Option<f64>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| SmlError::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| SmlError::InvalidInput(format!("bad config {}: {e}", path.display())))
    }

    fn quad(&self, base: QuadratureSpec) -> Result<QuadratureSpec> {
        self.quadrature.unwrap_or_default().apply(base)
    }
}

fn need<T>(value: Option<T>, name: &'static str) -> Result<T> {
    value.ok_or(SmlError::MissingParameter(name))
}

fn means_spec(a: &AlphaArgs, cfg: &RunConfig) -> Result<MeansSpec> {
    let n = need(a.n.or(cfg.n), "n")?;
    let re = a.alpha_re.or(cfg.alpha_re).unwrap_or(0.0);
    let im = a.alpha_im.or(cfg.alpha_im).unwrap_or(0.0);
    MeansSpec::new(Complex64::new(re, im), n)
}

/// `a+bi` with `-0` shown as `0`, so identical values print identically.
fn show_complex(z: Complex64) -> String {
    format!("{}", Complex64::new(z.re + 0.0, z.im + 0.0))
}

pub fn exit_code(err: &SmlError) -> i32 {
    match err {
        SmlError::Pole(_) | SmlError::Domain(_) | SmlError::InvalidInput(_) | SmlError::MissingParameter(_) => {
            EXIT_VALIDATION
        }
        SmlError::FitRejected(_) => EXIT_FIT_REJECTED,
        SmlError::NonConvergence(_) | SmlError::Io(_) => EXIT_RUNTIME,
    }
}

/// What a command produced: the primary text and whether its check passed.
struct Outcome {
    primary: String,
    summary: String,
    passed: bool,
}

impl Outcome {
    fn ok(primary: String) -> Self {
        Self { primary, summary: String::new(), passed: true }
    }
}

struct Context {
    cfg: RunConfig,
    tolerance: Option<f64>,
}

fn cmd_bessel(a: &BesselArgs, ctx: &Context) -> Result<Outcome> {
    let cfg = &ctx.cfg;
    let beta = Complex64::new(a.order_re.or(cfg.order_re).unwrap_or(0.0), a.order_im.or(cfg.order_im).unwrap_or(0.0));
    let r = need(a.r.or(cfg.r), "r")?;
    let route = a.route.or(cfg.route).unwrap_or(RouteArg::Auto);
    let single = |route| bessel_j_with_route(beta, r, route);
    Ok(match route {
        RouteArg::Auto => Outcome::ok(format!("{}\n", show_complex(single(BesselRoute::Auto)?))),
        RouteArg::Series => Outcome::ok(format!("{}\n", show_complex(single(BesselRoute::Series)?))),
        RouteArg::Asymptotic => Outcome::ok(format!("{}\n", show_complex(single(BesselRoute::Asymptotic)?))),
        RouteArg::Both => {
            let s = single(BesselRoute::Series)?;
            let w = single(BesselRoute::Asymptotic)?;
            let scale = s.norm().max(w.norm()).max(f64::MIN_POSITIVE);
            Outcome::ok(format!(
                "series {}\nasymptotic {}\nrelative_difference {:e}\n",
                show_complex(s),
                show_complex(w),
                (s - w).norm() / scale
            ))
        }
    })
}

fn cmd_theta(a: &ThetaArgs, ctx: &Context) -> Result<Outcome> {
    let n = need(a.n.or(ctx.cfg.n), "n")?;
    let s = need(a.s.or(ctx.cfg.s), "s")?;
    Ok(Outcome::ok(format!("{}\n", sphere_fourier(n, s)?.re)))
}

fn cmd_multiplier(a: &MultiplierArgs, ctx: &Context) -> Result<Outcome> {
    let spec = means_spec(&a.alpha, &ctx.cfg)?;
    if let Some(grid) = a.s_grid.clone().or_else(|| ctx.cfg.s_grid.clone()) {
        let table = multiplier_decay_check(&spec, &grid)?;
        let mut out = Outcome::ok(table.to_csv());
        if table.any_flagged() {
            out.summary = "some rows exceed twice the median normalized size\n".into();
        }
        return Ok(out);
    }
    let s = need(a.s.or(ctx.cfg.s), "s")?;
    Ok(Outcome::ok(format!("{}\n", show_complex(multiplier_m(&spec, s)?))))
}

fn cmd_testfn(a: &TestfnArgs, ctx: &Context) -> Result<Outcome> {
    let cfg = &ctx.cfg;
    let spec = means_spec(&a.alpha, cfg)?;
    let tf = TestFunctionSpec::new(spec, need(a.lambda.or(cfg.lambda), "lambda")?)?;
    let quad = cfg.quad(QuadratureSpec::default())?;
    if let Some(radius) = a.radius.or(cfg.radius) {
        return Ok(Outcome::ok(format!("{}\n", show_complex(f_lambda(&tf, radius, &quad)?))));
    }
    let ps = a.p.clone().or_else(|| cfg.p_list.clone()).or_else(|| cfg.p.map(|p| vec![p]));
    match ps {
        Some(ps) => {
            if let Some(bad) = ps.iter().find(|p| !(**p >= 1.0) || !p.is_finite()) {
                return Err(SmlError::InvalidInput(format!("p must be finite and >= 1, got {bad}")));
            }
            let p_min = ps.iter().copied().fold(f64::INFINITY, f64::min);
            let profile = f_lambda_profile_for(&tf, p_min, &quad)?;
            let mut text = String::from("p,norm\n");
            for p in ps {
                text.push_str(&csv_row(&[p, lp_norm_radial(&profile, p, spec.n)?]));
            }
            Ok(Outcome::ok(text))
        }
        None => Ok(Outcome::ok(f_lambda_profile_for(&tf, 1.0, &quad)?.to_csv())),
    }
}

fn cmd_mean(a: &MeanArgs, ctx: &Context) -> Result<Outcome> {
    let cfg = &ctx.cfg;
    let spec = means_spec(&a.alpha, cfg)?;
    let lambdas = a
        .lambdas
        .clone()
        .or_else(|| cfg.lambdas.clone())
        .or_else(|| cfg.lambda.map(|l| vec![l]))
        .ok_or(SmlError::MissingParameter("lambdas"))?;
    let ts = a.t.clone().or_else(|| cfg.t_grid.clone()).or_else(|| cfg.t.map(|t| vec![t])).unwrap_or_else(|| vec![1.0]);
    if ts.is_empty() || lambdas.is_empty() {
        return Err(SmlError::InvalidInput("lambdas and t must be nonempty".into()));
    }
    let radius = a.radius.or(cfg.radius).unwrap_or(0.0);
    let quad = cfg.quad(QuadratureSpec::default())?;
    let mut rows = Vec::with_capacity(lambdas.len() * ts.len());
    let mut summary = String::new();
    for &lambda in &lambdas {
        let tf = TestFunctionSpec::new(spec, lambda)?;
        let start = rows.len();
        for &t in &ts {
            rows.push(evaluate_mean(&spec, t, &tf, radius, &quad)?);
        }
        if ts.len() > 1 {
            let best = rows[start..]
                .iter()
                .fold(None::<(f64, f64)>, |acc, e| match acc {
                    Some((_, m)) if m >= e.value.norm() => acc,
                    _ => Some((e.t, e.value.norm())),
                })
                .expect("nonempty t grid");
            summary.push_str(&format!("lambda {lambda}: max |A_t f| = {:e} at t = {}\n", best.1, best.0));
        }
    }
    Ok(Outcome { primary: evaluations_to_csv(&rows), summary, passed: true })
}

fn cmd_scaling(a: &ScalingArgs, ctx: &Context) -> Result<Outcome> {
    let cfg = &ctx.cfg;
    let spec = means_spec(&a.alpha, cfg)?;
    let p = a.p.or(cfg.p);
    let lambdas = a.lambdas.clone().or_else(|| cfg.lambdas.clone()).unwrap_or_else(|| dyadic_lambdas(8, 11));
    let geometry = SweepGeometry {
        far_radius: a.radius.or(cfg.radius).unwrap_or(DEFAULT_FAR_RADIUS),
        t: a.t.or(cfg.t),
        c0: a.c0.or(cfg.c0).unwrap_or(DEFAULT_C0),
    };
    let tolerance = ctx.tolerance.unwrap_or(DEFAULT_SLOPE_TOLERANCE);
    let lab = ScalingLab::new(cfg.quad(QuadratureSpec::sweep())?, geometry)?;
    if a.necessity || cfg.necessity.unwrap_or(false) {
        let report = lab.necessity_report(&spec, need(p, "p")?, &lambdas)?;
        let passed = report.bounds.iter().all(|b| b.slack <= tolerance);
        return Ok(Outcome { primary: report.to_json(), summary: report.summary(), passed });
    }
    let quantity = need(a.quantity.or(cfg.quantity), "quantity")?;
    let fit = lab.run(quantity, &spec, p, &lambdas)?;
    let passed = fit.delta.abs() <= tolerance;
    let summary = format!(
        "{}: slope {:.6} vs predicted {:.6} (delta {:.2e}, r² {:.6}) {}\n",
        fit.quantity,
        fit.slope,
        fit.predicted,
        fit.delta,
        fit.r_squared,
        if passed { "ok" } else { "OUT OF TOLERANCE" }
    );
    let primary = if a.csv { fit.to_csv() } else { fit.to_json() };
    Ok(Outcome { primary, summary, passed })
}

fn cmd_regions(a: &RegionsArgs, ctx: &Context) -> Result<Outcome> {
    let cfg = &ctx.cfg;
    let n = need(a.n.or(cfg.n), "n")?;
    if let (Some(p), Some(re_alpha)) = (a.p.or(cfg.p), a.re_alpha.or(cfg.re_alpha)) {
        let verdict = classify(n, p, re_alpha)?;
        return Ok(Outcome::ok(serde_json::to_string_pretty(&verdict).expect("verdict serializes") + "\n"));
    }
    let grid = p_range(
        a.p_min.or(cfg.p_min).unwrap_or(2.0),
        a.p_max.or(cfg.p_max).unwrap_or(10.0),
        a.step.or(cfg.step).unwrap_or(0.5),
    )?;
    Ok(Outcome::ok(boundary_table_csv(&boundary_table(n, &grid)?)?))
}

fn cmd_oracle_check(a: &OracleArgs, ctx: &Context) -> Result<Outcome> {
    let cfg = &ctx.cfg;
    let spec = means_spec(&a.alpha, cfg)?;
    if !(spec.re_alpha() > 0.0) {
        return Err(SmlError::Domain(format!("the direct oracle needs Re α > 0, got {}", spec.alpha)));
    }
    let t = a.t.or(cfg.t).unwrap_or(1.0);
    let radii = a.radius.clone().or_else(|| cfg.radii.clone()).unwrap_or_else(|| ORACLE_RADII.to_vec());
    let tolerance = ctx.tolerance.unwrap_or(DEFAULT_ORACLE_TOLERANCE);
    let quad = cfg.quad(QuadratureSpec::default())?;
    let gaussian = |r: f64| Complex64::new((-std::f64::consts::PI * r * r).exp(), 0.0);
    let mut text = String::from("radius,multiplier_re,multiplier_im,direct_re,direct_im,rel_error,pass\n");
    let mut passed = true;
    for radius in radii {
        let m = mean_of_radial_transform(&spec, t, gaussian_fourier_profile, GAUSSIAN_SUPPORT, radius, &quad)?;
        let d = mean_direct_oracle(&spec, t, gaussian, radius, ORACLE_REFINEMENT_TOL)?;
        let rel = (m - d).norm() / d.norm();
        let ok = rel < tolerance;
        passed &= ok;
        let row = csv_row(&[radius, m.re, m.im, d.re, d.im, rel]);
        text.push_str(&format!("{},{}\n", row.trim_end(), if ok { "pass" } else { "fail" }));
    }
    let summary = format!("oracle check {} (tolerance {tolerance:e})\n", if passed { "PASS" } else { "FAIL" });
    Ok(Outcome { primary: text, summary, passed })
}

fn dispatch(cli: &Cli, ctx: &Context) -> Result<Outcome> {
    if let Some(tol) = ctx.tolerance {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(SmlError::InvalidInput(format!("tolerance must be positive, got {tol}")));
        }
    }
    match &cli.command {
        Command::Bessel(a) => cmd_bessel(a, ctx),
        Command::Theta(a) => cmd_theta(a, ctx),
        Command::Multiplier(a) => cmd_multiplier(a, ctx),
        Command::Testfn(a) => cmd_testfn(a, ctx),
        Command::Mean(a) => cmd_mean(a, ctx),
        Command::Scaling(a) => cmd_scaling(a, ctx),
        Command::Regions(a) => cmd_regions(a, ctx),
        Command::OracleCheck(a) => cmd_oracle_check(a, ctx),
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let out = cli.out.clone().or_else(|| cfg.out.clone());
    let threads = cli.threads.or(cfg.threads);
    let ctx = Context { tolerance: cli.tolerance.or(cfg.tolerance), cfg };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        if k == 0 {
            return Err(SmlError::InvalidInput("threads must be at least 1".into()));
        }
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| SmlError::Io(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| dispatch(cli, &ctx))?;
    match out {
        Some(path) => fs::write(&path, &outcome.primary)?,
        None => stdout.write_all(outcome.primary.as_bytes())?,
    }
    stderr.write_all(outcome.summary.as_bytes())?;
    Ok(if outcome.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
