//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bjorling::{solve_bjorling, DegeneracyPolicy};
use crate::error::{Error, Result};
use crate::geometry::{LVec3, Surface};
use crate::interpolate::{
    curve_interpolant, point_interpolant, radius_search, FEASIBLE_NORM, SearchReport, Target,
};
use crate::io::{self, MeshSpec};
use crate::series::{Coeffs, SplitFourierSeries};
use crate::split::SplitComplex;
use crate::verify::{Grid, VerifyConfig, DEFAULT_DELTA, DEFAULT_DELTA2, DEFAULT_DET_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

const VERIFY_TOL: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "tlms", version, about = "Timelike minimal surfaces from split-complex boundary data")]
struct Cli {
    /// Tolerance override (otherwise TLMS_TOL, then the command default).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized self-tests.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Suppress warnings and informational output on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the singular Björling problem for lightlike data.
    Bjorling(BjorlingArgs),
    /// Search for a radius at which a curve spans a point.
    InterpPoint(InterpPointArgs),
    /// Search for a radius at which two curves span a surface.
    InterpCurves(InterpCurvesArgs),
    /// Finite-difference verification of a surface.
    Verify(VerifyArgs),
    /// Export an OBJ mesh and/or CSV samples.
    Mesh(MeshArgs),
    /// Evaluate a surface at (ρ, θ).
    Eval(EvalArgs),
    /// Run seeded randomized algebra checks.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Policy {
    Error,
    Warn,
}

#[derive(Args, Debug)]
struct BjorlingArgs {
    #[arg(long)]
    gamma: PathBuf,
    #[arg(long)]
    field: PathBuf,
    #[arg(long, value_enum, default_value = "error")]
    policy: Policy,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, default_value_t = 1.01)]
    rmin: f64,
    #[arg(long, default_value_t = 10.0)]
    rmax: f64,
    #[arg(long, default_value_t = 200)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InterpPointArgs {
    #[arg(long)]
    gamma: PathBuf,
    #[arg(long, default_value = "0,0,0", allow_hyphen_values = true)]
    point: String,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args, Debug)]
struct InterpCurvesArgs {
    #[arg(long)]
    gamma: PathBuf,
    #[arg(long)]
    alpha: PathBuf,
    #[arg(long)]
    allow_log: bool,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    surface: PathBuf,
    #[arg(long, default_value = "33x129")]
    grid: String,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = DEFAULT_DELTA2)]
    delta2: f64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MeshArgs {
    #[arg(long)]
    surface: PathBuf,
    #[arg(long, default_value = "33x129")]
    grid: String,
    /// ρ range "lo,hi"; defaults to the surface domain.
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<String>,
    #[arg(long, default_value = "-2,2", allow_hyphen_values = true)]
    theta: String,
    #[arg(long)]
    obj: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    surface: PathBuf,
    /// "rho,theta"
    #[arg(long, allow_hyphen_values = true)]
    at: String,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 200)]
    cases: usize,
}

struct Ctx {
    tol: Option<f64>,
    seed: u64,
    quiet: bool,
}

impl Ctx {
    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn note(&self, v: Value) {
        if !self.quiet {
            eprintln!("{}", serde_json::to_string(&v).expect("json"));
        }
    }
}

fn env_tol() -> std::result::Result<Option<f64>, String> {
    match std::env::var("TLMS_TOL") {
        Ok(s) => parse_f64(&s).map(Some).map_err(|e| format!("TLMS_TOL: {e}")),
        Err(_) => Ok(None),
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("not a finite number: {s:?}"))
}

fn parse_list(s: &str, n: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n {
        return Err(Error::Format(format!("expected {n} comma-separated numbers, got {s:?}")));
    }
    parts
        .iter()
        .map(|p| parse_f64(p).map_err(Error::Format))
        .collect()
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let v = parse_list(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Format(format!("grid must look like 33x129, got {s:?}"));
    let (a, b) = s.split_once('x').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    Ok((a, b))
}

fn emit(v: &Value, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => io::save_json(path, v),
        None => {
            print!("{}", io::to_pretty(v));
            Ok(())
        }
    }
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::to_string(&json!({"error": kind, "message": message})).expect("json")
}

/// Run the CLI on `argv` (including the program name); returns the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    print!("{e}");
                    EXIT_OK
                }
                _ => {
                    eprintln!("{}", error_json("UsageError", e.to_string().trim()));
                    EXIT_USAGE
                }
            };
        }
    };
    let tol = match cli.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => {
            eprintln!("{}", error_json("UsageError", "--tol must be positive"));
            return EXIT_USAGE;
        }
        Some(t) => Some(t),
        None => match env_tol() {
            Ok(t) => t,
            Err(msg) => {
                eprintln!("{}", error_json("UsageError", &msg));
                return EXIT_USAGE;
            }
        },
    };
    let ctx = Ctx {
        tol,
        seed: cli.seed,
        quiet: cli.quiet,
    };
    let result = match &cli.command {
        Command::Bjorling(a) => run_bjorling(&ctx, a),
        Command::InterpPoint(a) => run_interp_point(&ctx, a),
        Command::InterpCurves(a) => run_interp_curves(&ctx, a),
        Command::Verify(a) => run_verify(&ctx, a),
        Command::Mesh(a) => run_mesh(a),
        Command::Eval(a) => run_eval(a),
        Command::Selftest(a) => run_selftest(&ctx, a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            e.exit_code()
        }
    }
}

fn run_bjorling(ctx: &Ctx, a: &BjorlingArgs) -> Result<i32> {
    let gamma = io::load_curve(&a.gamma)?;
    let field = io::load_curve(&a.field)?;
    let policy = match a.policy {
        Policy::Error => DegeneracyPolicy::Error,
        Policy::Warn => DegeneracyPolicy::Warn,
    };
    let sol = solve_bjorling(&gamma, &field, policy)?;
    if sol.totally_degenerate {
        ctx.note(json!({
            "warning": "TotallyDegenerate",
            "message": "metric determinant vanishes on the whole sample grid",
            "max_abs_det": sol.max_abs_det,
        }));
    }
    emit(&io::surface_to_json(&sol.surface)?, a.out.as_deref())?;
    Ok(EXIT_OK)
}

fn finish_search(
    ctx: &Ctx,
    report: &SearchReport,
    build: impl Fn(f64) -> Result<Surface>,
    out: Option<&Path>,
) -> Result<i32> {
    let feasible = ctx.tol_or(FEASIBLE_NORM);
    let best = report.candidates.iter().find(|c| c.norm <= feasible);
    let surface = best.map(|c| build(c.r)).transpose()?;
    let mut report = report.clone();
    for c in &mut report.candidates {
        c.feasible = c.norm <= feasible;
    }
    emit(&io::search_to_json(&report, surface.as_ref())?, out)?;
    if surface.is_none() {
        ctx.note(json!({"error": "InfeasibleSearch", "message": "no radius met the residual tolerance"}));
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(EXIT_OK)
}

fn run_interp_point(ctx: &Ctx, a: &InterpPointArgs) -> Result<i32> {
    let gamma = io::load_curve(&a.gamma)?;
    let p = parse_list(&a.point, 3)?;
    let p = LVec3::new(p[0], p[1], p[2]);
    let s = &a.search;
    let report = radius_search(&gamma, &Target::Point(p), s.rmin, s.rmax, s.grid, false)?;
    finish_search(ctx, &report, |r| point_interpolant(&gamma, p, r), s.out.as_deref())
}

fn run_interp_curves(ctx: &Ctx, a: &InterpCurvesArgs) -> Result<i32> {
    let gamma = io::load_curve(&a.gamma)?;
    let alpha = io::load_curve(&a.alpha)?;
    let s = &a.search;
    let target = Target::Curve(alpha.clone());
    let report = radius_search(&gamma, &target, s.rmin, s.rmax, s.grid, a.allow_log)?;
    finish_search(
        ctx,
        &report,
        |r| curve_interpolant(&gamma, &alpha, r, a.allow_log),
        s.out.as_deref(),
    )
}

fn run_verify(ctx: &Ctx, a: &VerifyArgs) -> Result<i32> {
    let surface = io::load_surface(&a.surface)?;
    let (n_rho, n_theta) = parse_grid(&a.grid)?;
    let config = VerifyConfig {
        grid: Grid::default_for(&surface, n_rho, n_theta)?,
        delta: a.delta,
        delta2: a.delta2,
        det_tol: DEFAULT_DET_TOL,
    };
    let report = crate::verify::verify_surface(&surface, &config)?;
    emit(&io::report_to_json(&report)?, a.report.as_deref())?;
    let tol = ctx.tol_or(VERIFY_TOL);
    if !report.residuals_within(tol) {
        ctx.note(json!({
            "error": "VerificationFailed",
            "message": format!("a residual exceeds {tol:e}"),
        }));
        return Ok(EXIT_VERIFY_FAILED);
    }
    Ok(EXIT_OK)
}

fn run_mesh(a: &MeshArgs) -> Result<i32> {
    let surface = io::load_surface(&a.surface)?;
    let (n_rho, n_theta) = parse_grid(&a.grid)?;
    let rho_range = match &a.rho {
        Some(s) => parse_pair(s)?,
        None => (surface.domain.rho_min, surface.domain.rho_max),
    };
    let spec = MeshSpec {
        n_rho,
        n_theta,
        rho_range,
        theta_range: parse_pair(&a.theta)?,
    };
    match (&a.obj, &a.csv) {
        (None, None) => print!("{}", io::mesh_obj(&surface, &spec)?),
        (obj, csv) => {
            if let Some(path) = obj {
                io::export_obj(&surface, &spec, path)?;
            }
            if let Some(path) = csv {
                io::export_csv(&surface, &spec, path)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn run_eval(a: &EvalArgs) -> Result<i32> {
    let surface = io::load_surface(&a.surface)?;
    let (rho, theta) = parse_pair(&a.at)?;
    let p = surface.eval(rho, theta)?;
    println!(
        "{} {} {}",
        io::fmt_g17(p.x1),
        io::fmt_g17(p.x2),
        io::fmt_g17(p.x3)
    );
    Ok(EXIT_OK)
}

fn random_series(rng: &mut ChaCha8Rng) -> SplitFourierSeries {
    let coeffs: Coeffs = (-3..=3)
        .map(|n| {
            let c = SplitComplex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (n, c)
        })
        .collect();
    SplitFourierSeries::new(SplitComplex::ZERO, coeffs)
}

fn run_selftest(ctx: &Ctx, a: &SelftestArgs) -> Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let tol = ctx.tol_or(1e-12);
    let mut worst: f64 = 0.0;
    for _ in 0..a.cases {
        let f = random_series(&mut rng);
        let g = random_series(&mut rng);
        let fg = f.product(&g)?;
        let theta = rng.gen_range(-2.0..2.0);
        let lhs = fg.eval(theta)?;
        let rhs = f.eval(theta)? * g.eval(theta)?;
        worst = worst.max((lhs - rhs).mag() / (1.0 + rhs.mag()));
        let (x, y) = (
            SplitComplex::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
            SplitComplex::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
        );
        let q = (x * y).quad() - x.quad() * y.quad();
        worst = worst.max(q.abs() / (1.0 + (x.quad() * y.quad()).abs()));
    }
    let ok = worst <= tol;
    println!(
        "{}",
        serde_json::to_string(&json!({
            "seed": ctx.seed,
            "cases": a.cases,
            "max_relative_error": worst,
            "passed": ok,
        }))
        .expect("json")
    );
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
