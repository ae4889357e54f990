//! Command-line surface: region exploration, scalar solve, single shot,
//! eps-sweep and the acceptance verifier. Outputs are deterministic CSV
//! files plus a `summary.txt` / `summary.csv` pair per run.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use csbubble::bubble::{write_comparison_csv, BubbleProfile};
use csbubble::model::{
    alpha_of_gamma, gamma_of, junction_point, limit_constants, region_report, sigma_nonempty,
    ExponentPair, ModelParams,
};
use csbubble::ode::OdeControls;
use csbubble::profile::{fmt_f64, write_profile_csv, Component};
use csbubble::scalar::{solve_scalar, write_scalar_csv, ScalarControls, ScalarError};
use csbubble::shoot::{
    geometric_schedule, shoot, sweep, write_sweep_csv, Classification, ShootControls, ShootError,
    ShootReport,
};
use csbubble::verify::run_all;

#[derive(Parser)]
#[command(
    name = "csbubble",
    version,
    about = "Shooting-method construction of non-topological bubbling vortices for rank-2 competitive Chern-Simons systems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Map the exponent regions and the construction line to CSV
    Region(CommonArgs),
    /// Solve the scalar sub-problem for a decay exponent gamma
    Scalar(CommonArgs),
    /// Run a single shot at one eps and dump the profile
    Shoot(CommonArgs),
    /// Run a decreasing eps schedule and dump the convergence table
    Sweep(CommonArgs),
    /// Run the acceptance suite on the built-in reference configurations
    Verify,
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Flat key=value config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named preset: su3-ref | su3-critical | b2-ref
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    a1: Option<f64>,
    #[arg(long)]
    a2: Option<f64>,
    /// Coupling matrix: a2 | b2 | g2 or four comma-separated entries
    #[arg(long)]
    cartan: Option<String>,
    #[arg(long = "N1")]
    n1: Option<u32>,
    #[arg(long = "N2")]
    n2: Option<u32>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    eps_start: Option<f64>,
    #[arg(long)]
    eps_ratio: Option<f64>,
    #[arg(long)]
    eps_count: Option<usize>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
    #[arg(long)]
    r_start: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    tol_gamma: Option<f64>,
    #[arg(long)]
    tail_tol: Option<f64>,
    /// Output directory for data files
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rectangle edge for region sampling (region command)
    #[arg(long)]
    alpha_max: Option<f64>,
    /// Grid points per axis for region sampling (region command)
    #[arg(long)]
    grid: Option<usize>,
}

enum CliError {
    Config(String),
    Bracket(String),
    Diverged(String),
    NotConverged(String),
    Io(io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Bracket(_) => 3,
            CliError::Diverged(_) => 4,
            CliError::NotConverged(_) => 5,
            CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(m) => format!("config error: {m}"),
            CliError::Bracket(m) => format!("bracket error: {m}"),
            CliError::Diverged(m) => format!("diverged: {m}"),
            CliError::NotConverged(m) => format!("not converged: {m}"),
            CliError::Io(e) => format!("io error: {e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn scalar_error(e: ScalarError) -> CliError {
    match e {
        ScalarError::GammaTooSmall(_, _) => CliError::Config(e.to_string()),
        ScalarError::BracketNotFound { .. } | ScalarError::ToleranceNotMet { .. } => {
            CliError::Bracket(e.to_string())
        }
        ScalarError::Origin(_) | ScalarError::Integration(_) => {
            CliError::NotConverged(e.to_string())
        }
    }
}

fn shoot_error(e: ShootError) -> CliError {
    match e {
        ShootError::NotInSigma { .. } | ShootError::BadEps(_) => CliError::Config(e.to_string()),
        ShootError::Origin(err) => CliError::NotConverged(err.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Region(args) => cmd_region(args),
        Cmd::Scalar(args) => cmd_scalar(args),
        Cmd::Shoot(args) => cmd_shoot(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Verify => cmd_verify(),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("csbubble: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

// ---------------------------------------------------------------------
// Config resolution
// ---------------------------------------------------------------------

fn preset_args(name: &str) -> Result<CommonArgs, CliError> {
    let mut a = CommonArgs::default();
    match name {
        "su3-ref" => {
            a.a1 = Some(1.0);
            a.a2 = Some(1.0);
            a.alpha1 = Some(1.5);
            a.alpha2 = Some(3.0);
        }
        "su3-critical" => {
            a.a1 = Some(1.0);
            a.a2 = Some(1.0);
            a.alpha1 = Some(1.0);
            a.alpha2 = Some(4.0);
        }
        "b2-ref" => {
            a.a1 = Some(2.0);
            a.a2 = Some(3.0);
            a.alpha1 = Some(3.0);
            a.alpha2 = Some(2.0);
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown preset '{other}' (expected su3-ref, su3-critical or b2-ref)"
            )))
        }
    }
    a.n1 = Some(0);
    a.n2 = Some(0);
    Ok(a)
}

fn parse_config_file(path: &Path) -> Result<CommonArgs, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut a = CommonArgs::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "{}:{}: expected key=value",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |e: String| CliError::Config(format!("{}:{}: {e}", path.display(), lineno + 1));
        let f = || value.parse::<f64>().map_err(|e| bad(e.to_string()));
        match key {
            "preset" => return Err(bad("presets are selected with --preset".into())),
            "a1" => a.a1 = Some(f()?),
            "a2" => a.a2 = Some(f()?),
            "cartan" => a.cartan = Some(value.to_string()),
            "N1" => {
                a.n1 = Some(
                    value
                        .parse()
                        .map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                )
            }
            "N2" => {
                a.n2 = Some(
                    value
                        .parse()
                        .map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                )
            }
            "alpha1" => a.alpha1 = Some(f()?),
            "alpha2" => a.alpha2 = Some(f()?),
            "gamma" => a.gamma = Some(f()?),
            "eps" => a.eps = Some(f()?),
            "eps-start" => a.eps_start = Some(f()?),
            "eps-ratio" => a.eps_ratio = Some(f()?),
            "eps-count" => {
                a.eps_count = Some(
                    value
                        .parse()
                        .map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                )
            }
            "rtol" => a.rtol = Some(f()?),
            "atol" => a.atol = Some(f()?),
            "r-start" => a.r_start = Some(f()?),
            "r-max" => a.r_max = Some(f()?),
            "tol-gamma" => a.tol_gamma = Some(f()?),
            "tail-tol" => a.tail_tol = Some(f()?),
            "out" => a.out = Some(PathBuf::from(value)),
            "alpha-max" => a.alpha_max = Some(f()?),
            "grid" => {
                a.grid = Some(
                    value
                        .parse()
                        .map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                )
            }
            other => return Err(bad(format!("unknown key '{other}'"))),
        }
    }
    Ok(a)
}

/// Overlay `over` on `base`; an explicit exponent target on one side
/// displaces the other side's target kind.
fn overlay(mut base: CommonArgs, over: CommonArgs) -> CommonArgs {
    if over.gamma.is_some() {
        base.alpha1 = None;
        base.alpha2 = None;
    }
    if over.alpha1.is_some() || over.alpha2.is_some() {
        base.gamma = None;
    }
    CommonArgs {
        config: over.config.or(base.config),
        preset: over.preset.or(base.preset),
        a1: over.a1.or(base.a1),
        a2: over.a2.or(base.a2),
        cartan: over.cartan.or(base.cartan),
        n1: over.n1.or(base.n1),
        n2: over.n2.or(base.n2),
        alpha1: over.alpha1.or(base.alpha1),
        alpha2: over.alpha2.or(base.alpha2),
        gamma: over.gamma.or(base.gamma),
        eps: over.eps.or(base.eps),
        eps_start: over.eps_start.or(base.eps_start),
        eps_ratio: over.eps_ratio.or(base.eps_ratio),
        eps_count: over.eps_count.or(base.eps_count),
        rtol: over.rtol.or(base.rtol),
        atol: over.atol.or(base.atol),
        r_start: over.r_start.or(base.r_start),
        r_max: over.r_max.or(base.r_max),
        tol_gamma: over.tol_gamma.or(base.tol_gamma),
        tail_tol: over.tail_tol.or(base.tail_tol),
        out: over.out.or(base.out),
        alpha_max: over.alpha_max.or(base.alpha_max),
        grid: over.grid.or(base.grid),
    }
}

struct Resolved {
    params: ModelParams,
    alpha: Option<ExponentPair>,
    gamma: Option<f64>,
    eps: f64,
    schedule: Vec<f64>,
    shoot_controls: ShootControls,
    scalar_controls: ScalarControls,
    out: PathBuf,
    alpha_max: Option<f64>,
    grid: usize,
}

fn parse_cartan(s: &str) -> Result<[[f64; 2]; 2], CliError> {
    match s.to_ascii_lowercase().as_str() {
        "a2" => return Ok([[2.0, -1.0], [-1.0, 2.0]]),
        "b2" => return Ok([[2.0, -1.0], [-2.0, 2.0]]),
        "g2" => return Ok([[2.0, -1.0], [-3.0, 2.0]]),
        _ => {}
    }
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("cartan matrix '{s}': {e}")))?;
    if parts.len() != 4 {
        return Err(CliError::Config(format!(
            "cartan matrix '{s}': expected 4 comma-separated entries"
        )));
    }
    Ok([[parts[0], parts[1]], [parts[2], parts[3]]])
}

fn resolve(args: CommonArgs) -> Result<Resolved, CliError> {
    let mut merged = CommonArgs::default();
    if let Some(name) = &args.preset {
        merged = overlay(merged, preset_args(name)?);
    }
    if let Some(path) = &args.config {
        merged = overlay(merged, parse_config_file(path)?);
    }
    merged = overlay(merged, args);

    let n1 = merged.n1.unwrap_or(0);
    let n2 = merged.n2.unwrap_or(0);
    let params = match (&merged.cartan, merged.a1, merged.a2) {
        (Some(c), None, None) => ModelParams::from_cartan(parse_cartan(c)?, n1, n2)
            .map_err(|e| CliError::Config(e.to_string()))?,
        (None, Some(a1), Some(a2)) => {
            ModelParams::new(a1, a2, n1, n2).map_err(|e| CliError::Config(e.to_string()))?
        }
        (Some(_), _, _) => {
            return Err(CliError::Config(
                "give either --cartan or --a1/--a2, not both".into(),
            ))
        }
        _ => {
            return Err(CliError::Config(
                "couplings missing: give --a1 and --a2, or --cartan, or --preset".into(),
            ))
        }
    };

    let alpha = match (merged.alpha1, merged.alpha2, merged.gamma) {
        (Some(x), Some(y), None) => Some(ExponentPair::new(x, y)),
        (None, None, _) => None,
        _ => {
            return Err(CliError::Config(
                "give exactly one exponent target: --alpha1 with --alpha2, or --gamma".into(),
            ))
        }
    };

    let rtol = merged.rtol.unwrap_or(1e-10);
    let atol = merged.atol.unwrap_or(1e-12);
    let ode = OdeControls {
        rtol,
        atol,
        ..Default::default()
    };
    let r_start = merged.r_start.unwrap_or(1e-4);
    let t_cap = merged.r_max.map_or(60.0, |r| r.ln().min(60.0));
    let shoot_controls = ShootControls {
        ode,
        r_start,
        t_cap,
        tail_tol: merged.tail_tol.unwrap_or(1e-8),
        ..Default::default()
    };
    let scalar_controls = ScalarControls {
        ode,
        r_start,
        tol_gamma: merged.tol_gamma.unwrap_or(1e-8),
        ..Default::default()
    };

    let eps = merged.eps.unwrap_or(1e-6);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CliError::Config(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    let start = merged.eps_start.unwrap_or(1e-2);
    let ratio = merged.eps_ratio.unwrap_or(0.1);
    let count = merged.eps_count.unwrap_or(7);
    if !(start > 0.0 && start < 1.0 && ratio > 0.0 && ratio < 1.0 && count >= 1) {
        return Err(CliError::Config(format!(
            "bad schedule: start {start}, ratio {ratio}, count {count}"
        )));
    }

    Ok(Resolved {
        params,
        alpha,
        gamma: merged.gamma,
        eps,
        schedule: geometric_schedule(start, ratio, count),
        shoot_controls,
        scalar_controls,
        out: merged.out.unwrap_or_else(|| PathBuf::from(".")),
        alpha_max: merged.alpha_max,
        grid: merged.grid.unwrap_or(121),
    })
}

fn target_pair(r: &Resolved) -> Result<ExponentPair, CliError> {
    match (r.alpha, r.gamma) {
        (Some(e), _) => Ok(e),
        (None, Some(g)) => Ok(alpha_of_gamma(&r.params, g)),
        (None, None) => Err(CliError::Config(
            "exponent target missing: give --alpha1/--alpha2 or --gamma (or --preset)".into(),
        )),
    }
}

fn target_gamma(r: &Resolved) -> Result<f64, CliError> {
    match (r.gamma, r.alpha) {
        (Some(g), _) => Ok(g),
        (None, Some(e)) => Ok(gamma_of(&r.params, e)),
        (None, None) => Err(CliError::Config(
            "gamma target missing: give --gamma or an alpha pair (or --preset)".into(),
        )),
    }
}

// ---------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------

fn create(out: &Path, name: &str) -> Result<BufWriter<fs::File>, CliError> {
    fs::create_dir_all(out)?;
    Ok(BufWriter::new(fs::File::create(out.join(name))?))
}

struct Summary {
    rows: Vec<(String, String)>,
}

impl Summary {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    fn push(&mut self, key: &str, value: String) {
        self.rows.push((key.to_string(), value));
    }

    fn push_f(&mut self, key: &str, value: f64) {
        self.push(key, fmt_f64(value));
    }

    fn write(&self, out: &Path) -> Result<(), CliError> {
        let mut txt = create(out, "summary.txt")?;
        for (k, v) in &self.rows {
            writeln!(txt, "{k} = {v}")?;
        }
        let mut csv = create(out, "summary.csv")?;
        writeln!(csv, "key,value")?;
        for (k, v) in &self.rows {
            writeln!(csv, "{k},{v}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------

fn cmd_region(args: CommonArgs) -> Result<ExitCode, CliError> {
    let r = resolve(args)?;
    let p = &r.params;

    let default_edge = match junction_point(p) {
        Ok(j) => (j.alpha2 + 2.0).max(8.0),
        Err(_) => {
            let probe = alpha_of_gamma(p, p.n1f() + 10.0);
            probe.alpha1.abs().max(probe.alpha2.abs()).max(8.0)
        }
    };
    let edge = r.alpha_max.unwrap_or(default_edge);
    let n = r.grid.max(2);

    let mut region = create(&r.out, "region.csv")?;
    writeln!(region, "alpha1,alpha2,in_omega,in_s,in_sigma,g,h,j_gap")?;
    for i in 0..n {
        for j in 0..n {
            let a1 = 0.5 + (edge - 0.5) * i as f64 / (n - 1) as f64;
            let a2 = 0.5 + (edge - 0.5) * j as f64 / (n - 1) as f64;
            let rr = region_report(p, ExponentPair::new(a1, a2));
            // fail fast if the membership flags contradict the raw values
            assert_eq!(rr.in_omega, a1 > 1.0 && a2 > 1.0 && rr.j_gap > 0.0);
            writeln!(
                region,
                "{},{},{},{},{},{},{},{}",
                fmt_f64(a1),
                fmt_f64(a2),
                u8::from(rr.in_omega),
                u8::from(rr.in_s),
                u8::from(rr.in_sigma),
                fmt_f64(rr.g_value),
                fmt_f64(rr.h_value),
                fmt_f64(rr.j_gap)
            )?;
        }
    }

    let mut line = create(&r.out, "sigma_line.csv")?;
    writeln!(line, "gamma,alpha1,alpha2,g,h,in_sigma")?;
    if sigma_nonempty(p) {
        let lo = p.n1f() + 2.0;
        let hi = p.gamma_cap().unwrap_or(lo + 10.0);
        let m = 200;
        for k in 1..=m {
            let gamma = lo + (hi - lo) * k as f64 / m as f64;
            let e = alpha_of_gamma(p, gamma);
            let rr = region_report(p, e);
            writeln!(
                line,
                "{},{},{},{},{},{}",
                fmt_f64(gamma),
                fmt_f64(e.alpha1),
                fmt_f64(e.alpha2),
                fmt_f64(rr.g_value),
                fmt_f64(rr.h_value),
                u8::from(rr.in_sigma)
            )?;
        }
    } else {
        println!("Sigma empty: no admissible exponent line for these couplings");
    }

    match junction_point(p) {
        Ok(j) => println!(
            "junction point: (alpha1, alpha2) = ({}, {})",
            fmt_f64(j.alpha1),
            fmt_f64(j.alpha2)
        ),
        Err(_) => println!("junction point: undefined (A <= 2B)"),
    }

    let mut s = Summary::new();
    s.push_f("a1", p.a1);
    s.push_f("a2", p.a2);
    s.push("N1", p.n1.to_string());
    s.push("N2", p.n2.to_string());
    s.push("sigma_nonempty", sigma_nonempty(p).to_string());
    s.write(&r.out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_scalar(args: CommonArgs) -> Result<ExitCode, CliError> {
    let r = resolve(args)?;
    let gamma = target_gamma(&r)?;
    let sol = solve_scalar(&r.params, gamma, &r.scalar_controls).map_err(scalar_error)?;
    let mut f = create(&r.out, "scalar_profile.csv")?;
    write_scalar_csv(&r.params, &sol, &mut f)?;
    println!(
        "V0 = {}, gamma = {}, mass = {}",
        fmt_f64(sol.v0),
        fmt_f64(sol.gamma),
        fmt_f64(sol.mass)
    );
    let mut s = Summary::new();
    s.push_f("gamma_target", gamma);
    s.push_f("gamma", sol.gamma);
    s.push_f("V0", sol.v0);
    s.push_f("mass", sol.mass);
    s.push_f(
        "mass_identity_residual",
        sol.mass - 2.0 * (sol.gamma + r.params.n1f()),
    );
    s.write(&r.out)?;
    Ok(ExitCode::SUCCESS)
}

fn summarize_report(s: &mut Summary, rep: &ShootReport) {
    s.push_f("eps", rep.eps);
    s.push("classification", rep.classification.label().to_string());
    for (name, ev) in [
        ("R1", &rep.r1),
        ("R2", &rep.r2),
        ("R3", &rep.r3),
        ("R4", &rep.r4),
        ("R5", &rep.r5),
    ] {
        if let Some(ev) = ev {
            s.push(name, fmt_f64(ev.r));
            s.push(&format!("w1_{name}"), fmt_f64(ev.w1));
            s.push(&format!("w2_{name}"), fmt_f64(ev.w2));
        }
    }
    if rep.alpha1_eps.is_finite() {
        s.push_f("alpha1_eps", rep.alpha1_eps);
        s.push_f("alpha2_eps", rep.alpha2_eps);
        s.push_f("alpha_tail_bound", rep.alpha_tail_bound);
    }
    if rep.mass2_r1r3.is_finite() {
        s.push_f("mass2_R1_R3", rep.mass2_r1r3);
        s.push_f("mass1_R1_R3", rep.mass1_r1r3);
        s.push_f("mass1_tail", rep.mass1_tail);
        s.push_f("mass2_tail", rep.mass2_tail);
    }
    s.push_f("sup_u2", rep.sup_u2);
    s.push_f("pohozaev_residual", rep.pohozaev_residual);
    if let Some(in_omega) = rep.alpha_in_omega {
        s.push("alpha_in_omega", in_omega.to_string());
    }
    if !rep.violations.is_empty() {
        s.push("violations", rep.violations.join(" | "));
    }
}

fn cmd_shoot(args: CommonArgs) -> Result<ExitCode, CliError> {
    let r = resolve(args)?;
    let pair = target_pair(&r)?;
    let gamma = gamma_of(&r.params, pair);
    let scalar = solve_scalar(&r.params, gamma, &r.scalar_controls).map_err(scalar_error)?;
    let rep = shoot(&r.params, pair, r.eps, scalar.v0, &r.shoot_controls).map_err(shoot_error)?;

    let mut f = create(&r.out, "profile.csv")?;
    write_profile_csv(&r.params, &rep.profile, &mut f)?;
    let mut s = Summary::new();
    s.push_f("gamma", gamma);
    s.push_f("V0", scalar.v0);
    summarize_report(&mut s, &rep);
    s.write(&r.out)?;
    println!(
        "eps = {}: {} (profile.csv, summary.txt written)",
        fmt_f64(rep.eps),
        rep.classification.label()
    );

    match rep.classification {
        Classification::EntireNontopological => Ok(ExitCode::SUCCESS),
        Classification::CrossedZero { component, t } => Err(CliError::Diverged(format!(
            "u{component} crossed zero at r = {}",
            fmt_f64(t.exp())
        ))),
        Classification::NotConverged { reason } => Err(CliError::NotConverged(reason)),
    }
}

fn cmd_sweep(args: CommonArgs) -> Result<ExitCode, CliError> {
    let r = resolve(args)?;
    let pair = target_pair(&r)?;
    let gamma = gamma_of(&r.params, pair);
    let scalar = solve_scalar(&r.params, gamma, &r.scalar_controls).map_err(scalar_error)?;
    let reports =
        sweep(&r.params, pair, &r.schedule, scalar.v0, &r.shoot_controls).map_err(shoot_error)?;

    // fail fast on ordering violations before writing the table
    for rep in &reports {
        if let (Some(r1), Some(r2), Some(r3)) = (&rep.r1, &rep.r2, &rep.r3) {
            assert!(r1.t < r2.t && r2.t < r3.t, "event order broken in report");
        }
    }
    let mut f = create(&r.out, "sweep.csv")?;
    write_sweep_csv(&reports, &mut f)?;

    let mut s = Summary::new();
    s.push_f("gamma", gamma);
    s.push_f("V0", scalar.v0);
    s.push("runs", reports.len().to_string());

    // per-eps blow-down errors against the closed-form bubbles
    if let Ok(b) = limit_constants(&r.params, pair) {
        for rep in &reports {
            if rep.classification != Classification::EntireNontopological {
                continue;
            }
            if let (Some(r2), Ok(inner)) = (&rep.r2, BubbleProfile::inner(b.d, r.params.a2)) {
                if let Ok(err) = csbubble::bubble::blowdown_sup_error(
                    &rep.profile,
                    r2.r,
                    Component::Second,
                    &inner,
                    0.5,
                    2.0,
                ) {
                    s.push(
                        &format!("blowdown_inner_err_eps_{:.0e}", rep.eps),
                        fmt_f64(err),
                    );
                }
            }
            if b.e > 0.0 {
                if let (Some(r4), Ok(outer)) = (&rep.r4, BubbleProfile::outer(b.e, r.params.a1)) {
                    if let Ok(err) = csbubble::bubble::blowdown_sup_error(
                        &rep.profile,
                        r4.r,
                        Component::First,
                        &outer,
                        0.5,
                        2.0,
                    ) {
                        s.push(
                            &format!("blowdown_outer_err_eps_{:.0e}", rep.eps),
                            fmt_f64(err),
                        );
                    }
                }
            }
        }
    }

    // comparison dumps for the smallest converged run
    if let Ok(b) = limit_constants(&r.params, pair) {
        if let Some(rep) = reports
            .iter()
            .rev()
            .find(|rep| rep.classification == Classification::EntireNontopological)
        {
            if let (Some(r2), Ok(inner)) = (&rep.r2, BubbleProfile::inner(b.d, r.params.a2)) {
                let mut f = create(&r.out, "blowdown_inner.csv")?;
                if write_comparison_csv(
                    &rep.profile,
                    r2.r,
                    Component::Second,
                    &inner,
                    0.5,
                    2.0,
                    101,
                    &mut f,
                )
                .is_ok()
                {
                    let err = csbubble::bubble::blowdown_sup_error(
                        &rep.profile,
                        r2.r,
                        Component::Second,
                        &inner,
                        0.5,
                        2.0,
                    )
                    .unwrap_or(f64::NAN);
                    s.push_f("blowdown_inner_sup_error", err);
                }
            }
            if b.e > 0.0 {
                if let (Some(r4), Ok(outer)) = (&rep.r4, BubbleProfile::outer(b.e, r.params.a1)) {
                    let mut f = create(&r.out, "blowdown_outer.csv")?;
                    if write_comparison_csv(
                        &rep.profile,
                        r4.r,
                        Component::First,
                        &outer,
                        0.5,
                        2.0,
                        101,
                        &mut f,
                    )
                    .is_ok()
                    {
                        let err = csbubble::bubble::blowdown_sup_error(
                            &rep.profile,
                            r4.r,
                            Component::First,
                            &outer,
                            0.5,
                            2.0,
                        )
                        .unwrap_or(f64::NAN);
                        s.push_f("blowdown_outer_sup_error", err);
                    }
                }
            }
            s.push_f("smallest_converged_eps", rep.eps);
            summarize_report(&mut s, rep);
        }
    }
    s.write(&r.out)?;

    let converged = reports
        .iter()
        .filter(|r| r.classification == Classification::EntireNontopological)
        .count();
    println!(
        "sweep: {}/{} runs converged (sweep.csv, summary.txt written)",
        converged,
        reports.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify() -> Result<ExitCode, CliError> {
    let results = run_all();
    let mut all = true;
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {} — {}", r.name, r.detail);
        all &= r.passed;
    }
    if all {
        println!("all {} checks passed", results.len());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("csbubble: acceptance checks failed");
        Ok(ExitCode::FAILURE)
    }
}
