//! Command-line entry point.
//!
//! `verify` runs check suites against a configured family and reports
//! pass/fail per check; `solve-b1` tabulates the solved twisting profile;
//! `scan` maps the feasibility region of the (c0, ef) parameter plane.
//! Exit codes: 0 all checks passed, 1 at least one check failed, 2 the
//! configuration or a family constraint was rejected.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cotlift_cli::config::{build_model, validate_at_energies, RunConfig};
use cotlift_cli::report::Report;
use cotlift_cli::sample::sample_points;
use cotlift_cli::suites::{run_suites, Tolerances};
use cotlift_core::curves::B1Curve;
use cotlift_core::einstein;
use cotlift_core::error::GeometryError;
use cotlift_core::lift::validate_family;

/// Write to stdout, exiting with the conventional pipe-closure status
/// when the consumer has gone away (e.g. piping into `head`).
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out
        .write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .is_err()
    {
        std::process::exit(141);
    }
}
use cotlift_core::{Family, SolvedB1};

#[derive(Parser)]
#[command(
    name = "cotlift",
    version,
    about = "Numerically certifies lifted Kähler–Einstein structures on punctured cotangent bundles"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run check suites at seeded sample points and report each result.
    Verify(VerifyArgs),
    /// Tabulate the solved twisting profile and its defining-equation
    /// residual over the configured energy range.
    SolveB1(SolveArgs),
    /// Map constraint feasibility over a grid of (c0, ef) profile
    /// parameters.
    Scan(ScanArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Aligned table for terminals.
    Human,
    /// Deterministic structured document.
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    /// Tab-separated values with a header row.
    Tsv,
    /// Aligned table for terminals.
    Human,
}

#[derive(Args)]
struct VerifyArgs {
    /// Path to the run configuration document.
    #[arg(long)]
    config: PathBuf,
    /// Override the sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of sampled fiber points.
    #[arg(long)]
    samples: Option<usize>,
    /// Restrict to named suites (repeatable).
    #[arg(long = "suite")]
    suite: Vec<String>,
    /// Override one check tolerance as name=value (repeatable).
    #[arg(long = "tol", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Also write the machine report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Path to the run configuration document (must use a solved profile).
    #[arg(long)]
    config: PathBuf,
    /// Override the number of grid rows.
    #[arg(long)]
    grid: Option<usize>,
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = TableFormat::Tsv)]
    format: TableFormat,
}

#[derive(Args)]
struct ScanArgs {
    /// Path to the run configuration document (base, lambda, and energy
    /// range are used; its twisting profile is ignored).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    c0_min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    c0_max: f64,
    #[arg(long, default_value_t = 5)]
    c0_steps: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = -1.0)]
    ef_min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    ef_max: f64,
    #[arg(long, default_value_t = 5)]
    ef_steps: usize,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v: f64 = value
        .parse()
        .map_err(|e| format!("bad tolerance value `{value}`: {e}"))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(format!("tolerance must be finite and positive, got {v}"));
    }
    Ok((name.to_string(), v))
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let mut cfg = match RunConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    if let Some(seed) = args.seed {
        cfg.sampling.seed = seed;
    }
    if let Some(samples) = args.samples {
        cfg.sampling.count = samples;
    }
    if !args.suite.is_empty() {
        cfg.suites = Some(args.suite.clone());
    }
    for (name, v) in &args.tol {
        cfg.tolerances.insert(name.clone(), *v);
    }
    let model = match build_model(&cfg) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    let pts = sample_points(cfg.base.n, &cfg.sampling);
    let energies: Vec<f64> = pts.iter().map(|pt| model.base.energy(&pt.x, &pt.p)).collect();
    if let Err(e) = validate_at_energies(&model, &energies) {
        eprintln!("{e}");
        return 2;
    }
    let t_grid = cfg.t_range.grid_points();
    let which = cfg.active_suites();
    let tols = Tolerances::new(cfg.tolerances.clone());
    let checks = run_suites(&model, &pts, &t_grid, &which, &tols);
    let report = Report::new(cfg, checks);
    match args.format {
        Format::Human => emit(&report.to_human()),
        Format::Json => emit(&report.to_json()),
    }
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("cannot write report to {}: {e}", path.display());
            return 2;
        }
    }
    if report.any_failed() {
        1
    } else {
        0
    }
}

fn cmd_solve(args: &SolveArgs) -> i32 {
    let mut cfg = match RunConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    if let Some(grid) = args.grid {
        cfg.t_range.grid = grid;
    }
    let model = match build_model(&cfg) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    let Some(ef) = model.ef else {
        eprintln!(
            "solve-b1 requires a solved twisting profile: family.b1 = {{ solved = {{ c0, ef }} }}"
        );
        return 2;
    };
    let rows: Vec<[f64; 5]> = cfg
        .t_range
        .grid_points()
        .iter()
        .map(|&t| {
            [
                t,
                model.family.b1.eval(t),
                model.family.b1.d1(t),
                model.family.b1.d2(t),
                einstein::ode_residual(&model.base, &model.family, ef, t),
            ]
        })
        .collect();
    match args.format {
        TableFormat::Tsv => {
            emit("t\tb1\tb1'\tb1''\tode_residual\n");
            for r in rows {
                emit(&format!("{}\t{}\t{}\t{}\t{}\n", r[0], r[1], r[2], r[3], r[4]));
            }
        }
        TableFormat::Human => {
            emit(&format!(
                "{:>10} {:>18} {:>18} {:>18} {:>14}\n",
                "t", "b1", "b1'", "b1''", "ode_residual"
            ));
            for r in rows {
                emit(&format!(
                    "{:>10.6} {:>18.12} {:>18.12} {:>18.12} {:>14.3e}\n",
                    r[0], r[1], r[2], r[3], r[4]
                ));
            }
        }
    }
    0
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect()
}

fn cmd_scan(args: &ScanArgs) -> i32 {
    let cfg = match RunConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    // Validate everything except the profile being scanned over.
    let base = match cotlift_core::BaseSpace::new(cfg.base.n, cfg.base.c) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("invalid config: {e}");
            return 2;
        }
    };
    if args.c0_steps == 0 || args.ef_steps == 0 {
        eprintln!("invalid scan grid: steps must be at least 1");
        return 2;
    }
    let tr = &cfg.t_range;
    if !(tr.min.is_finite() && tr.min > 0.0 && tr.max > tr.min) {
        eprintln!(
            "invalid config: t_range must satisfy 0 < min < max, got [{}, {}]",
            tr.min, tr.max
        );
        return 2;
    }
    let lambda = cfg.family.lambda.to_curve();
    let grid = tr.grid_points();
    emit("c0\tef\tstatus\tt_violation\n");
    for &c0 in &linspace(args.c0_min, args.c0_max, args.c0_steps) {
        for &ef in &linspace(args.ef_min, args.ef_max, args.ef_steps) {
            let solved = SolvedB1::new(lambda.clone(), cfg.base.n, cfg.base.c, ef, c0);
            let fam = Family::balanced(lambda.clone(), B1Curve::Solved(solved));
            match validate_family(&base, &fam, &grid) {
                Ok(()) => emit(&format!("{c0}\t{ef}\tok\t-\n")),
                Err(GeometryError::ConstraintViolated { name, t, .. }) => {
                    emit(&format!("{c0}\t{ef}\t{name}\t{t}\n"))
                }
                Err(e) => {
                    eprintln!("invalid config: {e}");
                    return 2;
                }
            }
        }
    }
    0
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.cmd {
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::SolveB1(args) => cmd_solve(args),
        Cmd::Scan(args) => cmd_scan(args),
    };
    std::process::exit(code);
}
