mod profile;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lebedev_core::kernels::{phi_kernel, phi_kernel_many, psi_kernel, KernelEvaluation};
use lebedev_core::quadrature::QuadratureConfig;
use lebedev_core::special_functions::{
    macdonald_k_imag_result, product_kernel_result, squared_kernel_result, KernelFamily,
};
use lebedev_core::transforms::{coefficients_from_profile, roundtrip_report, PeriodicProfile, SummabilityProbe};
use lebedev_core::verify::{run_suite, Suite};

use profile::ProfileSpec;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_PARTIAL: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_NUMERIC: u8 = 65;

/// Discrete Lebedev index transforms: kernels, coefficients, reconstruction and verification.
#[derive(Parser)]
#[command(name = "lebedev", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one kernel on a grid of x values.
    Kernel {
        #[arg(long, value_enum)]
        family: KernelKind,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Exact transform coefficients of a profile-generated function.
    Coeffs {
        #[arg(long)]
        profile: String,
        #[arg(long, value_enum, default_value = "product")]
        family: Family,
        #[arg(long = "n-max", default_value_t = 8)]
        n_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Round trip: profile -> f -> coefficients -> inversion series, compared on a grid.
    Reconstruct {
        #[arg(long)]
        profile: String,
        #[arg(long, value_enum, default_value = "product")]
        family: Family,
        #[arg(long = "n-max", default_value_t = 8)]
        n_max: u32,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite and report every check.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[command(flatten)]
        common: Common,
    },
    /// Time a fixed workload.
    Bench {
        #[arg(long, value_enum)]
        target: BenchTarget,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long = "tol-abs", default_value_t = 1e-12)]
    tol_abs: f64,
    #[arg(long = "tol-rel", default_value_t = 1e-10)]
    tol_rel: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Comma-separated x values.
    #[arg(long)]
    x: Option<String>,
    /// Evenly spaced grid `start:stop:count`.
    #[arg(long = "x-grid")]
    x_grid: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Phi,
    Psi,
    Product,
    Squared,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Product,
    Squared,
}

impl From<Family> for KernelFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Product => KernelFamily::ProductKernel,
            Family::Squared => KernelFamily::SquaredKernel,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Identities,
    Biorthogonality,
    Roundtrip,
    Bounds,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::Biorthogonality => Suite::Biorthogonality,
            SuiteArg::Roundtrip => Suite::Roundtrip,
            SuiteArg::Bounds => Suite::Bounds,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum BenchTarget {
    KImag,
    Phi,
    FullRoundtrip,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

type Outcome = Result<u8, Failure>;

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

impl Common {
    fn config(&self) -> Result<QuadratureConfig, Failure> {
        let cfg = QuadratureConfig::with_tolerances(self.tol_abs, self.tol_rel);
        cfg.validate().map_err(|e| usage(e.to_string()))?;
        Ok(cfg)
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

impl GridArgs {
    fn values(&self) -> Result<Vec<f64>, Failure> {
        let xs = match (&self.x, &self.x_grid) {
            (Some(_), Some(_)) => return Err(usage("give either --x or --x-grid, not both")),
            (None, None) => return Err(usage("one of --x or --x-grid is required")),
            (Some(list), None) => list
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|e| usage(format!("bad x value '{v}': {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?,
            (None, Some(spec)) => parse_grid(spec)?,
        };
        if xs.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(usage("x values must be positive and finite"));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(usage("x values must be strictly increasing"));
        }
        Ok(xs)
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(usage(format!("--x-grid expects start:stop:count, got '{spec}'")));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| usage(format!("bad grid bound '{s}': {e}")))
    };
    let (start, stop) = (num(start)?, num(stop)?);
    let count: usize = count
        .trim()
        .parse()
        .map_err(|e| usage(format!("bad grid count '{count}': {e}")))?;
    match count {
        0 => Err(usage("grid count must be at least 1")),
        1 => Ok(vec![start]),
        _ => Ok((0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect()),
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn load_profile(spec: &str, seed: u64) -> Result<PeriodicProfile, Failure> {
    let p = ProfileSpec::parse(spec).and_then(|s| s.build()).map_err(usage)?;
    p.check_periodicity().map_err(|e| usage(e.to_string()))?;
    p.check_lipschitz(256, seed).map_err(|e| usage(e.to_string()))?;
    Ok(p)
}

#[derive(Serialize)]
struct KernelTable {
    family: &'static str,
    n: u32,
    abs_tol: f64,
    rel_tol: f64,
    rows: Vec<KernelEvaluation>,
}

fn cmd_kernel(kind: KernelKind, n: u32, grid: &GridArgs, common: &Common) -> Outcome {
    let cfg = common.config()?;
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let xs = grid.values()?;
    let mut rows = Vec::with_capacity(xs.len());
    for x in xs {
        let row = match kind {
            KernelKind::Phi => phi_kernel(n, x, &cfg),
            KernelKind::Psi => psi_kernel(n, x, &cfg),
            KernelKind::Product => product_kernel_result(n, x, &cfg).map(|r| KernelEvaluation::from_result(n, x, r)),
            KernelKind::Squared => squared_kernel_result(n, x, &cfg).map(|r| KernelEvaluation::from_result(n, x, r)),
        }
        .map_err(|e| Failure::Numeric(format!("n={n} x={x}: {e}")))?;
        rows.push(row);
    }
    let family = match kind {
        KernelKind::Phi => "phi",
        KernelKind::Psi => "psi",
        KernelKind::Product => "product",
        KernelKind::Squared => "squared",
    };
    let text = match common.format {
        Format::Csv => {
            let mut s = String::from("x,value,error_estimate\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{}", fmt_num(r.x), fmt_num(r.value), fmt_num(r.error_estimate));
            }
            s
        }
        Format::Json => to_json(&KernelTable {
            family,
            n,
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
            rows: rows.clone(),
        }),
    };
    common.emit(&text)?;
    Ok(if rows.iter().all(|r| r.converged) {
        0
    } else {
        EXIT_PARTIAL
    })
}

#[derive(Serialize)]
struct CoefficientRow {
    n: u32,
    a_n: f64,
}

#[derive(Serialize)]
struct CoefficientTable {
    family: KernelFamily,
    profile: String,
    n_max: u32,
    summability: SummabilityProbe,
    coefficients: Vec<CoefficientRow>,
}

fn cmd_coeffs(profile: &str, family: Family, n_max: u32, common: &Common) -> Outcome {
    let cfg = common.config()?;
    if n_max == 0 {
        return Err(usage("--n-max must be at least 1"));
    }
    let p = load_profile(profile, common.seed)?;
    let c = coefficients_from_profile(&p, family.into(), n_max, &cfg)
        .map_err(|e| Failure::Numeric(format!("profile {}: {e}", p.label())))?;
    let rows: Vec<CoefficientRow> = (1..=n_max).map(|n| CoefficientRow { n, a_n: c.get(n) }).collect();
    let text = match common.format {
        Format::Csv => {
            let mut s = String::from("n,a_n\n");
            for r in &rows {
                let _ = writeln!(s, "{},{}", r.n, fmt_num(r.a_n));
            }
            s
        }
        Format::Json => to_json(&CoefficientTable {
            family: c.family(),
            profile: p.label().to_string(),
            n_max,
            summability: c.summability_probe(),
            coefficients: rows,
        }),
    };
    common.emit(&text)?;
    Ok(0)
}

fn cmd_reconstruct(profile: &str, family: Family, n_max: u32, grid: &GridArgs, common: &Common) -> Outcome {
    let cfg = common.config()?;
    if n_max == 0 {
        return Err(usage("--n-max must be at least 1"));
    }
    let xs = grid.values()?;
    let p = load_profile(profile, common.seed)?;
    let report = roundtrip_report(&p, family.into(), n_max, &xs, &cfg)
        .map_err(|e| Failure::Numeric(format!("profile {}: {e}", p.label())))?;
    let text = match common.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("x,truth,reconstructed\n");
            for ((x, t), r) in report.grid.iter().zip(&report.truth).zip(&report.reconstructed) {
                let _ = writeln!(s, "{},{},{}", fmt_num(*x), fmt_num(*t), fmt_num(*r));
            }
            s
        }
    };
    common.emit(&text)?;
    Ok(0)
}

fn cmd_verify(suite: SuiteArg, common: &Common) -> Outcome {
    let cfg = common.config()?;
    let report = run_suite(suite.into(), &cfg, common.seed).map_err(|e| Failure::Numeric(e.to_string()))?;
    let text = match common.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("suite,name,measured,threshold,passed\n");
            for c in &report.checks {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    c.suite,
                    c.name,
                    fmt_num(c.measured),
                    fmt_num(c.threshold),
                    c.passed
                );
            }
            s
        }
    };
    common.emit(&text)?;
    Ok(if report.passed { 0 } else { EXIT_VERIFY_FAILED })
}

#[derive(Serialize)]
struct BenchReport {
    target: &'static str,
    points: usize,
    evaluations: usize,
    wall_seconds: f64,
}

fn cmd_bench(target: BenchTarget, common: &Common) -> Outcome {
    let cfg = common.config()?;
    let numeric = |e: lebedev_core::Error| Failure::Numeric(e.to_string());
    let start = Instant::now();
    let (name, points, evaluations) = match target {
        BenchTarget::KImag => {
            let mut evals = 0;
            for i in 0..1000 {
                let tau = 0.5 * (i % 10) as f64;
                let x = 0.05 + 0.1 * (i / 10) as f64;
                evals += macdonald_k_imag_result(tau, x, &cfg).map_err(numeric)?.evaluations;
            }
            ("k_imag", 1000, evals)
        }
        BenchTarget::Phi => {
            let ns: Vec<u32> = (1..=8).collect();
            let mut evals = 0;
            for i in 0..20 {
                let x = 0.25 * (i + 1) as f64;
                evals += phi_kernel_many(&ns, x, &cfg).map_err(numeric)?[0].evaluations;
            }
            ("phi", 160, evals)
        }
        BenchTarget::FullRoundtrip => {
            let p = PeriodicProfile::sine_series(vec![1.0]).map_err(numeric)?;
            let grid = [0.5, 1.0, 2.0];
            roundtrip_report(&p, KernelFamily::ProductKernel, 8, &grid, &cfg).map_err(numeric)?;
            ("full_roundtrip", grid.len(), 0)
        }
    };
    let report = BenchReport {
        target: name,
        points,
        evaluations,
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    common.emit(&to_json(&report))?;
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Kernel {
            family,
            n,
            grid,
            common,
        } => cmd_kernel(*family, *n, grid, common),
        Command::Coeffs {
            profile,
            family,
            n_max,
            common,
        } => cmd_coeffs(profile, *family, *n_max, common),
        Command::Reconstruct {
            profile,
            family,
            n_max,
            grid,
            common,
        } => cmd_reconstruct(profile, *family, *n_max, grid, common),
        Command::Verify { suite, common } => cmd_verify(*suite, common),
        Command::Bench { target, common } => cmd_bench(*target, common),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("numeric failure: {m}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
