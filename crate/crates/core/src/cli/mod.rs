//! The `uhlfid` command line: `compute`, `verify` and `bench`.
//!
//! Exit codes: 0 success, 1 property-suite failure, 2 invalid input,
//! 3 numerical failure, 64 usage error.
//!
//! Every command can write a JSON report (`--report PATH`) holding the tool
//! version, the argument list, SHA-256 digests of input files, the seeds
//! and the results, with keys in a fixed order.

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use self::format::{digest, parse_matrix, serialize_matrix, to_report_json};
use crate::bench::{self, BenchConfig, BenchReport};
use crate::error::Error;
use crate::fidelity::{fidelity, FidelityMethod, FidelityResult};
use crate::matcore::DEFAULT_TOL;
use crate::states::{self, DensityMatrix};
use crate::verify::{self, FaultInjection, SuiteReport, TolProfile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILURE: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Offset added by `--inject-fault`.
pub const FAULT_OFFSET: f64 = 1e-3;

pub const TOOL: &str = "uhlfid";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "uhlfid",
    version,
    about = "Uhlmann-Jozsa fidelity of density matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fidelity of two states stored as matrix files.
    Compute(ComputeArgs),
    /// Run the randomized property suite.
    Verify(VerifyArgs),
    /// Time the classic route against the product-eigenvalue route.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct ComputeArgs {
    /// Matrix file holding ρ.
    #[arg(long)]
    rho: PathBuf,
    /// Matrix file holding σ.
    #[arg(long)]
    sigma: PathBuf,
    /// trace-norm, classic, product-sqrt, product-eig or auto.
    #[arg(long, default_value = "auto")]
    method: FidelityMethod,
    /// Validation tolerance for both states.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Evaluate all four routes and report their disagreement.
    #[arg(long)]
    all_methods: bool,
    /// Write a JSON run report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    /// Random trials per property and dimension.
    #[arg(long)]
    trials: u64,
    /// Master seed; every random state derives from it.
    #[arg(long)]
    seed: u64,
    /// `strict` divides every threshold by ten.
    #[arg(long, default_value = "default", value_parser = ["default", "strict"])]
    tol_profile: String,
    /// Write a JSON run report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Test hook: perturb one method's values.
    #[arg(long, hide = true)]
    inject_fault: Option<FidelityMethod>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated dimensions, strictly ascending.
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    /// Timed repetitions per dimension and method.
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// Untimed repetitions run first.
    #[arg(long, default_value_t = 2)]
    warmup: usize,
    /// Master seed for the benchmark states.
    #[arg(long)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "classic,product-eig")]
    methods: Vec<FidelityMethod>,
    /// Write the timing table as CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write a JSON run report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Worker threads for the dense kernels.
    #[arg(long, env = "UHLFID_THREADS", default_value_t = 1)]
    threads: usize,
}

#[derive(Serialize)]
struct InputDigest {
    name: String,
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Seeds {
    master_seed: Option<u64>,
}

#[derive(Serialize)]
struct RunReport<T> {
    tool: &'static str,
    version: &'static str,
    command: Vec<String>,
    inputs: Vec<InputDigest>,
    seeds: Seeds,
    results: T,
}

#[derive(Serialize)]
struct ComputeResults {
    tol: f64,
    dim: usize,
    fidelities: Vec<FidelityResult>,
    max_disagreement: Option<f64>,
}

/// Maps an error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => EXIT_USAGE,
        e if e.is_validation() => EXIT_INVALID_INPUT,
        _ => EXIT_NUMERICAL,
    }
}

/// Runs the command line on `args` (program name first). Returns the exit
/// code; nothing is written to the process streams directly.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Compute(a) => compute(a, echo, out),
        Command::Verify(a) => verify_cmd(a, echo, out),
        Command::Bench(a) => bench_cmd(a, echo, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            exit_code(&e)
        }
    }
}

fn write_report<T: Serialize>(path: &Path, report: &RunReport<T>) -> Result<(), Error> {
    std::fs::write(path, to_report_json(report))?;
    Ok(())
}

fn load_state(path: &Path, tol: f64) -> Result<(DensityMatrix, String), Error> {
    let bytes = std::fs::read(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    let state = states::validate(parse_matrix(&bytes)?, tol)?;
    Ok((state, digest(&bytes)))
}

fn compute(a: ComputeArgs, echo: Vec<String>, out: &mut dyn Write) -> Result<i32, Error> {
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(Error::Domain(format!(
            "--tol must be positive, got {}",
            a.tol
        )));
    }
    let (rho, rho_digest) = load_state(&a.rho, a.tol)?;
    let (sigma, sigma_digest) = load_state(&a.sigma, a.tol)?;

    let methods: Vec<FidelityMethod> = if a.all_methods {
        FidelityMethod::CONCRETE.to_vec()
    } else {
        vec![a.method]
    };
    let fidelities = methods
        .iter()
        .map(|&m| fidelity(&rho, &sigma, m))
        .collect::<Result<Vec<_>, _>>()?;

    // Values and diagnostics only: no timings, so output is reproducible.
    let max_disagreement = if a.all_methods {
        writeln!(
            out,
            "{:<14} {:<22} {:<22} {:<10} {:<10}",
            "method", "fidelity", "raw", "max_imag", "clamped"
        )?;
        for r in &fidelities {
            writeln!(
                out,
                "{:<14} {:<22} {:<22} {:<10.3e} {:<10.3e}",
                r.method.name(),
                format!("{:?}", r.value),
                format!("{:?}", r.raw_value),
                r.max_imag_residual,
                r.clamped_mass
            )?;
        }
        let values: Vec<f64> = fidelities.iter().map(|r| r.value).collect();
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        writeln!(out, "max disagreement: {:.3e}", hi - lo)?;
        Some(hi - lo)
    } else {
        let r = &fidelities[0];
        writeln!(out, "method: {}", r.method)?;
        writeln!(out, "fidelity: {:?}", r.value)?;
        writeln!(out, "raw: {:?}", r.raw_value)?;
        writeln!(out, "max_imag_residual: {:.3e}", r.max_imag_residual)?;
        writeln!(out, "clamped_mass: {:.3e}", r.clamped_mass)?;
        None
    };

    if let Some(path) = &a.report {
        let report = RunReport {
            tool: TOOL,
            version: VERSION,
            command: echo,
            inputs: vec![
                InputDigest {
                    name: "rho".into(),
                    path: a.rho.display().to_string(),
                    sha256: rho_digest,
                },
                InputDigest {
                    name: "sigma".into(),
                    path: a.sigma.display().to_string(),
                    sha256: sigma_digest,
                },
            ],
            seeds: Seeds { master_seed: None },
            results: ComputeResults {
                tol: a.tol,
                dim: rho.dim(),
                fidelities,
                max_disagreement,
            },
        };
        write_report(path, &report)?;
    }
    Ok(EXIT_OK)
}

fn verify_cmd(a: VerifyArgs, echo: Vec<String>, out: &mut dyn Write) -> Result<i32, Error> {
    if a.dims.contains(&0) {
        return Err(Error::Domain("--dims entries must be positive".into()));
    }
    let profile: TolProfile = a.tol_profile.parse()?;
    let fault = a.inject_fault.map(|method| FaultInjection {
        method,
        offset: FAULT_OFFSET,
    });
    let suite: SuiteReport =
        verify::run_property_suite_with_fault(a.trials, &a.dims, a.seed, profile, fault);

    for p in &suite.properties {
        writeln!(
            out,
            "{} {:<40} worst {:.3e}  threshold {:.1e}  trials {}",
            if p.passed { "PASS" } else { "FAIL" },
            p.name,
            p.worst_residual,
            p.threshold,
            p.trials
        )?;
        if let Some(f) = &p.first_failure {
            writeln!(
                out,
                "     first failure: n={} trial={}: {}",
                f.dim, f.trial, f.detail
            )?;
        }
    }
    let failed = suite.properties.iter().filter(|p| !p.passed).count();
    if failed == 0 {
        writeln!(out, "all {} properties passed", suite.properties.len())?;
    } else {
        writeln!(
            out,
            "{failed} of {} properties failed",
            suite.properties.len()
        )?;
    }

    let all_passed = suite.all_passed;
    if let Some(path) = &a.report {
        let report = RunReport {
            tool: TOOL,
            version: VERSION,
            command: echo,
            inputs: vec![],
            seeds: Seeds {
                master_seed: Some(a.seed),
            },
            results: suite,
        };
        write_report(path, &report)?;
    }
    Ok(if all_passed {
        EXIT_OK
    } else {
        EXIT_PROPERTY_FAILURE
    })
}

fn bench_cmd(a: BenchArgs, echo: Vec<String>, out: &mut dyn Write) -> Result<i32, Error> {
    let config = BenchConfig {
        dims: a.dims,
        reps: a.reps,
        warmup_reps: a.warmup,
        master_seed: a.seed,
        methods: a.methods,
    };
    config.validate()?;
    let threads = bench::configure_threads(a.threads);
    let report: BenchReport = bench::speedup_report(&config)?;

    writeln!(
        out,
        "mode: {} ({} thread{})",
        report.mode,
        threads,
        if threads == 1 { "" } else { "s" }
    )?;
    writeln!(
        out,
        "{:>6}  {:<13} {:>12} {:>12} {:>12} {:>12} {:>5} {:>8}",
        "dim", "method", "median_s", "min_s", "mean_s", "stddev_s", "reps", "speedup"
    )?;
    for e in &report.entries {
        let speedup = report
            .speedup(e.dim)
            .map(|s| format!("{s:.2}"))
            .unwrap_or_else(|| "-".into());
        let s = &e.stats;
        writeln!(
            out,
            "{:>6}  {:<13} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>5} {:>8}",
            e.dim,
            e.method.name(),
            s.median,
            s.min,
            s.mean,
            s.stddev,
            s.reps,
            speedup
        )?;
    }
    for fit in &report.scaling {
        match fit.exponent {
            Some(x) => writeln!(out, "scaling exponent {}: {x:.3}", fit.method)?,
            None => writeln!(
                out,
                "scaling exponent {}: n/a (fewer than two dims >= {})",
                fit.method,
                bench::SCALING_MIN_DIM
            )?,
        }
    }

    if let Some(path) = &a.csv {
        std::fs::write(path, report.to_csv())?;
    }
    if let Some(path) = &a.report {
        let report = RunReport {
            tool: TOOL,
            version: VERSION,
            command: echo,
            inputs: vec![],
            seeds: Seeds {
                master_seed: Some(a.seed),
            },
            results: report,
        };
        write_report(path, &report)?;
    }
    Ok(EXIT_OK)
}
