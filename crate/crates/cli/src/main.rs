mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hermite_riesz::normlab::Operator;
use hermite_riesz::report::{all_pass, serialize_reports, write_report, ReportFormat};
use hermite_riesz::suites::{run_suite, Suite, SuiteError};

use config::{thread_count, Settings};

const USAGE_ERROR: u8 = 2;
const CHECK_FAILED: u8 = 1;

#[derive(Debug, Parser)]
#[command(name = "hermite-riesz", version, about = "Numerical checks for Hermite Riesz transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Dimensions, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Exponents p, comma separated.
    #[arg(long = "p", global = true, value_delimiter = ',')]
    exponents: Option<Vec<f64>>,
    /// Degree cap N for random expansions.
    #[arg(long, global = true)]
    degree: Option<u32>,
    /// Random inputs per (operator, d, p) cell.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Relative tolerance for time integrals.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Operators for norm-sweep: S, Rprime, Rtilde, Rstar, R, U or U:<a>.
    #[arg(long = "op", global = true, value_delimiter = ',')]
    ops: Option<Vec<Operator>>,
    /// Report file; the report goes to stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// json or csv.
    #[arg(long, global = true)]
    format: Option<ReportFormat>,
    /// key = value file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Ladder, factorization, eigenvalue and adjointness identities.
    VerifyAlgebra,
    /// Mehler kernel, heat semigroup and kernel-mass bounds.
    VerifyKernels,
    /// Bellman function bounds, Hessian and drift inequalities.
    VerifyBellman,
    /// The time-integral identity for <R'_i f, g>.
    VerifyLemma3,
    /// Empirical L^p operator-norm ratios.
    NormSweep,
    /// Bilinear embedding and the R' duality chain.
    BilinearCheck,
    /// Every suite.
    All,
}

impl Command {
    fn suite(self) -> Suite {
        match self {
            Command::VerifyAlgebra => Suite::Algebra,
            Command::VerifyKernels => Suite::Kernels,
            Command::VerifyBellman => Suite::Bellman,
            Command::VerifyLemma3 => Suite::Lemma3,
            Command::NormSweep => Suite::NormSweep,
            Command::BilinearCheck => Suite::Bilinear,
            Command::All => Suite::All,
        }
    }
}

fn usage(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(USAGE_ERROR)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match thread_count(std::env::var("HERMITE_RIESZ_THREADS").ok()) {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                return usage(e);
            }
        }
        Ok(None) => {}
        Err(e) => return usage(e),
    }
    let file = match &cli.config {
        Some(path) => match Settings::load(path) {
            Ok(s) => s,
            Err(e) => return usage(e),
        },
        None => Settings::default(),
    };
    let flags = Settings {
        dims: cli.dims,
        exponents: cli.exponents,
        degree: cli.degree,
        samples: cli.samples,
        seed: cli.seed,
        rel_tol: cli.rel_tol,
        ops: cli.ops,
        output: cli.output,
        format: cli.format,
    };
    let settings = file.overlay(flags);
    let format = settings.format.unwrap_or(ReportFormat::Json);

    let reports = match run_suite(cli.command.suite(), &settings.suite_config()) {
        Ok(r) => r,
        Err(e @ (SuiteError::Config(_) | SuiteError::UnsupportedDimension { .. })) => return usage(e),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(CHECK_FAILED);
        }
    };

    match &settings.output {
        Some(path) => {
            if let Err(e) = write_report(&reports, format, path) {
                eprintln!("error: {e}");
                return ExitCode::from(CHECK_FAILED);
            }
        }
        None => match serialize_reports(&reports, format) {
            Ok(text) => {
                let mut out = std::io::stdout().lock();
                if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                    return ExitCode::from(CHECK_FAILED);
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(CHECK_FAILED);
            }
        },
    }

    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    for r in &failed {
        eprintln!("{r}");
    }
    eprintln!("{}: {} checks, {} failed", cli.command.suite(), reports.len(), failed.len());
    if all_pass(&reports) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(CHECK_FAILED)
    }
}
