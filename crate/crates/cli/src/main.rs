mod bench;
mod bounds;
mod certify;
mod generate;
mod io;
mod tune;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use soscert::pipeline::{CertifyConfig, RepairMode, DEFAULT_RHO};
use soscert::predictor::{PredictorKind, DEFAULT_PERMUTATIONS};
use soscert::SdpConfig;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;
pub const EXIT_PARSE: u8 = 4;
const EXIT_RUNTIME: u8 = 1;

/// Environment variable overriding the default worker count.
pub const THREADS_ENV: &str = "SOSCERT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "soscert", version, about = "Sum-of-squares certification with learned monomial bases")]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = THREADS_ENV)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a labelled dataset plus its token sidecar.
    Generate(generate::GenerateArgs),
    /// Certify a dataset or a single polynomial.
    Certify(certify::CertifyArgs),
    /// Aggregate solve counts and phase timings over a config matrix.
    Bench(bench::BenchArgs),
    /// Basis-size lower bounds per dataset entry.
    Bounds(bounds::BoundsArgs),
    /// Pick the expansion factor minimising the empirical cost.
    TuneRho(tune::TuneArgs),
}

/// Flags shared by `certify` and `bench`.
#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    /// Geometric expansion factor of the basis schedule.
    #[arg(long, default_value_t = DEFAULT_RHO)]
    pub rho: f64,
    /// Permutations used for candidate scoring.
    #[arg(long = "L", default_value_t = DEFAULT_PERMUTATIONS)]
    pub score_l: usize,
    /// Coverage repair variant: extended or paper-raw.
    #[arg(long, default_value = "extended", value_parser = parse_repair)]
    pub repair: RepairMode,
    /// Seed for permutation sampling and corrupted predictions.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Primal feasibility tolerance of the SDP solver.
    #[arg(long, default_value_t = SdpConfig::default().tol_primal)]
    pub tol: f64,
    /// Iteration cap per SDP solve.
    #[arg(long, default_value_t = SdpConfig::default().max_iter)]
    pub max_iter: usize,
}

impl SolveArgs {
    pub fn config(&self) -> Result<CertifyConfig, Failure> {
        if self.rho.is_nan() || self.rho <= 1.0 || self.rho.is_infinite() {
            return Err(Failure::Usage(format!("--rho must be a finite number above 1, got {}", self.rho)));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Failure::Usage(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Failure::Usage("--max-iter must be positive".into()));
        }
        let sdp = SdpConfig {
            tol_primal: self.tol,
            max_iter: self.max_iter,
            ..SdpConfig::default()
        };
        Ok(CertifyConfig {
            rho: self.rho,
            score_l: self.score_l,
            seed: self.seed,
            repair: self.repair,
            repair_max_iter: None,
            sdp,
        })
    }
}

fn parse_repair(s: &str) -> Result<RepairMode, String> {
    RepairMode::parse(s).map_err(|e| e.to_string())
}

pub fn parse_predictor(s: &str) -> Result<PredictorKind, String> {
    PredictorKind::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<soscert::Error> for Failure {
    fn from(e: soscert::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

/// Opens `path` for writing, or stdout when absent.
pub fn output(path: Option<&PathBuf>) -> Result<Box<dyn std::io::Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let threads = match cli.threads {
        Some(0) => return Err(Failure::Usage("--threads must be positive".into())),
        Some(t) => t,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Runtime(e.into()))?;
    pool.install(|| match cli.command {
        Command::Generate(a) => generate::run(a),
        Command::Certify(a) => certify::run(a),
        Command::Bench(a) => bench::run(a),
        Command::Bounds(a) => bounds::run(a),
        Command::TuneRho(a) => tune::run(a),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
