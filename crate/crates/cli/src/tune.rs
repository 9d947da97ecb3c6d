use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use soscert::pipeline::{tune_rho, ResultRecord, DEFAULT_OMEGA};

use crate::io::{read_json, report_errors};
use crate::{Failure, EXIT_OK, EXIT_PARSE};

#[derive(Args, Debug)]
pub struct TuneArgs {
    /// Results JSONL written by `certify`.
    #[arg(long)]
    pub input: PathBuf,
    /// Cost exponent; repeat to compare several.
    #[arg(long = "omega", default_values_t = [DEFAULT_OMEGA])]
    pub omegas: Vec<f64>,
    #[arg(long, default_value_t = 1.01)]
    pub rho_min: f64,
    #[arg(long, default_value_t = 8.0)]
    pub rho_max: f64,
    /// Output path; defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Tuned {
    omega: f64,
    rho_star: f64,
    objective: f64,
    samples: usize,
}

/// `(m1, eta)` pairs from certified records; undecided or non-SOS ones carry no rank.
pub fn samples(records: &[ResultRecord]) -> Vec<(usize, usize)> {
    records
        .iter()
        .filter_map(|r| r.coverage_rank_estimate.map(|eta| (r.m1.max(1), eta.max(r.m1).max(1))))
        .collect()
}

pub fn run(a: TuneArgs) -> Result<u8, Failure> {
    if !(a.rho_min > 1.0 && a.rho_max >= a.rho_min && a.rho_max.is_finite()) {
        return Err(Failure::Usage("need 1 < --rho-min <= --rho-max".into()));
    }
    if a.omegas.iter().any(|w| w.is_nan() || *w <= 0.0 || w.is_infinite()) {
        return Err(Failure::Usage("--omega must be positive".into()));
    }
    let parsed = read_json::<ResultRecord>(&a.input)?;
    report_errors(&parsed.errors);
    let s = samples(&parsed.records);
    if s.is_empty() {
        return Err(Failure::Usage("no certified records with a coverage rank".into()));
    }
    let mut w = crate::output(a.out.as_ref())?;
    for &omega in &a.omegas {
        let (rho_star, objective) = tune_rho(&s, omega, (a.rho_min, a.rho_max))?;
        let t = Tuned {
            omega,
            rho_star,
            objective,
            samples: s.len(),
        };
        writeln!(w, "{}", serde_json::to_string(&t).map_err(anyhow::Error::from)?)?;
    }
    w.flush()?;
    Ok(if parsed.errors.is_empty() { EXIT_OK } else { EXIT_PARSE })
}
