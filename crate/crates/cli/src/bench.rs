use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use soscert::pipeline::{CertifyStatus, ResultRecord};
use soscert::predictor::PredictorKind;

use crate::certify::{certify_all, dataset_instances};
use crate::io::{read_entries, report_errors};
use crate::{parse_predictor, Failure, SolveArgs, EXIT_OK, EXIT_PARSE};

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// JSONL dataset.
    #[arg(long)]
    pub input: PathBuf,
    /// Predictors to compare; repeat the flag for more rows.
    #[arg(long = "predictor", default_value = "heuristic", value_parser = parse_predictor)]
    pub predictors: Vec<PredictorKind>,
    /// Extra expansion factors; each one adds rows next to --rho.
    #[arg(long = "also-rho")]
    pub also_rho: Vec<f64>,
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Report path; defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn label(kind: &PredictorKind) -> String {
    match kind {
        PredictorKind::Oracle => "oracle".into(),
        PredictorKind::Heuristic => "heuristic".into(),
        PredictorKind::CorruptedOracle { drop_k, add_k } => format!("corrupted:{drop_k},{add_k}"),
        PredictorKind::External { command } => format!("external:{command}"),
    }
}

/// One Markdown table row summarising a batch of records.
pub fn summary_row(name: &str, rho: f64, records: &[ResultRecord]) -> String {
    let k = records.len().max(1) as f64;
    let count = |s| records.iter().filter(|r| r.status == s).count();
    let mean = |f: &dyn Fn(&ResultRecord) -> f64| records.iter().map(f).sum::<f64>() / k;
    let single = records.iter().filter(|r| r.solves == 1).count() as f64 / k;
    let t = |f: &dyn Fn(&ResultRecord) -> f64| records.iter().map(f).sum::<f64>();
    let phases = [
        t(&|r| r.timings_ms.newton),
        t(&|r| r.timings_ms.predict),
        t(&|r| r.timings_ms.repair),
        t(&|r| r.timings_ms.score),
        t(&|r| r.timings_ms.sdp_total),
    ];
    let total: f64 = phases.iter().sum();
    let share = |x: f64| if total > 0.0 { 100.0 * x / total } else { 0.0 };
    format!(
        "| {name} | {rho} | {} | {} | {} | {} | {:.2} | {:.1} | {:.1} | {:.1} | {:.2} | {:.1} | {:.1} | {:.1} | {:.1} | {:.1} | {:.1} |",
        records.len(),
        count(CertifyStatus::Sos),
        count(CertifyStatus::NotSos),
        count(CertifyStatus::Inconclusive),
        mean(&|r| r.solves as f64),
        100.0 * single,
        mean(&|r| r.basis_size_final as f64),
        mean(&|r| r.pool_size as f64),
        mean(&|r| r.repair_additions as f64),
        share(phases[0]),
        share(phases[1]),
        share(phases[2]),
        share(phases[3]),
        share(phases[4]),
        total / k,
    )
}

pub const HEADER: &str = "| predictor | rho | instances | SOS | NotSOS | Inconclusive | mean solves | single solve % | mean final size | mean pool | mean repair additions | newton % | predict % | repair % | score % | SDP % | mean ms |\n|---|---|---|---|---|---|---|---|---|---|---|---|---|---|---|---|---|";

pub fn run(a: BenchArgs) -> Result<u8, Failure> {
    let base = a.solve.config()?;
    let mut rhos = vec![base.rho];
    for &r in &a.also_rho {
        if r.is_nan() || r <= 1.0 || r.is_infinite() {
            return Err(Failure::Usage(format!("--also-rho must be a finite number above 1, got {r}")));
        }
        rhos.push(r);
    }
    let parsed = read_entries(&a.input)?;
    report_errors(&parsed.errors);
    let instances = dataset_instances(parsed.records);

    let mut w = crate::output(a.out.as_ref())?;
    writeln!(w, "# Benchmark\n\n{} instances from {}\n", instances.len(), a.input.display())?;
    writeln!(w, "{HEADER}")?;
    for kind in &a.predictors {
        for &rho in &rhos {
            let cfg = soscert::CertifyConfig { rho, ..base.clone() };
            let records = certify_all(&instances, kind, &cfg)?;
            writeln!(w, "{}", summary_row(&label(kind), rho, &records))?;
        }
    }
    w.flush()?;
    Ok(if parsed.errors.is_empty() { EXIT_OK } else { EXIT_PARSE })
}
