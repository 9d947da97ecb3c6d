use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use rayon::prelude::*;
use soscert::datagen::DatasetEntry;
use soscert::pipeline::{certify, CertifyConfig, CertifyStatus, ResultRecord};
use soscert::predictor::PredictorKind;
use soscert::{detokenize, Basis, Polynomial};

use crate::io::{read_entries, report_errors};
use crate::{parse_predictor, Failure, SolveArgs, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_PARSE};

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// JSONL dataset.
    #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
    pub input: Option<PathBuf>,
    /// A single polynomial in token format.
    #[arg(long)]
    pub poly: Option<String>,
    /// oracle, heuristic, corrupted:DROP,ADD or external:COMMAND.
    #[arg(long, default_value = "heuristic", value_parser = parse_predictor)]
    pub predictor: PredictorKind,
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Results path; defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Certifies every instance in parallel; records come back in input order.
pub fn certify_all(
    instances: &[(u64, Polynomial, Option<Basis>)],
    kind: &PredictorKind,
    cfg: &CertifyConfig,
) -> anyhow::Result<Vec<ResultRecord>> {
    let predictor = kind.build();
    instances
        .par_iter()
        .map(|(id, p, truth)| {
            let out = certify(p, truth.as_ref(), predictor.as_ref(), cfg).with_context(|| format!("instance {id}"))?;
            Ok(ResultRecord::new(*id, p, &out, cfg))
        })
        .collect()
}

pub fn dataset_instances(entries: Vec<DatasetEntry>) -> Vec<(u64, Polynomial, Option<Basis>)> {
    let mut v: Vec<_> = entries.into_iter().map(|e| (e.id, e.polynomial, Some(e.basis))).collect();
    v.sort_by_key(|(id, _, _)| *id);
    v
}

pub fn run(a: CertifyArgs) -> Result<u8, Failure> {
    let cfg = a.solve.config()?;
    let (instances, errors) = match (&a.input, &a.poly) {
        (Some(path), _) => {
            let parsed = read_entries(path)?;
            (dataset_instances(parsed.records), parsed.errors)
        }
        (None, Some(tokens)) => {
            if a.predictor.needs_truth() {
                return Err(Failure::Usage("this predictor needs a dataset with ground-truth bases".into()));
            }
            match detokenize(tokens) {
                Ok(p) => (vec![(0, p, None)], Vec::new()),
                Err(e) => (Vec::new(), vec![format!("--poly: {e}")]),
            }
        }
        (None, None) => return Err(Failure::Usage("one of --input or --poly is required".into())),
    };
    report_errors(&errors);

    let records = certify_all(&instances, &a.predictor, &cfg)?;
    let mut w = crate::output(a.out.as_ref())?;
    for r in &records {
        writeln!(w, "{}", serde_json::to_string(r).map_err(anyhow::Error::from)?)?;
    }
    w.flush()?;

    Ok(if !errors.is_empty() {
        EXIT_PARSE
    } else if records.iter().any(|r| r.status == CertifyStatus::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    })
}
