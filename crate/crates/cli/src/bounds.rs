use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use soscert::datagen::DatasetEntry;
use soscert::{half_polytope_points, lower_bound_combinatorial, lower_bound_vertices};

use crate::io::{read_entries, report_errors};
use crate::{Failure, EXIT_OK, EXIT_PARSE};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Markdown,
    Csv,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// JSONL dataset.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    /// Table path; defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsRow {
    pub id: u64,
    pub basis: usize,
    pub lb_v: usize,
    pub lb_c: usize,
    pub pool: usize,
}

impl BoundsRow {
    pub fn compute(e: &DatasetEntry) -> soscert::Result<Self> {
        Ok(BoundsRow {
            id: e.id,
            basis: e.basis.len(),
            lb_v: lower_bound_vertices(&e.polynomial)?.bound,
            lb_c: lower_bound_combinatorial(&e.polynomial),
            pool: half_polytope_points(&e.polynomial)?.len(),
        })
    }

    fn cells(&self) -> [String; 9] {
        let ratio = |lb: usize| if lb == 0 { f64::NAN } else { self.basis as f64 / lb as f64 };
        [
            self.id.to_string(),
            self.basis.to_string(),
            self.lb_v.to_string(),
            self.lb_c.to_string(),
            self.pool.to_string(),
            (self.basis as i64 - self.lb_v as i64).to_string(),
            format!("{:.3}", ratio(self.lb_v)),
            (self.basis as i64 - self.lb_c as i64).to_string(),
            format!("{:.3}", ratio(self.lb_c)),
        ]
    }
}

const COLUMNS: [&str; 9] = ["id", "|B|", "LB_v", "LB_c", "pool", "gap_v", "ratio_v", "gap_c", "ratio_c"];

pub fn render(rows: &[BoundsRow], format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str(&COLUMNS.join(","));
            s.push('\n');
            for r in rows {
                s.push_str(&r.cells().join(","));
                s.push('\n');
            }
        }
        Format::Markdown => {
            s.push_str(&format!("| {} |\n", COLUMNS.join(" | ")));
            s.push_str(&format!("|{}\n", "---|".repeat(COLUMNS.len())));
            for r in rows {
                s.push_str(&format!("| {} |\n", r.cells().join(" | ")));
            }
            if !rows.is_empty() {
                let k = rows.len() as f64;
                let mean = |f: &dyn Fn(&BoundsRow) -> f64| rows.iter().map(f).sum::<f64>() / k;
                s.push_str(&format!(
                    "| mean | {:.2} | {:.2} | {:.2} | {:.2} | {:.2} | {:.3} | {:.2} | {:.3} |\n",
                    mean(&|r| r.basis as f64),
                    mean(&|r| r.lb_v as f64),
                    mean(&|r| r.lb_c as f64),
                    mean(&|r| r.pool as f64),
                    mean(&|r| r.basis as f64 - r.lb_v as f64),
                    mean(&|r| r.basis as f64 / r.lb_v.max(1) as f64),
                    mean(&|r| r.basis as f64 - r.lb_c as f64),
                    mean(&|r| r.basis as f64 / r.lb_c.max(1) as f64),
                ));
            }
        }
    }
    s
}

pub fn run(a: BoundsArgs) -> Result<u8, Failure> {
    let parsed = read_entries(&a.input)?;
    report_errors(&parsed.errors);
    let mut entries = parsed.records;
    entries.sort_by_key(|e| e.id);
    let rows: Vec<BoundsRow> = entries
        .par_iter()
        .map(BoundsRow::compute)
        .collect::<soscert::Result<_>>()?;
    let mut w = crate::output(a.out.as_ref())?;
    w.write_all(render(&rows, a.format).as_bytes())?;
    w.flush()?;
    Ok(if parsed.errors.is_empty() { EXIT_OK } else { EXIT_PARSE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markdown_has_mean_row() {
        let rows = [
            BoundsRow { id: 0, basis: 4, lb_v: 4, lb_c: 3, pool: 9 },
            BoundsRow { id: 1, basis: 6, lb_v: 5, lb_c: 3, pool: 12 },
        ];
        let md = render(&rows, Format::Markdown);
        assert!(md.contains("| 1 | 6 | 5 | 3 | 12 | 1 | 1.200 | 3 | 2.000 |"));
        assert!(md.contains("| mean | 5.00 | 4.50 | 3.00 | 10.50 | 0.50 | 1.100 | 2.00 | 1.667 |"));
    }
}
