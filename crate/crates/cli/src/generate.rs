use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use rand::Rng;
use rayon::prelude::*;
use soscert::datagen::{
    entry_rng, entry_to_line, generate_non_sos, generate_non_sos_verified, generate_sos, grid_preset, sidecar_line,
    DatasetEntry, GenConfig, GramStructure, Label,
};
use soscert::{half_polytope_points, SdpConfig};

use crate::{Failure, EXIT_OK};

/// Salt separating the label stream from the entry streams.
const LABEL_SALT: u64 = 0x6c61_6265_6c73_6565;

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// Number of variables.
    #[arg(long)]
    pub n: Option<usize>,
    /// Maximum degree of the basis monomials.
    #[arg(long)]
    pub d: Option<u32>,
    /// Basis size.
    #[arg(long)]
    pub size: Option<usize>,
    /// Gram structure: dense, sparse, block_diag, low_rank.
    #[arg(long, default_value = "dense")]
    pub structure: String,
    /// Named grid (g1..g4); replaces --n/--d/--size/--structure.
    #[arg(long, conflicts_with_all = ["n", "d", "size"])]
    pub grid: Option<String>,
    /// Entries per configuration.
    #[arg(long)]
    pub count: usize,
    /// Fraction of entries perturbed to be non-SOS.
    #[arg(long, default_value_t = 0.0)]
    pub non_sos_fraction: f64,
    /// Fraction of Gram eigenvalues negated when perturbing.
    #[arg(long, default_value_t = 0.15)]
    pub flip: f64,
    /// Skip the full-pool check that perturbed entries really are non-SOS.
    #[arg(long)]
    pub unverified: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Dataset path; the token sidecar goes to `<out>.tokens`.
    #[arg(long)]
    pub out: PathBuf,
}

fn configs(a: &GenerateArgs) -> Result<Vec<GenConfig>, Failure> {
    if let Some(g) = &a.grid {
        return grid_preset(g).map_err(|e| Failure::Usage(e.to_string()));
    }
    let (Some(n), Some(d), Some(size)) = (a.n, a.d, a.size) else {
        return Err(Failure::Usage("either --grid or all of --n, --d, --size are required".into()));
    };
    if n == 0 || size == 0 {
        return Err(Failure::Usage("--n and --size must be positive".into()));
    }
    let structure = GramStructure::parse(&a.structure).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(vec![GenConfig::new(n, d, size, structure)])
}

fn validate(a: &GenerateArgs) -> Result<(), Failure> {
    if !(0.0..=1.0).contains(&a.non_sos_fraction) {
        return Err(Failure::Usage("--non-sos-fraction must lie in [0, 1]".into()));
    }
    if !(a.flip > 0.0 && a.flip <= 1.0) {
        return Err(Failure::Usage("--flip must lie in (0, 1]".into()));
    }
    Ok(())
}

fn make_entry(cfg: &GenConfig, a: &GenerateArgs, id: u64) -> soscert::Result<DatasetEntry> {
    let non_sos = entry_rng(a.seed ^ LABEL_SALT, id).random::<f64>() < a.non_sos_fraction;
    let mut rng = entry_rng(a.seed, id);
    let mut entry = generate_sos(cfg, &mut rng)?;
    if non_sos {
        entry = if a.unverified {
            generate_non_sos(&entry, a.flip, &mut rng)?
        } else {
            generate_non_sos_verified(&entry, a.flip, &SdpConfig::default(), &mut rng)?.0
        };
    }
    entry.id = id;
    entry.seed = a.seed;
    Ok(entry)
}

pub fn run(a: GenerateArgs) -> Result<u8, Failure> {
    validate(&a)?;
    let cfgs = configs(&a)?;
    let jobs: Vec<(u64, &GenConfig)> = cfgs
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| (0..a.count).map(move |k| ((ci * a.count + k) as u64, c)))
        .collect();
    let entries: Vec<DatasetEntry> = jobs
        .par_iter()
        .map(|&(id, c)| make_entry(c, &a, id).with_context(|| format!("entry {id}")))
        .collect::<anyhow::Result<_>>()?;

    let mut data = crate::output(Some(&a.out))?;
    let sidecar_path = PathBuf::from(format!("{}.tokens", a.out.display()));
    let mut sidecar = crate::output(Some(&sidecar_path))?;
    for e in &entries {
        writeln!(data, "{}", entry_to_line(e)?)?;
        writeln!(sidecar, "{}", sidecar_line(e)?)?;
    }
    data.flush()?;
    sidecar.flush()?;

    let pools: Vec<usize> = entries
        .par_iter()
        .map(|e| half_polytope_points(&e.polynomial).map(|p| p.len()))
        .collect::<soscert::Result<_>>()?;
    let k = entries.len().max(1) as f64;
    let non_sos = entries.iter().filter(|e| e.label == Label::NonSos).count();
    let mean_support = entries.iter().map(|e| e.polynomial.len()).sum::<usize>() as f64 / k;
    let mean_pool = pools.iter().sum::<usize>() as f64 / k;
    println!(
        "entries {} (SOS {}, NonSOS {non_sos}), mean |S(p)| {mean_support:.1}, mean pool {mean_pool:.1}",
        entries.len(),
        entries.len() - non_sos
    );
    Ok(EXIT_OK)
}
