//! Reverse sampling of SOS polynomials and dataset serialization.
//!
//! An entry is produced by drawing a basis `B` of distinct monomials, a
//! structured PSD Gram matrix `Q`, and expanding `p = z_Bᵀ Q z_B`. Non-SOS
//! entries flip the sign of a fraction of `Q`'s positive eigenvalues.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::newton::half_polytope_points;
use crate::polycore::{covers, tokenize, tokenize_basis, Basis, Monomial, Polynomial};
use crate::sdp::{assemble, solve_feasibility, SdpConfig, SdpStatus};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SPARSE_DENSITY: f64 = 0.1;
pub const DEFAULT_CONSTANT_PROB: f64 = 0.9;
const SPARSE_SHIFT: f64 = 0.1;
const BLOCK_MIN: usize = 2;
const BLOCK_MAX: usize = 6;
const NON_SOS_ATTEMPTS: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GramStructure {
    Dense,
    Sparse { density: f64 },
    /// `None` draws a random composition of `m` into blocks of 2 to 6.
    BlockDiag { block_sizes: Option<Vec<usize>> },
    /// `None` uses rank `⌈m/4⌉`.
    LowRank { rank: Option<usize> },
}

impl GramStructure {
    pub fn sparse() -> Self {
        GramStructure::Sparse {
            density: DEFAULT_SPARSE_DENSITY,
        }
    }

    pub fn block_diag() -> Self {
        GramStructure::BlockDiag { block_sizes: None }
    }

    pub fn low_rank() -> Self {
        GramStructure::LowRank { rank: None }
    }

    /// The four structures with default parameters.
    pub fn all() -> [GramStructure; 4] {
        [
            GramStructure::Dense,
            GramStructure::sparse(),
            GramStructure::block_diag(),
            GramStructure::low_rank(),
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            GramStructure::Dense => "dense",
            GramStructure::Sparse { .. } => "sparse",
            GramStructure::BlockDiag { .. } => "block_diag",
            GramStructure::LowRank { .. } => "low_rank",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(GramStructure::Dense),
            "sparse" => Ok(GramStructure::sparse()),
            "block_diag" | "block-diag" | "blockdiag" => Ok(GramStructure::block_diag()),
            "low_rank" | "low-rank" | "lowrank" => Ok(GramStructure::low_rank()),
            other => Err(Error::InvalidInput(format!("unknown Gram structure '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "SOS")]
    Sos,
    #[serde(rename = "NonSOS")]
    NonSos,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub id: u64,
    pub seed: u64,
    pub n: usize,
    pub d: u32,
    pub structure: GramStructure,
    pub polynomial: Polynomial,
    pub basis: Basis,
    /// Row-major Gram matrix in basis order; absent for non-SOS entries.
    pub gram: Option<Vec<f64>>,
    pub label: Label,
}

impl DatasetEntry {
    pub fn gram_matrix(&self) -> Option<DMatrix<f64>> {
        let m = self.basis.len();
        self.gram
            .as_ref()
            .map(|g| DMatrix::from_row_slice(m, m, g))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n: usize,
    pub d: u32,
    pub basis_size: usize,
    pub structure: GramStructure,
    pub coeff_scale: f64,
    /// Probability that the constant monomial is forced into the basis.
    pub constant_prob: f64,
}

impl GenConfig {
    pub fn new(n: usize, d: u32, basis_size: usize, structure: GramStructure) -> Self {
        GenConfig {
            n,
            d,
            basis_size,
            structure,
            coeff_scale: 1.0,
            constant_prob: DEFAULT_CONSTANT_PROB,
        }
    }
}

/// Configurations of the named training grids `g1`..`g4`.
pub fn grid_preset(name: &str) -> Result<Vec<GenConfig>> {
    let mut shapes: Vec<(usize, u32, usize)> = Vec::new();
    match name {
        "g1" => {
            for d in (4..=20).step_by(2) {
                for size in [10, 20, 30] {
                    shapes.push((8, d, size));
                }
            }
        }
        "g2" => {
            for n in (4..=20).step_by(2) {
                shapes.push((n, 12, 30));
            }
        }
        "g3" => shapes.push((4, 6, 20)),
        "g4" => shapes.push((6, 20, 60)),
        other => return Err(Error::InvalidInput(format!("unknown grid preset '{other}'"))),
    }
    Ok(shapes
        .into_iter()
        .flat_map(|(n, d, size)| GramStructure::all().into_iter().map(move |s| GenConfig::new(n, d, size, s)))
        .collect())
}

/// Per-entry generator: independent of how many entries are drawn and in which order.
pub fn entry_rng(master_seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(id);
    rng
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of monomials in `n` variables of degree at most `dmax`.
pub fn monomial_count(n: usize, dmax: u32) -> f64 {
    binomial(n as u64 + dmax as u64, dmax as u64)
}

/// Uniform draw over all monomials of degree `<= dmax`.
pub fn sample_monomial<R: Rng + ?Sized>(n: usize, dmax: u32, rng: &mut R) -> Monomial {
    let weights: Vec<f64> = (0..=dmax as u64)
        .map(|k| binomial(n as u64 + k - 1, k))
        .collect();
    let k = WeightedIndex::new(&weights)
        .map(|w| w.sample(rng))
        .unwrap_or(0);
    sample_composition(n, k, rng)
}

/// Uniform composition of `k` into `n` nonnegative parts (stars and bars).
fn sample_composition<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Monomial {
    if n == 1 {
        return Monomial::new([k as u32]);
    }
    let mut bars = index::sample(rng, k + n - 1, n - 1).into_vec();
    bars.sort_unstable();
    let mut exps = Vec::with_capacity(n);
    let mut prev: isize = -1;
    for &b in &bars {
        exps.push((b as isize - prev - 1) as u32);
        prev = b as isize;
    }
    exps.push((k + n - 1) as u32 - (prev + 1) as u32);
    Monomial::new(exps)
}

fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

fn random_blocks<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<usize> {
    if m < BLOCK_MIN {
        return vec![m];
    }
    let mut sizes = Vec::new();
    let mut left = m;
    while left > 0 {
        if left <= BLOCK_MAX && (left < 2 * BLOCK_MIN || rng.random_bool(0.5)) {
            sizes.push(left);
            break;
        }
        // Leave at least one full block behind.
        let hi = BLOCK_MAX.min(left - BLOCK_MIN);
        let s = rng.random_range(BLOCK_MIN..=hi);
        sizes.push(s);
        left -= s;
    }
    sizes
}

/// Structured PSD matrix of order `m`.
pub fn sample_psd<R: Rng + ?Sized>(
    structure: &GramStructure,
    m: usize,
    coeff_scale: f64,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    if m == 0 {
        return Err(Error::EmptyBasis);
    }
    let q = match structure {
        GramStructure::Dense => {
            let a = gaussian(m, m, rng);
            &a * a.transpose()
        }
        GramStructure::LowRank { rank } => {
            let r = rank.unwrap_or(m.div_ceil(4));
            if r == 0 || r > m {
                return Err(Error::InvalidInput(format!("rank {r} outside 1..={m}")));
            }
            let a = gaussian(m, r, rng);
            &a * a.transpose()
        }
        GramStructure::BlockDiag { block_sizes } => {
            let sizes = match block_sizes {
                Some(s) if s.iter().sum::<usize>() == m && !s.contains(&0) => s.clone(),
                Some(s) => {
                    return Err(Error::InvalidInput(format!("block sizes {s:?} do not partition {m}")));
                }
                None => random_blocks(m, rng),
            };
            let mut q = DMatrix::zeros(m, m);
            let mut at = 0;
            for s in sizes {
                let a = gaussian(s, s, rng);
                q.view_mut((at, at), (s, s)).copy_from(&(&a * a.transpose()));
                at += s;
            }
            q
        }
        GramStructure::Sparse { density } => {
            if !(*density > 0.0 && *density <= 1.0) {
                return Err(Error::InvalidInput(format!("density {density} outside (0, 1]")));
            }
            let mut q = DMatrix::zeros(m, m);
            for i in 0..m {
                for j in i + 1..m {
                    if rng.random_bool(*density) {
                        let v: f64 = rng.sample(StandardNormal);
                        q[(i, j)] = v;
                        q[(j, i)] = v;
                    }
                }
            }
            let lmin = SymmetricEigen::new(q.clone()).eigenvalues.min();
            let shift = (-lmin).max(0.0) + SPARSE_SHIFT;
            for i in 0..m {
                q[(i, i)] += shift;
            }
            q
        }
    };
    Ok(q * coeff_scale)
}

/// `z_Bᵀ Q z_B` with exact-zero products dropped.
pub fn expand(basis: &Basis, q: &DMatrix<f64>) -> Result<Polynomial> {
    let n = basis.n_vars().ok_or(Error::EmptyBasis)?;
    let ms = basis.monomials();
    let mut terms = Vec::with_capacity(ms.len() * ms.len());
    for i in 0..ms.len() {
        for j in 0..ms.len() {
            if q[(i, j)] != 0.0 {
                terms.push((ms[i].mul(&ms[j]), q[(i, j)]));
            }
        }
    }
    Polynomial::new(n, terms)
}

fn sample_basis<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> Result<Basis> {
    let half = cfg.d / 2;
    let available = monomial_count(cfg.n, half);
    if cfg.basis_size == 0 {
        return Err(Error::EmptyBasis);
    }
    if cfg.basis_size as f64 > available {
        return Err(Error::PoolExhausted {
            requested: cfg.basis_size,
            available: available as usize,
        });
    }
    let mut chosen = std::collections::BTreeSet::new();
    if rng.random_bool(cfg.constant_prob.clamp(0.0, 1.0)) {
        chosen.insert(Monomial::one(cfg.n));
    }
    while chosen.len() < cfg.basis_size {
        chosen.insert(sample_monomial(cfg.n, half, rng));
    }
    Basis::new(chosen.into_iter().collect())
}

/// One SOS entry drawn from `rng`.
pub fn generate_sos<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> Result<DatasetEntry> {
    let basis = sample_basis(cfg, rng)?;
    let q = sample_psd(&cfg.structure, basis.len(), cfg.coeff_scale, rng)?;
    let polynomial = expand(&basis, &q)?;
    if !covers(&basis, &polynomial)? {
        return Err(Error::NumericalFailure("expanded polynomial escapes its basis".into()));
    }
    let m = basis.len();
    let gram = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| q[(i, j)]).collect();
    Ok(DatasetEntry {
        id: 0,
        seed: 0,
        n: cfg.n,
        d: cfg.d,
        structure: cfg.structure.clone(),
        polynomial,
        basis,
        gram: Some(gram),
        label: Label::Sos,
    })
}

/// Flips `⌈flip_fraction · m⌉` positive eigenvalues of the entry's Gram matrix.
pub fn generate_non_sos<R: Rng + ?Sized>(entry: &DatasetEntry, flip_fraction: f64, rng: &mut R) -> Result<DatasetEntry> {
    let q = entry.gram_matrix().ok_or(Error::MissingGroundTruth)?;
    let flipped = flip_eigenvalues(&q, flip_fraction, rng)?;
    let polynomial = expand(&entry.basis, &flipped)?;
    Ok(DatasetEntry {
        polynomial,
        gram: None,
        label: Label::NonSos,
        ..entry.clone()
    })
}

fn flip_eigenvalues<R: Rng + ?Sized>(q: &DMatrix<f64>, flip_fraction: f64, rng: &mut R) -> Result<DMatrix<f64>> {
    let m = q.nrows();
    let eig = SymmetricEigen::new(q.clone());
    let top = eig.eigenvalues.max().max(0.0);
    let positive: Vec<usize> = (0..m)
        .filter(|&i| eig.eigenvalues[i] > 1e-12 * top.max(1.0))
        .collect();
    if positive.is_empty() {
        return Err(Error::InvalidInput("no positive eigenvalue to flip".into()));
    }
    let k = ((flip_fraction * m as f64).ceil() as usize).clamp(1, positive.len());
    let mut values = eig.eigenvalues.clone();
    for pick in index::sample(rng, positive.len(), k) {
        let i = positive[pick];
        values[i] = -values[i];
    }
    let mut flipped = &eig.eigenvectors * DMatrix::from_diagonal(&values) * eig.eigenvectors.transpose();
    // Keep the structural zeros of the original pattern.
    for i in 0..m {
        for j in 0..m {
            if q[(i, j)] == 0.0 {
                flipped[(i, j)] = 0.0;
            }
        }
    }
    Ok((&flipped + flipped.transpose()) * 0.5)
}

/// Like [`generate_non_sos`], but keeps only perturbations that the
/// full-pool solve rejects. Returns the entry and the number of rejections.
pub fn generate_non_sos_verified<R: Rng + ?Sized>(
    entry: &DatasetEntry,
    flip_fraction: f64,
    sdp: &SdpConfig,
    rng: &mut R,
) -> Result<(DatasetEntry, usize)> {
    for attempt in 0..NON_SOS_ATTEMPTS {
        let cand = generate_non_sos(entry, flip_fraction, rng)?;
        if cand.polynomial.is_empty() {
            continue;
        }
        let pool = Basis::new(half_polytope_points(&cand.polynomial)?.into_iter().collect())?;
        if pool.is_empty() || !covers(&pool, &cand.polynomial)? {
            return Ok((cand, attempt));
        }
        let res = solve_feasibility(&assemble(&pool, &cand.polynomial)?, sdp)?;
        if res.status == SdpStatus::Infeasible {
            return Ok((cand, attempt));
        }
    }
    Err(Error::InvalidInput(format!(
        "no certified non-SOS perturbation within {NON_SOS_ATTEMPTS} attempts"
    )))
}

/// Entry `id` of a dataset drawn with `master_seed`.
pub fn generate_entry(cfg: &GenConfig, master_seed: u64, id: u64, non_sos: Option<f64>) -> Result<DatasetEntry> {
    let mut rng = entry_rng(master_seed, id);
    let mut entry = generate_sos(cfg, &mut rng)?;
    if let Some(f) = non_sos {
        entry = generate_non_sos(&entry, f, &mut rng)?;
    }
    entry.id = id;
    entry.seed = master_seed;
    Ok(entry)
}

/// Writes entries as JSONL, one record per line.
pub fn write_dataset(path: &Path, entries: &[DatasetEntry]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for e in entries {
        writeln!(w, "{}", entry_to_line(e)?)?;
    }
    w.flush()?;
    Ok(())
}

pub fn entry_to_line(e: &DatasetEntry) -> Result<String> {
    let mut v = serde_json::to_value(e)?;
    if let serde_json::Value::Object(map) = &mut v {
        map.insert("schema_version".into(), SCHEMA_VERSION.into());
    }
    Ok(serde_json::to_string(&v)?)
}

pub fn entry_from_line(line: &str) -> Result<DatasetEntry> {
    let v: serde_json::Value = serde_json::from_str(line)?;
    let found = v.get("schema_version").and_then(|s| s.as_u64()).unwrap_or(0) as u32;
    if found != SCHEMA_VERSION {
        return Err(Error::SchemaVersion {
            found,
            expected: SCHEMA_VERSION,
        });
    }
    Ok(serde_json::from_value(v)?)
}

pub fn read_dataset(path: &Path) -> Result<Vec<DatasetEntry>> {
    let r = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(entry_from_line(&line)?);
    }
    Ok(out)
}

/// `input<TAB>target` token line for one entry.
pub fn sidecar_line(e: &DatasetEntry) -> Result<String> {
    Ok(format!("{}\t{}", tokenize(&e.polynomial)?, tokenize_basis(&e.basis)))
}

pub fn write_sidecar(path: &Path, entries: &[DatasetEntry]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for e in entries {
        writeln!(w, "{}", sidecar_line(e)?)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::tests::mono;
    use crate::sdp::verify_certificate;

    #[test]
    fn constant_only_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert!(sample_monomial(3, 0, &mut rng).is_one());
        }
    }

    #[test]
    fn composition_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let m = sample_monomial(4, 5, &mut rng);
            assert_eq!(m.n_vars(), 4);
            assert!(m.degree() <= 5);
        }
    }

    #[test]
    fn block_structure_has_structural_zeros() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = sample_psd(&GramStructure::BlockDiag { block_sizes: Some(vec![2, 1]) }, 3, 1.0, &mut rng).unwrap();
        assert_eq!(q[(0, 2)], 0.0);
        assert_eq!(q[(1, 2)], 0.0);
        for m in 1..40 {
            let blocks = random_blocks(m, &mut rng);
            assert_eq!(blocks.iter().sum::<usize>(), m);
            if m >= 2 {
                assert!(blocks.iter().all(|&b| (BLOCK_MIN..=BLOCK_MAX).contains(&b)), "{blocks:?}");
            }
        }
    }

    #[test]
    fn low_rank_has_bounded_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let q = sample_psd(&GramStructure::LowRank { rank: Some(1) }, 3, 1.0, &mut rng).unwrap();
        let mut ev: Vec<f64> = SymmetricEigen::new(q).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!(ev[0].abs() < 1e-10 && ev[1].abs() < 1e-10 && ev[2] > 0.0);
    }

    #[test]
    fn sparse_is_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let q = sample_psd(&GramStructure::sparse(), 30, 1.0, &mut rng).unwrap();
            assert!(SymmetricEigen::new(q).eigenvalues.min() >= 0.1 - 1e-9);
        }
    }

    #[test]
    fn generated_entries_verify() {
        for s in GramStructure::all() {
            let cfg = GenConfig::new(2, 4, 3, s);
            let e = generate_entry(&cfg, 42, 7, None).unwrap();
            assert_eq!(e.basis.len(), 3);
            assert!(e.polynomial.len() <= 6);
            let q = e.gram_matrix().unwrap();
            assert!(verify_certificate(&q, &e.basis, &e.polynomial, 1e-8).unwrap());
            assert_eq!(generate_entry(&cfg, 42, 7, None).unwrap(), e);
        }
    }

    #[test]
    fn single_constant_basis() {
        let mut cfg = GenConfig::new(2, 4, 1, GramStructure::Dense);
        cfg.constant_prob = 1.0;
        let e = generate_entry(&cfg, 0, 0, None).unwrap();
        assert_eq!(e.basis.monomials(), &[mono(&[0, 0])]);
        assert_eq!(e.polynomial.len(), 1);
        assert!(e.polynomial.coefficient(&mono(&[0, 0])) > 0.0);
    }

    #[test]
    fn pool_exhaustion() {
        let cfg = GenConfig::new(2, 2, 4, GramStructure::Dense);
        assert!(matches!(
            generate_entry(&cfg, 0, 0, None),
            Err(Error::PoolExhausted { requested: 4, available: 3 })
        ));
    }

    #[test]
    fn non_sos_signature() {
        let cfg = GenConfig::new(2, 4, 3, GramStructure::Dense);
        let mut rng = entry_rng(9, 0);
        let e = generate_sos(&cfg, &mut rng).unwrap();
        let mut rng = entry_rng(9, 1);
        let ns = generate_non_sos(&e, 0.2, &mut rng).unwrap();
        assert_eq!(ns.label, Label::NonSos);
        assert!(ns.gram.is_none());
        let q = e.gram_matrix().unwrap();
        let f = flip_eigenvalues(&q, 0.2, &mut rng).unwrap();
        let ev = SymmetricEigen::new(f).eigenvalues;
        assert_eq!(ev.iter().filter(|&&v| v < 0.0).count(), 1);
        assert_eq!(ev.iter().filter(|&&v| v > 0.0).count(), 2);
        let neg_only = DMatrix::from_element(1, 1, 2.0);
        let f = flip_eigenvalues(&neg_only, 0.1, &mut rng).unwrap();
        assert_eq!(f[(0, 0)], -2.0);
        assert!(flip_eigenvalues(&(-neg_only), 0.1, &mut rng).is_err());
    }

    #[test]
    fn schema_version_mismatch() {
        let cfg = GenConfig::new(2, 4, 3, GramStructure::Dense);
        let e = generate_entry(&cfg, 1, 0, None).unwrap();
        let line = entry_to_line(&e).unwrap();
        assert_eq!(entry_from_line(&line).unwrap(), e);
        let bumped = line.replace("\"schema_version\":1", "\"schema_version\":2");
        assert!(matches!(entry_from_line(&bumped), Err(Error::SchemaVersion { found: 2, expected: 1 })));
    }
}
