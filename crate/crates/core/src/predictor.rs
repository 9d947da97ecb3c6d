//! Basis predictors and permutation-frequency scoring.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::process::{Command, Stdio};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::newton::{forced_monomials, HullStrategy, LatticePolytope};
use crate::polycore::{covers, detokenize_basis, tokenize, Basis, Monomial, Permutation, Polynomial};

pub const DEFAULT_PERMUTATIONS: usize = 4;

/// What a predictor sees for one polynomial.
#[derive(Clone, Copy, Debug)]
pub struct PredictInput<'a> {
    pub polynomial: &'a Polynomial,
    /// Ground-truth basis, when the polynomial came from a dataset.
    pub truth: Option<&'a Basis>,
    /// Half Newton polytope lattice points of `polynomial`.
    pub pool: &'a BTreeSet<Monomial>,
}

pub trait BasisPredictor: Send + Sync {
    fn predict(&self, input: &PredictInput<'_>, rng: &mut ChaCha8Rng) -> Result<Basis>;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictorKind {
    Oracle,
    CorruptedOracle { drop_k: usize, add_k: usize },
    Heuristic,
    /// Shell command speaking the token protocol on stdin/stdout.
    External { command: String },
}

impl PredictorKind {
    /// Parses `oracle`, `heuristic`, `corrupted:DROP,ADD` or `external:COMMAND`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown predictor '{s}'"));
        match s {
            "oracle" => return Ok(PredictorKind::Oracle),
            "heuristic" => return Ok(PredictorKind::Heuristic),
            _ => {}
        }
        if let Some(cmd) = s.strip_prefix("external:") {
            if cmd.trim().is_empty() {
                return Err(bad());
            }
            return Ok(PredictorKind::External {
                command: cmd.to_string(),
            });
        }
        if let Some(rest) = s.strip_prefix("corrupted:") {
            let (d, a) = rest.split_once(',').unwrap_or((rest, "0"));
            let drop_k = d.trim().parse().map_err(|_| bad())?;
            let add_k = a.trim().parse().map_err(|_| bad())?;
            return Ok(PredictorKind::CorruptedOracle { drop_k, add_k });
        }
        Err(bad())
    }

    pub fn build(&self) -> Box<dyn BasisPredictor> {
        match self {
            PredictorKind::Oracle => Box::new(Oracle),
            PredictorKind::CorruptedOracle { drop_k, add_k } => Box::new(CorruptedOracle {
                drop_k: *drop_k,
                add_k: *add_k,
            }),
            PredictorKind::Heuristic => Box::new(Heuristic),
            PredictorKind::External { command } => Box::new(External {
                command: command.clone(),
            }),
        }
    }

    pub fn needs_truth(&self) -> bool {
        matches!(self, PredictorKind::Oracle | PredictorKind::CorruptedOracle { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictorConfig {
    pub kind: PredictorKind,
    pub seed: u64,
}

/// Returns the ground-truth basis.
#[derive(Clone, Copy, Debug, Default)]
pub struct Oracle;

impl BasisPredictor for Oracle {
    fn predict(&self, input: &PredictInput<'_>, _rng: &mut ChaCha8Rng) -> Result<Basis> {
        input.truth.cloned().ok_or(Error::MissingGroundTruth)
    }
}

/// Ground truth with `drop_k` elements removed and `add_k` pool points added.
#[derive(Clone, Copy, Debug)]
pub struct CorruptedOracle {
    pub drop_k: usize,
    pub add_k: usize,
}

impl BasisPredictor for CorruptedOracle {
    fn predict(&self, input: &PredictInput<'_>, rng: &mut ChaCha8Rng) -> Result<Basis> {
        let truth = input.truth.ok_or(Error::MissingGroundTruth)?;
        let m = truth.len();
        let dropped: BTreeSet<usize> = index::sample(rng, m, self.drop_k.min(m)).into_iter().collect();
        let mut out: Vec<Monomial> = truth
            .iter()
            .enumerate()
            .filter(|(i, _)| !dropped.contains(i))
            .map(|(_, u)| u.clone())
            .collect();
        let fresh: Vec<&Monomial> = input.pool.iter().filter(|u| !truth.contains(u)).collect();
        for i in index::sample(rng, fresh.len(), self.add_k.min(fresh.len())) {
            out.push(fresh[i].clone());
        }
        Basis::new(out)
    }
}

/// The forced vertex set when it already covers the support, otherwise every
/// square root of an even support monomial (a superset of the forced set).
#[derive(Clone, Copy, Debug, Default)]
pub struct Heuristic;

impl BasisPredictor for Heuristic {
    fn predict(&self, input: &PredictInput<'_>, _rng: &mut ChaCha8Rng) -> Result<Basis> {
        let p = input.polynomial;
        let poly = LatticePolytope::from_polynomial(p, HullStrategy::Auto)?;
        let forced = Basis::new(forced_monomials(p, &poly).forced.into_iter().collect())?;
        if !forced.is_empty() && covers(&forced, p)? {
            return Ok(forced);
        }
        Basis::from_iter_dedup(
            p.terms()
                .filter_map(|(m, _)| m.sqrt())
                .filter(|r| input.pool.contains(r)),
        )
    }
}

/// Runs `sh -c command`, writing one token line and reading one basis line.
#[derive(Clone, Debug)]
pub struct External {
    pub command: String,
}

impl BasisPredictor for External {
    fn predict(&self, input: &PredictInput<'_>, _rng: &mut ChaCha8Rng) -> Result<Basis> {
        let fail = |msg: String| Error::Predictor(format!("{}: {msg}", self.command));
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| fail(e.to_string()))?;
        let line = format!("{}\n", tokenize(input.polynomial)?);
        if let Some(mut stdin) = child.stdin.take() {
            // A predictor may exit without reading; its status decides.
            let _ = stdin.write_all(line.as_bytes());
        }
        let out = child.wait_with_output().map_err(|e| fail(e.to_string()))?;
        if !out.status.success() {
            return Err(fail(format!("exited with {}", out.status)));
        }
        let text = String::from_utf8_lossy(&out.stdout);
        let first = text.lines().next().unwrap_or("").trim();
        let basis = detokenize_basis(first).map_err(|e| fail(e.to_string()))?;
        if basis.n_vars().is_some_and(|n| n != input.polynomial.n_vars()) {
            return Err(fail("basis has the wrong number of variables".into()));
        }
        Ok(basis)
    }
}

/// Generator for permutation `index` of a scoring run.
pub fn permutation_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Predictions on `L` randomly relabeled copies of the input, mapped back to
/// the original variables.
pub fn permuted_predictions(
    input: &PredictInput<'_>,
    predictor: &dyn BasisPredictor,
    l: usize,
    seed: u64,
) -> Result<Vec<Basis>> {
    let n = input.polynomial.n_vars();
    let pool = Basis::new(input.pool.iter().cloned().collect())?;
    (0..l as u64)
        .map(|i| {
            let mut rng = permutation_rng(seed, i);
            let perm = Permutation::random(n, &mut rng);
            let p = input.polynomial.permute_variables(&perm)?;
            let truth = input.truth.map(|t| t.permute_variables(&perm)).transpose()?;
            let pool = pool.permute_variables(&perm)?.to_set();
            let permuted = PredictInput {
                polynomial: &p,
                truth: truth.as_ref(),
                pool: &pool,
            };
            predictor
                .predict(&permuted, &mut rng)?
                .permute_variables(&perm.inverse())
        })
        .collect()
}

/// Membership frequency of `u` across `l` permuted predictions.
pub fn score(
    u: &Monomial,
    input: &PredictInput<'_>,
    predictor: &dyn BasisPredictor,
    l: usize,
    seed: u64,
) -> Result<f64> {
    if l == 0 {
        return Err(Error::InvalidInput("at least one permutation is required".into()));
    }
    let preds = permuted_predictions(input, predictor, l, seed)?;
    Ok(preds.iter().filter(|b| b.contains(u)).count() as f64 / l as f64)
}

/// Scores in `[0, 1]` for every pool monomial.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable(pub BTreeMap<Monomial, f64>);

impl ScoreTable {
    pub fn get(&self, u: &Monomial) -> f64 {
        self.0.get(u).copied().unwrap_or(0.0)
    }
}

pub fn score_table(
    input: &PredictInput<'_>,
    predictor: &dyn BasisPredictor,
    l: usize,
    seed: u64,
) -> Result<ScoreTable> {
    if l == 0 {
        return Err(Error::InvalidInput("at least one permutation is required".into()));
    }
    let preds = permuted_predictions(input, predictor, l, seed)?;
    let mut counts: BTreeMap<Monomial, usize> = input.pool.iter().map(|u| (u.clone(), 0)).collect();
    for b in &preds {
        for u in b {
            if let Some(c) = counts.get_mut(u) {
                *c += 1;
            }
        }
    }
    Ok(ScoreTable(
        counts.into_iter().map(|(u, c)| (u, c as f64 / l as f64)).collect(),
    ))
}

/// `pool \ b_cov` by descending score, ties in ascending graded-lex order.
pub fn rank_candidates(b_cov: &Basis, pool: &BTreeSet<Monomial>, scores: &ScoreTable) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = pool.iter().filter(|u| !b_cov.contains(u)).cloned().collect();
    // `pool` iterates in ascending order and the sort is stable.
    out.sort_by(|a, b| scores.get(b).total_cmp(&scores.get(a)));
    out
}
