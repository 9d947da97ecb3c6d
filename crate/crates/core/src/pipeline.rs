//! Certification loop: predicted basis, coverage repair, scored expansion.
//!
//! `certify` solves at most one SDP per entry of a geometric size schedule.
//! The sizes index prefixes of a single ordering (repaired basis first, then
//! pool candidates by descending score), so the last entry is always the full
//! half-polytope pool and a NotSOS answer is as strong as the classical one.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::newton::half_polytope_points;
use crate::polycore::{covers, uncovered, Basis, Monomial, Polynomial};
use crate::predictor::{
    permutation_rng, rank_candidates, score_table, BasisPredictor, Heuristic, PredictInput,
    DEFAULT_PERMUTATIONS,
};
use crate::sdp::{assemble, solve_feasibility, SdpConfig, SdpStatus};

pub const DEFAULT_RHO: f64 = 1.5;
pub const DEFAULT_OMEGA: f64 = 3.0;
/// Stream of the initial prediction; scoring uses streams `0..L`.
const PREDICT_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepairMode {
    /// Quotient candidates plus square roots, restricted to the pool when possible.
    #[default]
    Extended,
    /// Quotient candidates only.
    PaperRaw,
}

impl RepairMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "extended" => Ok(RepairMode::Extended),
            "paper-raw" => Ok(RepairMode::PaperRaw),
            other => Err(Error::InvalidInput(format!("unknown repair mode '{other}'"))),
        }
    }
}

/// Monomial whose addition to `basis` covers the most missing monomials.
pub fn find_candidate(
    missing: &BTreeSet<Monomial>,
    basis: &Basis,
    pool: &BTreeSet<Monomial>,
    mode: RepairMode,
) -> Option<Monomial> {
    let mut counts: BTreeMap<Monomial, usize> = BTreeMap::new();
    for m in missing {
        for b in basis {
            if let Some(d) = m.checked_div(b) {
                *counts.entry(d).or_default() += 1;
            }
        }
        if mode == RepairMode::Extended {
            if let Some(r) = m.sqrt() {
                *counts.entry(r).or_default() += 1;
            }
        }
    }
    // Re-adding a basis element leaves B·B unchanged.
    counts.retain(|d, _| !basis.contains(d));
    if mode == RepairMode::Extended && counts.keys().any(|d| pool.contains(d)) {
        counts.retain(|d, _| pool.contains(d));
    }
    let best = counts.values().copied().max()?;
    counts.into_iter().find(|&(_, c)| c == best).map(|(d, _)| d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Repair {
    pub basis: Basis,
    pub additions: usize,
    pub covered: bool,
}

/// Greedily grows `b0` until it covers the support of `p`.
pub fn coverage_repair(
    b0: &Basis,
    p: &Polynomial,
    pool: &BTreeSet<Monomial>,
    max_iter: usize,
    mode: RepairMode,
) -> Result<Repair> {
    let mut basis = b0.clone();
    let mut additions = 0;
    for _ in 0..max_iter {
        let missing: BTreeSet<Monomial> = uncovered(&basis, p)?.into_iter().collect();
        if missing.is_empty() {
            break;
        }
        let pick = find_candidate(&missing, &basis, pool, mode).or_else(|| fallback_candidate(&missing, &basis, pool));
        match pick {
            Some(u) => {
                basis.push(u)?;
                additions += 1;
            }
            None => break,
        }
    }
    let covered = covers(&basis, p)?;
    Ok(Repair {
        basis,
        additions,
        covered,
    })
}

/// Smallest pool monomial whose addition covers at least one missing monomial.
fn fallback_candidate(missing: &BTreeSet<Monomial>, basis: &Basis, pool: &BTreeSet<Monomial>) -> Option<Monomial> {
    pool.iter()
        .filter(|u| !basis.contains(u))
        .find(|u| {
            missing
                .iter()
                .any(|m| m.checked_div(u).is_some_and(|q| q == **u || basis.contains(&q)))
        })
        .cloned()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub sizes: Vec<usize>,
    pub rho: f64,
}

/// `m1, ⌈ρ m1⌉, ⌈ρ² m1⌉, …` capped at `pool_size`.
pub fn geometric_schedule(m1: usize, pool_size: usize, rho: f64) -> Result<Schedule> {
    if rho.is_nan() || rho <= 1.0 || rho.is_infinite() {
        return Err(Error::InvalidRho(rho));
    }
    if m1 == 0 || m1 > pool_size {
        return Err(Error::InvalidInput(format!(
            "schedule start {m1} outside 1..={pool_size}"
        )));
    }
    let mut sizes = vec![m1];
    let mut m = m1;
    while m < pool_size {
        m = ((rho * m as f64).ceil() as usize).max(m + 1).min(pool_size);
        sizes.push(m);
    }
    Ok(Schedule { sizes, rho })
}

/// Solve-count bound `1 + ⌈log_ρ(pool / m1)⌉ + 1` for a run starting at `m1`.
pub fn solve_bound(m1: usize, pool_size: usize, rho: f64) -> usize {
    let ratio = pool_size as f64 / m1.max(1) as f64;
    let steps = if ratio <= 1.0 {
        0
    } else {
        (ratio.ln() / rho.ln() - 1e-9).ceil().max(0.0) as usize
    };
    2 + steps
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub rho: f64,
    /// Number of permutations used for scoring.
    pub score_l: usize,
    pub seed: u64,
    pub repair: RepairMode,
    /// Repair iterations; `None` allows `|pool| + |S(p)|`.
    pub repair_max_iter: Option<usize>,
    pub sdp: SdpConfig,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            rho: DEFAULT_RHO,
            score_l: DEFAULT_PERMUTATIONS,
            seed: 0,
            repair: RepairMode::Extended,
            repair_max_iter: None,
            sdp: SdpConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertifyStatus {
    #[serde(rename = "SOS")]
    Sos,
    #[serde(rename = "NotSOS")]
    NotSos,
    Inconclusive,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub newton: f64,
    pub predict: f64,
    pub repair: f64,
    pub score: f64,
    pub sdp_total: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CertifyStats {
    pub sdp_solves: usize,
    /// Basis sizes actually solved, in order.
    pub basis_sizes_tried: Vec<usize>,
    /// Size of the first feasible basis.
    pub coverage_rank_estimate: Option<usize>,
    pub pool_size: usize,
    pub initial_size: usize,
    pub repaired_size: usize,
    pub repair_additions: usize,
    pub schedule: Vec<usize>,
    /// Schedule prefixes skipped because they miss part of the support.
    pub uncovered_prefixes: usize,
    pub inconclusive_solves: usize,
    /// The predictor failed and the heuristic stood in.
    pub predictor_fallback: bool,
    /// Milliseconds per phase.
    pub timings_ms: Timings,
}

#[derive(Clone, Debug)]
pub struct CertifyOutcome {
    pub status: CertifyStatus,
    /// Basis of the deciding solve: the certificate's basis, or the pool.
    pub basis: Basis,
    pub certificate: Option<DMatrix<f64>>,
    pub stats: CertifyStats,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn predict_or_fallback(
    predictor: &dyn BasisPredictor,
    input: &PredictInput<'_>,
    seed: u64,
    fell_back: &mut bool,
) -> Result<Basis> {
    match predictor.predict(input, &mut permutation_rng(seed, PREDICT_STREAM)) {
        Err(Error::Predictor(_)) => {
            *fell_back = true;
            Heuristic.predict(input, &mut permutation_rng(seed, PREDICT_STREAM))
        }
        other => other,
    }
}

/// Decides whether `p` is SOS, trying small predicted bases first.
pub fn certify(
    p: &Polynomial,
    truth: Option<&Basis>,
    predictor: &dyn BasisPredictor,
    cfg: &CertifyConfig,
) -> Result<CertifyOutcome> {
    if p.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    if cfg.rho.is_nan() || cfg.rho <= 1.0 {
        return Err(Error::InvalidRho(cfg.rho));
    }
    let mut stats = CertifyStats::default();

    let t = Instant::now();
    let pool = half_polytope_points(p)?;
    let pool_basis = Basis::new(pool.iter().cloned().collect())?;
    stats.timings_ms.newton = ms(t);
    stats.pool_size = pool.len();
    if pool.is_empty() || !covers(&pool_basis, p)? {
        // No Gram matrix over the pool exists, so none exists at all.
        stats.schedule = vec![pool.len()];
        return Ok(CertifyOutcome {
            status: CertifyStatus::NotSos,
            basis: pool_basis,
            certificate: None,
            stats,
        });
    }

    let t = Instant::now();
    let input = PredictInput {
        polynomial: p,
        truth,
        pool: &pool,
    };
    let mut b0 = predict_or_fallback(predictor, &input, cfg.seed, &mut stats.predictor_fallback)?;
    b0.retain(|u| pool.contains(u));
    stats.initial_size = b0.len();
    stats.timings_ms.predict = ms(t);

    let t = Instant::now();
    let max_iter = cfg.repair_max_iter.unwrap_or(pool.len() + p.len());
    let repair = coverage_repair(&b0, p, &pool, max_iter.max(1), cfg.repair)?;
    let mut b_cov = repair.basis;
    b_cov.retain(|u| pool.contains(u));
    stats.repair_additions = repair.additions;
    stats.repaired_size = b_cov.len();
    stats.timings_ms.repair = ms(t);

    let schedule = geometric_schedule(b_cov.len().max(1), pool.len(), cfg.rho)?;
    stats.schedule = schedule.sizes.clone();

    let solve = |basis: &Basis, stats: &mut CertifyStats| -> Result<Option<(SdpStatus, Option<DMatrix<f64>>)>> {
        if !covers(basis, p)? {
            stats.uncovered_prefixes += 1;
            return Ok(None);
        }
        let t = Instant::now();
        let res = solve_feasibility(&assemble(basis, p)?, &cfg.sdp)?;
        stats.timings_ms.sdp_total += ms(t);
        stats.sdp_solves += 1;
        stats.basis_sizes_tried.push(basis.len());
        if res.status == SdpStatus::Inconclusive {
            stats.inconclusive_solves += 1;
        }
        Ok(Some((res.status, res.certificate)))
    };

    let last_step = schedule.sizes.len() == 1;
    if !b_cov.is_empty() {
        if let Some((status, cert)) = solve(&b_cov, &mut stats)? {
            match status {
                SdpStatus::Feasible => {
                    stats.coverage_rank_estimate = Some(b_cov.len());
                    return Ok(CertifyOutcome {
                        status: CertifyStatus::Sos,
                        basis: b_cov,
                        certificate: cert,
                        stats,
                    });
                }
                SdpStatus::Infeasible if last_step => {
                    return Ok(not_sos(pool_basis, stats));
                }
                SdpStatus::Inconclusive if last_step => {
                    return Ok(inconclusive(pool_basis, stats));
                }
                _ => {}
            }
        }
    }

    let t = Instant::now();
    let scores = match score_table(&input, predictor, cfg.score_l, cfg.seed) {
        Err(Error::Predictor(_)) => {
            stats.predictor_fallback = true;
            score_table(&input, &Heuristic, cfg.score_l, cfg.seed)?
        }
        other => other?,
    };
    let mut ordering: Vec<Monomial> = b_cov.monomials().to_vec();
    ordering.extend(rank_candidates(&b_cov, &pool, &scores));
    stats.timings_ms.score = ms(t);

    let k = schedule.sizes.len();
    for (step, &m) in schedule.sizes.iter().enumerate().skip(1) {
        let basis = Basis::new(ordering[..m].to_vec())?;
        let final_step = step + 1 == k;
        match solve(&basis, &mut stats)? {
            Some((SdpStatus::Feasible, cert)) => {
                stats.coverage_rank_estimate = Some(m);
                return Ok(CertifyOutcome {
                    status: CertifyStatus::Sos,
                    basis,
                    certificate: cert,
                    stats,
                });
            }
            Some((SdpStatus::Inconclusive, _)) if final_step => return Ok(inconclusive(pool_basis, stats)),
            _ if final_step => return Ok(not_sos(pool_basis, stats)),
            _ => {}
        }
    }
    unreachable!("schedule ends at the pool size")
}

fn not_sos(pool: Basis, stats: CertifyStats) -> CertifyOutcome {
    CertifyOutcome {
        status: CertifyStatus::NotSos,
        basis: pool,
        certificate: None,
        stats,
    }
}

fn inconclusive(pool: Basis, stats: CertifyStats) -> CertifyOutcome {
    CertifyOutcome {
        status: CertifyStatus::Inconclusive,
        basis: pool,
        certificate: None,
        stats,
    }
}

/// Shortest feasible prefix of `ordering`, by bisection (assumes feasibility
/// is monotone in the prefix length). `None` when the full ordering fails.
pub fn exact_coverage_rank(p: &Polynomial, ordering: &[Monomial], sdp: &SdpConfig) -> Result<Option<usize>> {
    let feasible = |len: usize| -> Result<bool> {
        let b = Basis::new(ordering[..len].to_vec())?;
        if !covers(&b, p)? {
            return Ok(false);
        }
        Ok(solve_feasibility(&assemble(&b, p)?, sdp)?.status == SdpStatus::Feasible)
    };
    if ordering.is_empty() || !feasible(ordering.len())? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0, ordering.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Expansion steps needed to reach `eta` from `m1`; at least one.
fn expansion_steps(m1: usize, eta: usize, rho: f64) -> usize {
    let ratio = eta as f64 / m1 as f64;
    if ratio <= 1.0 {
        return 1;
    }
    ((ratio.ln() / rho.ln() - 1e-9).ceil() as usize).max(1)
}

/// `J(ρ) = Σ_i Σ_{s=1..k_i} (ρ^s m1_i)^ω`.
pub fn erm_objective(samples: &[(usize, usize)], rho: f64, omega: f64) -> f64 {
    samples
        .iter()
        .map(|&(m1, eta)| {
            (1..=expansion_steps(m1, eta, rho))
                .map(|s| (rho.powi(s as i32) * m1 as f64).powf(omega))
                .sum::<f64>()
        })
        .sum()
}

fn validate_samples(samples: &[(usize, usize)]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (index, &(m1, eta)) in samples.iter().enumerate() {
        if m1 == 0 || m1 > eta {
            return Err(Error::InvalidSample { index, m1, eta });
        }
    }
    Ok(())
}

/// Breakpoints `(η/m1)^{1/t}` inside `bounds`, plus the lower bound.
pub fn rho_grid(samples: &[(usize, usize)], bounds: (f64, f64)) -> Result<Vec<f64>> {
    validate_samples(samples)?;
    let (lo, hi) = bounds;
    if lo.is_nan() || hi.is_nan() || lo <= 1.0 || hi < lo || hi.is_infinite() {
        return Err(Error::InvalidRho(if lo > 1.0 { hi } else { lo }));
    }
    let mut grid = vec![lo];
    for &(m1, eta) in samples {
        let ratio = eta as f64 / m1 as f64;
        if ratio <= 1.0 {
            continue;
        }
        for t in 1.. {
            let r = ratio.powf(1.0 / t as f64);
            if r < lo {
                break;
            }
            if r <= hi {
                grid.push(r);
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

/// Expansion factor minimizing the empirical solve cost over the breakpoint grid.
pub fn tune_rho(samples: &[(usize, usize)], omega: f64, bounds: (f64, f64)) -> Result<(f64, f64)> {
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
    }
    let grid = rho_grid(samples, bounds)?;
    let mut best = (grid[0], erm_objective(samples, grid[0], omega));
    for &rho in &grid[1..] {
        let j = erm_objective(samples, rho, omega);
        if j < best.1 {
            best = (rho, j);
        }
    }
    Ok(best)
}

/// One line of the results file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub id: u64,
    pub n: usize,
    pub d: u32,
    pub status: CertifyStatus,
    pub basis_size_final: usize,
    pub solves: usize,
    pub sizes_tried: Vec<usize>,
    pub repair_additions: usize,
    #[serde(rename = "score_L")]
    pub score_l: usize,
    pub rho: f64,
    pub pool_size: usize,
    /// First schedule size, for rho tuning.
    pub m1: usize,
    pub coverage_rank_estimate: Option<usize>,
    pub timings_ms: Timings,
}

impl ResultRecord {
    pub fn new(id: u64, p: &Polynomial, outcome: &CertifyOutcome, cfg: &CertifyConfig) -> Self {
        ResultRecord {
            id,
            n: p.n_vars(),
            d: p.degree(),
            status: outcome.status,
            basis_size_final: outcome.basis.len(),
            solves: outcome.stats.sdp_solves,
            sizes_tried: outcome.stats.basis_sizes_tried.clone(),
            repair_additions: outcome.stats.repair_additions,
            score_l: cfg.score_l,
            rho: cfg.rho,
            pool_size: outcome.stats.pool_size,
            m1: outcome.stats.schedule.first().copied().unwrap_or(0),
            coverage_rank_estimate: outcome.stats.coverage_rank_estimate,
            timings_ms: outcome.stats.timings_ms.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::tests::{mono, running_example};
    use crate::sdp::verify_certificate;

    fn basis(es: &[&[u32]]) -> Basis {
        Basis::new(es.iter().map(|e| mono(e)).collect()).unwrap()
    }

    fn set(es: &[&[u32]]) -> BTreeSet<Monomial> {
        es.iter().map(|e| mono(e)).collect()
    }

    #[test]
    fn candidate_from_square_root() {
        let pool = half_polytope_points(&running_example()).unwrap();
        let b = basis(&[&[0, 0], &[2, 0], &[1, 1]]);
        let got = find_candidate(&set(&[&[0, 4]]), &b, &pool, RepairMode::Extended);
        assert_eq!(got, Some(mono(&[0, 2])));
        // Raw mode only knows the quotient x2^4 / 1.
        let raw = find_candidate(&set(&[&[0, 4]]), &b, &pool, RepairMode::PaperRaw);
        assert_eq!(raw, Some(mono(&[0, 4])));
    }

    #[test]
    fn candidate_excludes_basis_members() {
        let pool = set(&[&[0], &[1], &[2]]);
        let b = basis(&[&[0], &[1]]);
        assert_eq!(find_candidate(&set(&[&[2]]), &b, &pool, RepairMode::Extended), Some(mono(&[2])));
        let tiny_pool = set(&[&[0], &[1]]);
        // Nothing left inside the pool: fall back to the unfiltered counter.
        assert_eq!(find_candidate(&set(&[&[2]]), &b, &tiny_pool, RepairMode::Extended), Some(mono(&[2])));
    }

    #[test]
    fn shared_quotient_wins() {
        let b = basis(&[&[1, 0], &[0, 1]]);
        let missing = set(&[&[3, 0], &[2, 1]]);
        let got = find_candidate(&missing, &b, &BTreeSet::new(), RepairMode::Extended);
        assert_eq!(got, Some(mono(&[2, 0])));
    }

    #[test]
    fn repair_running_example() {
        let p = running_example();
        let pool = half_polytope_points(&p).unwrap();
        let r = coverage_repair(&basis(&[&[0, 0], &[2, 0], &[1, 1]]), &p, &pool, 10, RepairMode::Extended).unwrap();
        assert!(r.covered);
        assert_eq!(r.additions, 1);
        assert_eq!(r.basis.to_set(), set(&[&[0, 0], &[2, 0], &[1, 1], &[0, 2]]));
        let again = coverage_repair(&r.basis, &p, &pool, 10, RepairMode::Extended).unwrap();
        assert_eq!(again.basis, r.basis);
        assert_eq!(again.additions, 0);
    }

    #[test]
    fn repair_from_empty_uses_fallback() {
        let p = running_example();
        let pool = half_polytope_points(&p).unwrap();
        let r = coverage_repair(&Basis::empty(), &p, &pool, 20, RepairMode::Extended).unwrap();
        assert!(r.covered);
        assert!(r.basis.to_set().is_subset(&pool));
    }

    #[test]
    fn schedules() {
        assert_eq!(geometric_schedule(3, 10, 1.5).unwrap().sizes, vec![3, 5, 8, 10]);
        assert_eq!(geometric_schedule(7, 7, 1.5).unwrap().sizes, vec![7]);
        assert_eq!(geometric_schedule(1, 8, 2.0).unwrap().sizes, vec![1, 2, 4, 8]);
        assert!(matches!(geometric_schedule(1, 8, 1.0), Err(Error::InvalidRho(_))));
        assert!(matches!(geometric_schedule(1, 8, f64::NAN), Err(Error::InvalidRho(_))));
        assert!(geometric_schedule(9, 8, 2.0).is_err());
    }

    #[test]
    fn certify_running_example() {
        let p = running_example();
        let out = certify(&p, None, &Heuristic, &CertifyConfig::default()).unwrap();
        assert_eq!(out.status, CertifyStatus::Sos);
        assert_eq!(out.basis.to_set(), set(&[&[0, 0], &[2, 0], &[0, 2]]));
        assert_eq!(out.stats.sdp_solves, 1);
        let q = out.certificate.unwrap();
        assert!(verify_certificate(&q, &out.basis, &p, 1e-7).unwrap());
    }

    #[test]
    fn certify_negative_square() {
        let p = Polynomial::new(1, [(mono(&[2]), -1.0)]).unwrap();
        let out = certify(&p, None, &Heuristic, &CertifyConfig::default()).unwrap();
        assert_eq!(out.status, CertifyStatus::NotSos);
        assert_eq!(out.basis.to_set(), set(&[&[1]]));
    }

    #[test]
    fn certify_odd_support_is_not_sos() {
        let p = Polynomial::new(1, [(mono(&[3]), 1.0), (mono(&[0]), 1.0)]).unwrap();
        let out = certify(&p, None, &Heuristic, &CertifyConfig::default()).unwrap();
        assert_eq!(out.status, CertifyStatus::NotSos);
        assert_eq!(out.stats.sdp_solves, 0);
    }

    #[test]
    fn tune_rho_worked_case() {
        let s = [(10, 40)];
        let j = |r: f64| erm_objective(&s, r, 3.0);
        assert!((j(4.0) - 64000.0).abs() < 1e-9);
        assert!((j(2.0) - 72000.0).abs() < 1e-9);
        assert!((j(4f64.powf(1.0 / 3.0)) - 84000.0).abs() < 1e-6);
        let (rho, best) = tune_rho(&s, 3.0, (1.01, 8.0)).unwrap();
        assert!((rho - 4.0).abs() < 1e-12);
        assert!((best - 64000.0).abs() < 1e-9);
        let (rho2, best2) = tune_rho(&[(10, 40), (10, 40)], 3.0, (1.01, 8.0)).unwrap();
        assert_eq!(rho2, rho);
        assert!((best2 - 2.0 * best).abs() < 1e-9);
    }

    #[test]
    fn tune_rho_degenerate_and_errors() {
        let (rho, j) = tune_rho(&[(5, 5)], 3.0, (1.1, 4.0)).unwrap();
        assert_eq!(rho, 1.1);
        assert!((j - (1.1f64 * 5.0).powi(3)).abs() < 1e-9);
        assert!(matches!(tune_rho(&[], 3.0, (1.1, 4.0)), Err(Error::EmptyInput)));
        assert!(matches!(
            tune_rho(&[(1, 2), (6, 5)], 3.0, (1.1, 4.0)),
            Err(Error::InvalidSample { index: 1, m1: 6, eta: 5 })
        ));
    }

    #[test]
    fn solve_bound_values() {
        assert_eq!(solve_bound(3, 10, 1.5), 2 + 3);
        assert_eq!(solve_bound(10, 10, 1.5), 2);
    }
}
