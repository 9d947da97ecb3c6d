//! Gram-matrix feasibility: assembly, a projection solver and certificate checks.
//!
//! The solver runs Douglas-Rachford splitting (ADMM) over the Frobenius
//! projections onto the affine set of coefficient-matching constraints and
//! onto the PSD cone. Constraint groups partition the upper triangle, so the
//! affine projection is a closed-form per-group shift. Feasibility exits: a
//! cone iterate meeting the constraints, an affine iterate that is already
//! PSD, and a polish step that re-solves the constraints restricted
//! to the dominant eigenspace (needed when every Gram matrix is singular).
//! Infeasibility requires the per-step displacement to stall away from zero
//! and to yield a Farkas certificate `Σ y_u A_u ⪰ 0` with `bᵀy < 0`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::{uncovered, Basis, Monomial, Polynomial};

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub monomial: Monomial,
    /// Upper-triangle index pairs `(i, j)`, `i <= j`, with `b_i · b_j = monomial`.
    pub pairs: Vec<(usize, usize)>,
    pub target: f64,
}

impl Constraint {
    /// `⟨A_u, Q⟩`: diagonal entries once, off-diagonal entries twice.
    pub fn evaluate(&self, q: &DMatrix<f64>) -> f64 {
        self.pairs
            .iter()
            .map(|&(i, j)| if i == j { q[(i, i)] } else { 2.0 * q[(i, j)] })
            .sum()
    }

    fn norm_sq(&self) -> f64 {
        self.pairs.iter().map(|&(i, j)| if i == j { 1.0 } else { 2.0 }).sum()
    }
}

#[derive(Clone, Debug)]
pub struct GramProblem {
    basis: Basis,
    constraints: Vec<Constraint>,
}

impl GramProblem {
    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// Largest constraint residual of `q`, in the problem's own units.
    pub fn residual(&self, q: &DMatrix<f64>) -> f64 {
        self.constraints
            .iter()
            .map(|c| (c.evaluate(q) - c.target).abs())
            .fold(0.0, f64::max)
    }
}

/// One constraint per product monomial in `basis · basis`.
pub fn assemble(basis: &Basis, p: &Polynomial) -> Result<GramProblem> {
    let n = basis.n_vars().ok_or(Error::EmptyBasis)?;
    if n != p.n_vars() {
        return Err(Error::DimensionMismatch {
            expected: p.n_vars(),
            found: n,
        });
    }
    let missing = uncovered(basis, p)?;
    if !missing.is_empty() {
        return Err(Error::MissingCoverage(missing));
    }
    let ms = basis.monomials();
    let mut groups: BTreeMap<Monomial, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..ms.len() {
        for j in i..ms.len() {
            groups.entry(ms[i].mul(&ms[j])).or_default().push((i, j));
        }
    }
    let constraints = groups
        .into_iter()
        .map(|(monomial, pairs)| {
            let target = p.coefficient(&monomial);
            Constraint {
                monomial,
                pairs,
                target,
            }
        })
        .collect();
    Ok(GramProblem {
        basis: basis.clone(),
        constraints,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpConfig {
    pub tol_primal: f64,
    pub tol_eig: f64,
    pub max_iter: usize,
    /// Iterations between stall checks of the displacement norm.
    pub infeas_patience: usize,
    /// Relative change of the displacement norm counted as a stall.
    pub stall_tol: f64,
    /// Smallest normalized displacement norm treated as a separation.
    pub min_separation: f64,
    /// Attempt eigenspace-restricted polishing.
    pub polish: bool,
}

impl Default for SdpConfig {
    fn default() -> Self {
        SdpConfig {
            tol_primal: 1e-7,
            tol_eig: 1e-8,
            max_iter: 20_000,
            infeas_patience: 50,
            stall_tol: 1e-6,
            min_separation: 1e-7,
            polish: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdpStatus {
    Feasible,
    Infeasible,
    Inconclusive,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SdpStats {
    pub iterations: usize,
    pub primal_residual: f64,
    pub min_eig: f64,
    /// Normalized separation norm when infeasibility was declared.
    pub separation: f64,
}

#[derive(Clone, Debug)]
pub struct SdpResult {
    pub status: SdpStatus,
    pub certificate: Option<DMatrix<f64>>,
    pub stats: SdpStats,
}

/// Farkas acceptance: `λ_min(g) >= −FARKAS_EIG_REL · ‖g‖_F`.
const FARKAS_EIG_REL: f64 = 1e-6;
const POLISH_FIRST: usize = 10;
const POLISH_EVERY: usize = 200;
const POLISH_MAX_UNKNOWNS: usize = 2_000;
const POLISH_THRESHOLDS: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];

struct Scaled<'a> {
    cons: &'a [Constraint],
    b: Vec<f64>,
    norm_sq: Vec<f64>,
}

impl Scaled<'_> {
    /// Projects onto the affine set in place, recording the per-group shifts.
    fn project_affine(&self, x: &mut DMatrix<f64>, shifts: &mut [f64]) {
        for (k, c) in self.cons.iter().enumerate() {
            let t = (self.b[k] - c.evaluate(x)) / self.norm_sq[k];
            shifts[k] = t;
            for &(i, j) in &c.pairs {
                if i == j {
                    x[(i, i)] += t;
                } else {
                    x[(i, j)] += t;
                    x[(j, i)] += t;
                }
            }
        }
    }

    fn residual(&self, x: &DMatrix<f64>) -> f64 {
        self.cons
            .iter()
            .zip(&self.b)
            .map(|(c, b)| (c.evaluate(x) - b).abs())
            .fold(0.0, f64::max)
    }
}

fn min_eigenvalue(q: &DMatrix<f64>) -> f64 {
    if q.nrows() == 0 {
        return 0.0;
    }
    let sym = (q + q.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.min()
}

fn psd_part(eig: &SymmetricEigen<f64, nalgebra::Dyn>) -> DMatrix<f64> {
    let m = eig.eigenvalues.len();
    let keep: Vec<usize> = (0..m).filter(|&i| eig.eigenvalues[i] > 0.0).collect();
    let mut vs = DMatrix::zeros(m, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        let s = eig.eigenvalues[i].sqrt();
        vs.set_column(c, &(eig.eigenvectors.column(i) * s));
    }
    let z = &vs * vs.transpose();
    (&z + z.transpose()) * 0.5
}

/// Decides whether a PSD matrix satisfies the problem's constraints.
pub fn solve_feasibility(prob: &GramProblem, cfg: &SdpConfig) -> Result<SdpResult> {
    let m = prob.size();
    let scale = prob
        .constraints
        .iter()
        .map(|c| c.target.abs())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(SdpResult {
            status: SdpStatus::Feasible,
            certificate: Some(DMatrix::zeros(m, m)),
            stats: SdpStats::default(),
        });
    }
    let sc = Scaled {
        cons: &prob.constraints,
        b: prob.constraints.iter().map(|c| c.target / scale).collect(),
        norm_sq: prob.constraints.iter().map(Constraint::norm_sq).collect(),
    };
    let mut shifts = vec![0.0; sc.cons.len()];
    let mut z = DMatrix::<f64>::zeros(m, m);
    let mut u = DMatrix::<f64>::zeros(m, m);
    let mut last_sep: Option<f64> = None;
    let mut next_polish = POLISH_FIRST;

    for it in 1..=cfg.max_iter {
        let mut x = &z - &u;
        sc.project_affine(&mut x, &mut shifts);
        let w = &x + &u;
        let eig = SymmetricEigen::new(w);
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure(format!(
                "non-finite eigenvalue at iteration {it}"
            )));
        }
        z = psd_part(&eig);
        if sc.residual(&z) * scale <= cfg.tol_primal {
            if let Some(r) = accept(prob, &z, scale, cfg, it) {
                return Ok(r);
            }
        }
        if cfg.polish && it >= next_polish {
            next_polish = if next_polish < POLISH_EVERY {
                next_polish * 2
            } else {
                next_polish + POLISH_EVERY
            };
            if min_eigenvalue(&x) * scale >= -cfg.tol_eig {
                if let Some(r) = accept(prob, &x, scale, cfg, it) {
                    return Ok(r);
                }
            }
            if let Some(q) = polish(&sc, &eig) {
                if let Some(r) = accept(prob, &q, scale, cfg, it) {
                    return Ok(r);
                }
            }
        }
        // The step `x − z` converges to the minimal displacement between the
        // two sets: zero when they meet, a separating direction otherwise.
        let step = &x - &z;
        if it % cfg.infeas_patience == 0 {
            let sep = step.norm();
            if sep > cfg.min_separation {
                if let Some(prev) = last_sep {
                    if (sep - prev).abs() <= cfg.stall_tol * sep && farkas_certificate(&sc, &step) {
                        return Ok(SdpResult {
                            status: SdpStatus::Infeasible,
                            certificate: None,
                            stats: SdpStats {
                                iterations: it,
                                primal_residual: sc.residual(&z) * scale,
                                min_eig: f64::NAN,
                                separation: sep,
                            },
                        });
                    }
                }
            }
            last_sep = Some(sep);
        }
        u += step;
    }
    let q = z * scale;
    Ok(SdpResult {
        status: SdpStatus::Inconclusive,
        certificate: None,
        stats: SdpStats {
            iterations: cfg.max_iter,
            primal_residual: prob.residual(&q),
            min_eig: min_eigenvalue(&q),
            separation: last_sep.unwrap_or(0.0),
        },
    })
}

fn accept(prob: &GramProblem, normalized: &DMatrix<f64>, scale: f64, cfg: &SdpConfig, it: usize) -> Option<SdpResult> {
    let q = normalized * scale;
    let q = (&q + q.transpose()) * 0.5;
    let residual = prob.residual(&q);
    let min_eig = min_eigenvalue(&q);
    (residual <= cfg.tol_primal && min_eig >= -cfg.tol_eig).then(|| SdpResult {
        status: SdpStatus::Feasible,
        certificate: Some(q),
        stats: SdpStats {
            iterations: it,
            primal_residual: residual,
            min_eig,
            separation: 0.0,
        },
    })
}

/// Farkas check on a displacement `v` between the affine set and the cone:
/// with `y_u = −⟨A_u, v⟩ / ‖A_u‖²` and `g = Σ y_u A_u`, infeasibility holds
/// when `g ⪰ 0` and `bᵀy < 0`.
fn farkas_certificate(sc: &Scaled<'_>, v: &DMatrix<f64>) -> bool {
    let m = v.nrows();
    let mut g = DMatrix::<f64>::zeros(m, m);
    let mut bty = 0.0;
    for (k, c) in sc.cons.iter().enumerate() {
        let y = -c.evaluate(v) / sc.norm_sq[k];
        bty += sc.b[k] * y;
        for &(i, j) in &c.pairs {
            g[(i, j)] = y;
            g[(j, i)] = y;
        }
    }
    let norm = g.norm();
    if norm == 0.0 || bty >= 0.0 {
        return false;
    }
    min_eigenvalue(&g) >= -FARKAS_EIG_REL * norm
}

/// Re-solves the constraints over `Q = V S Vᵀ` for dominant eigenvectors `V`.
fn polish(sc: &Scaled<'_>, eig: &SymmetricEigen<f64, nalgebra::Dyn>) -> Option<DMatrix<f64>> {
    let m = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = eig.eigenvalues[order[0]];
    if top <= 0.0 {
        return None;
    }
    let mut ranks: Vec<usize> = POLISH_THRESHOLDS
        .iter()
        .map(|th| order.iter().filter(|&&i| eig.eigenvalues[i] > th * top).count())
        .filter(|&r| r > 0 && r < m && r * (r + 1) / 2 <= POLISH_MAX_UNKNOWNS)
        .collect();
    ranks.dedup();
    for r in ranks {
        let mut v = DMatrix::<f64>::zeros(m, r);
        for (c, &i) in order[..r].iter().enumerate() {
            v.set_column(c, &eig.eigenvectors.column(i));
        }
        if let Some(q) = polish_rank(sc, &v, eig) {
            return Some(q);
        }
    }
    None
}

fn polish_rank(sc: &Scaled<'_>, v: &DMatrix<f64>, eig: &SymmetricEigen<f64, nalgebra::Dyn>) -> Option<DMatrix<f64>> {
    let r = v.ncols();
    let unknowns: Vec<(usize, usize)> = (0..r).flat_map(|a| (a..r).map(move |b| (a, b))).collect();
    let mut mat = DMatrix::<f64>::zeros(sc.cons.len(), unknowns.len());
    for (k, c) in sc.cons.iter().enumerate() {
        for &(i, j) in &c.pairs {
            let w = if i == j { 1.0 } else { 2.0 };
            for (col, &(a, b)) in unknowns.iter().enumerate() {
                let coef = if a == b {
                    v[(i, a)] * v[(j, a)]
                } else {
                    v[(i, a)] * v[(j, b)] + v[(i, b)] * v[(j, a)]
                };
                mat[(k, col)] += w * coef;
            }
        }
    }
    // Start from the current iterate restricted to the subspace.
    let x = psd_part(eig);
    let s0 = v.transpose() * &x * v;
    let s0_vec = DVector::from_iterator(unknowns.len(), unknowns.iter().map(|&(a, b)| s0[(a, b)]));
    let rhs = DVector::from_vec(sc.b.clone()) - &mat * &s0_vec;
    let delta = mat.svd(true, true).solve(&rhs, 1e-12).ok()?;
    let s_vec = s0_vec + delta;
    let mut s = DMatrix::<f64>::zeros(r, r);
    for (col, &(a, b)) in unknowns.iter().enumerate() {
        s[(a, b)] = s_vec[col];
        s[(b, a)] = s_vec[col];
    }
    let q = v * s * v.transpose();
    Some((&q + q.transpose()) * 0.5)
}

/// Largest coefficient mismatch of `z_Bᵀ Q z_B` against `p` and `λ_min(Q)`.
pub fn certificate_residuals(q: &DMatrix<f64>, basis: &Basis, p: &Polynomial) -> Result<(f64, f64)> {
    let m = basis.len();
    if q.nrows() != m || q.ncols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: q.nrows().max(q.ncols()),
        });
    }
    if let Some(n) = basis.n_vars() {
        if n != p.n_vars() {
            return Err(Error::DimensionMismatch {
                expected: p.n_vars(),
                found: n,
            });
        }
    }
    let ms = basis.monomials();
    let mut recon: BTreeMap<Monomial, f64> = BTreeMap::new();
    for i in 0..m {
        for j in 0..m {
            *recon.entry(ms[i].mul(&ms[j])).or_insert(0.0) += q[(i, j)];
        }
    }
    let mut residual: f64 = 0.0;
    for (u, v) in &recon {
        residual = residual.max((v - p.coefficient(u)).abs());
    }
    for (u, c) in p.terms() {
        if !recon.contains_key(u) {
            residual = residual.max(c.abs());
        }
    }
    Ok((residual, min_eigenvalue(q)))
}

/// Independent check: `λ_min(Q) >= −tol` and every coefficient matches within `tol`.
pub fn verify_certificate(q: &DMatrix<f64>, basis: &Basis, p: &Polynomial, tol: f64) -> Result<bool> {
    let (residual, min_eig) = certificate_residuals(q, basis, p)?;
    let asym = (q - q.transpose()).amax();
    Ok(residual <= tol && min_eig >= -tol && asym <= tol)
}

/// JSON dump of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDump {
    pub basis: Vec<Vec<u32>>,
    /// Row-major lower triangle.
    #[serde(rename = "Q")]
    pub q: Vec<f64>,
    pub residual: f64,
    pub min_eig: f64,
}

impl CertificateDump {
    pub fn new(q: &DMatrix<f64>, basis: &Basis, p: &Polynomial) -> Result<Self> {
        let (residual, min_eig) = certificate_residuals(q, basis, p)?;
        let lower = (0..q.nrows()).flat_map(|i| (0..=i).map(move |j| q[(i, j)])).collect();
        Ok(CertificateDump {
            basis: basis.iter().map(|m| m.exponents().to_vec()).collect(),
            q: lower,
            residual,
            min_eig,
        })
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let m = self.basis.len();
        let mut q = DMatrix::zeros(m, m);
        let mut it = self.q.iter();
        for i in 0..m {
            for j in 0..=i {
                let v = *it.next().unwrap_or(&0.0);
                q[(i, j)] = v;
                q[(j, i)] = v;
            }
        }
        q
    }
}
