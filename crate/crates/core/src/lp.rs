//! Phase-one simplex for convex-combination feasibility.
//!
//! Decides whether a target point is a convex combination of a set of
//! integer points, i.e. whether `A λ = y, 1ᵀλ = 1, λ ≥ 0` is feasible. The
//! tableau is generic so the same pivoting code runs over exact rationals
//! (small instances) and over `f64` with a feasibility tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Objective value below which the floating-point LP reports feasibility.
pub const FLOAT_FEASIBILITY_TOL: f64 = 1e-9;
const FLOAT_PIVOT_TOL: f64 = 1e-11;
const BLAND_AFTER: usize = 64;

pub(crate) trait LpScalar: Clone {
    fn from_i64(v: i64) -> Self;
    fn zero() -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn neg(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub_mul(&self, a: &Self, b: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn less(&self, o: &Self) -> bool;
    /// Whether a phase-one optimum counts as feasible.
    fn feasible_objective(&self) -> bool;
}

impl LpScalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn zero() -> Self {
        0.0
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_PIVOT_TOL
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_PIVOT_TOL
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Self {
        self - a * b
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn less(&self, o: &Self) -> bool {
        self < o
    }
    fn feasible_objective(&self) -> bool {
        *self <= FLOAT_FEASIBILITY_TOL
    }
}

impl LpScalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_mul(&self, a: &Self, b: &Self) -> Self {
        self - a * b
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn less(&self, o: &Self) -> bool {
        self < o
    }
    fn feasible_objective(&self) -> bool {
        self.is_zero()
    }
}

/// Whether `target` lies in the convex hull of `points` (all of equal length).
pub(crate) fn in_convex_hull<T: LpScalar>(points: &[&[i64]], target: &[i64]) -> bool {
    if points.is_empty() {
        return false;
    }
    let dim = target.len();
    let rows = dim + 1;
    let k = points.len();
    // Columns: k convex weights, `rows` artificials, then the right-hand side.
    let width = k + rows + 1;
    let mut tab: Vec<Vec<T>> = Vec::with_capacity(rows + 1);
    for r in 0..rows {
        let rhs = if r < dim { target[r] } else { 1 };
        let flip = rhs < 0;
        let sign = |v: i64| if flip { -v } else { v };
        let mut row = Vec::with_capacity(width);
        for p in points {
            row.push(T::from_i64(sign(if r < dim { p[r] } else { 1 })));
        }
        for a in 0..rows {
            row.push(if a == r { T::from_i64(1) } else { T::zero() });
        }
        row.push(T::from_i64(sign(rhs)));
        tab.push(row);
    }
    // Reduced costs of the phase-one objective (sum of artificials).
    let mut obj = vec![T::zero(); width];
    for row in &tab {
        for j in 0..k {
            obj[j] = obj[j].add(&row[j].neg());
        }
        obj[width - 1] = obj[width - 1].add(&row[width - 1].neg());
    }
    tab.push(obj);
    let mut basis: Vec<usize> = (k..k + rows).collect();

    let mut iter = 0usize;
    loop {
        let obj = &tab[rows];
        let entering = if iter < BLAND_AFTER {
            let mut best: Option<usize> = None;
            for j in 0..k + rows {
                if obj[j].is_neg() && best.is_none_or(|b| obj[j].less(&obj[b])) {
                    best = Some(j);
                }
            }
            best
        } else {
            (0..k + rows).find(|&j| obj[j].is_neg())
        };
        let Some(col) = entering else { break };
        let mut leave: Option<(usize, T)> = None;
        for r in 0..rows {
            let a = &tab[r][col];
            if a.is_pos() {
                let ratio = tab[r][width - 1].div(a);
                let better = match &leave {
                    None => true,
                    Some((lr, lv)) => {
                        ratio.less(lv) || (!lv.less(&ratio) && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((prow, _)) = leave else {
            // Unbounded direction cannot occur in phase one; stop defensively.
            break;
        };
        pivot(&mut tab, prow, col);
        basis[prow] = col;
        iter += 1;
        if iter > 50 * (k + rows) {
            break;
        }
    }
    tab[rows][width - 1].neg().feasible_objective()
}

fn pivot<T: LpScalar>(tab: &mut [Vec<T>], prow: usize, col: usize) {
    let width = tab[prow].len();
    let piv = tab[prow][col].clone();
    for j in 0..width {
        tab[prow][j] = tab[prow][j].div(&piv);
    }
    let pivot_row = tab[prow].clone();
    for (r, row) in tab.iter_mut().enumerate() {
        if r == prow {
            continue;
        }
        let factor = row[col].clone();
        if !factor.is_pos() && !factor.is_neg() {
            continue;
        }
        for j in 0..width {
            row[j] = row[j].sub_mul(&factor, &pivot_row[j]);
        }
    }
}

/// Exact-rational membership test.
pub(crate) fn in_hull_exact(points: &[&[i64]], target: &[i64]) -> bool {
    in_convex_hull::<BigRational>(points, target)
}

/// Floating-point membership test; points within tolerance count as inside.
pub(crate) fn in_hull_float(points: &[&[i64]], target: &[i64]) -> bool {
    in_convex_hull::<f64>(points, target)
}
