//! Newton polytopes, half-polytope lattice points and basis-size lower bounds.
//!
//! For up to three variables the polytope is described exactly by integer
//! half-spaces. Beyond that it stays in vertex form and membership queries
//! are answered by a convex-combination LP, solved over exact rationals when
//! the support is small and in floating point otherwise. The floating-point
//! route counts points within tolerance of the boundary as members, so the
//! candidate pool can only grow, never lose a valid basis monomial.

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lp;
use crate::polycore::{Monomial, Polynomial};

/// Largest dimension handled by the exact half-space description.
pub const EXACT_HULL_MAX_DIM: usize = 3;
/// Supports up to this size use exact rational LPs (when `n <= 8`).
pub const EXACT_LP_MAX_POINTS: usize = 50;
pub const EXACT_LP_MAX_DIM: usize = 8;

/// How membership in the Newton polytope is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HullStrategy {
    /// Half-spaces for `n <= 3`, exact LP for small supports, float LP otherwise.
    #[default]
    Auto,
    ExactHull,
    ExactLp,
    FloatLp,
}

/// Half-space `normal · x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfSpace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl HalfSpace {
    fn value(&self, x: &[i64]) -> i64 {
        dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.value(x) <= self.offset
    }
}

#[derive(Clone, Debug)]
struct HRep {
    /// Affine hull: `normal · x == offset` for each entry.
    equalities: Vec<HalfSpace>,
    facets: Vec<HalfSpace>,
}

impl HRep {
    fn contains(&self, x: &[i64]) -> bool {
        self.equalities.iter().all(|e| e.value(x) == e.offset)
            && self.facets.iter().all(|f| f.contains(x))
    }

    fn is_vertex(&self, x: &[i64], dim: usize) -> bool {
        let mut rows: Vec<Vec<i64>> = self.equalities.iter().map(|e| e.normal.clone()).collect();
        rows.extend(
            self.facets
                .iter()
                .filter(|f| f.value(x) == f.offset)
                .map(|f| f.normal.clone()),
        );
        rank(&rows, dim) == dim
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Route {
    Hull,
    ExactLp,
    FloatLp,
}

/// Convex hull of a polynomial's exponent vectors.
#[derive(Debug)]
pub struct LatticePolytope {
    dim: usize,
    points: Vec<Vec<i64>>,
    point_set: HashSet<Vec<i64>>,
    route: Route,
    hrep: Option<HRep>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    deg_lo: i64,
    deg_hi: i64,
    vertices: OnceLock<Vec<Vec<i64>>>,
}

impl LatticePolytope {
    pub fn from_polynomial(p: &Polynomial, strategy: HullStrategy) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        let points: Vec<Vec<i64>> = p
            .terms()
            .map(|(m, _)| m.exponents().iter().map(|&e| e as i64).collect())
            .collect();
        Ok(Self::from_points(p.n_vars(), points, strategy))
    }

    fn from_points(dim: usize, points: Vec<Vec<i64>>, strategy: HullStrategy) -> Self {
        let route = match strategy {
            HullStrategy::ExactHull => Route::Hull,
            HullStrategy::ExactLp => Route::ExactLp,
            HullStrategy::FloatLp => Route::FloatLp,
            HullStrategy::Auto if dim <= EXACT_HULL_MAX_DIM => Route::Hull,
            HullStrategy::Auto
                if points.len() <= EXACT_LP_MAX_POINTS && dim <= EXACT_LP_MAX_DIM =>
            {
                Route::ExactLp
            }
            HullStrategy::Auto => Route::FloatLp,
        };
        let mut lo = vec![i64::MAX; dim];
        let mut hi = vec![i64::MIN; dim];
        let (mut deg_lo, mut deg_hi) = (i64::MAX, i64::MIN);
        for pt in &points {
            for i in 0..dim {
                lo[i] = lo[i].min(pt[i]);
                hi[i] = hi[i].max(pt[i]);
            }
            let d: i64 = pt.iter().sum();
            deg_lo = deg_lo.min(d);
            deg_hi = deg_hi.max(d);
        }
        let point_set: HashSet<Vec<i64>> = points.iter().cloned().collect();
        let mut poly = LatticePolytope {
            dim,
            points,
            point_set,
            route,
            hrep: None,
            lo,
            hi,
            deg_lo,
            deg_hi,
            vertices: OnceLock::new(),
        };
        if route == Route::Hull {
            poly.hrep = Some(poly.build_hrep());
        }
        poly
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exponent vectors the polytope was built from.
    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    /// Facet half-spaces; only available on the exact low-dimensional route.
    pub fn facets(&self) -> Option<&[HalfSpace]> {
        self.hrep.as_ref().map(|h| h.facets.as_slice())
    }

    /// Equations of the affine hull; only on the exact low-dimensional route.
    pub fn equalities(&self) -> Option<&[HalfSpace]> {
        self.hrep.as_ref().map(|h| h.equalities.as_slice())
    }

    /// Whether the integer point `x` lies in the polytope.
    pub fn contains(&self, x: &[i64]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        if self.point_set.contains(x) {
            return true;
        }
        if (0..self.dim).any(|i| x[i] < self.lo[i] || x[i] > self.hi[i]) {
            return false;
        }
        let d: i64 = x.iter().sum();
        if d < self.deg_lo || d > self.deg_hi {
            return false;
        }
        match self.route {
            Route::Hull => self.hrep.as_ref().expect("hull built").contains(x),
            Route::ExactLp | Route::FloatLp => {
                let cols: Vec<&[i64]> = match self.vertices.get() {
                    Some(v) => v.iter().map(Vec::as_slice).collect(),
                    None => self.points.iter().map(Vec::as_slice).collect(),
                };
                self.lp_member(&cols, x)
            }
        }
    }

    fn lp_member(&self, cols: &[&[i64]], x: &[i64]) -> bool {
        match self.route {
            Route::FloatLp => lp::in_hull_float(cols, x),
            _ => lp::in_hull_exact(cols, x),
        }
    }

    /// Whether the support point `x` is an extreme point.
    fn point_is_vertex(&self, idx: usize) -> bool {
        let x = &self.points[idx];
        match self.route {
            Route::Hull => self.hrep.as_ref().expect("hull built").is_vertex(x, self.dim),
            _ => {
                let others: Vec<&[i64]> = self
                    .points
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != idx)
                    .map(|(_, p)| p.as_slice())
                    .collect();
                // Float route: within-tolerance membership marks the point as
                // non-extreme, which can only shrink the forced set.
                !self.lp_member(&others, x)
            }
        }
    }

    fn vertex_points(&self) -> &Vec<Vec<i64>> {
        self.vertices.get_or_init(|| {
            (0..self.points.len())
                .filter(|&i| self.point_is_vertex(i))
                .map(|i| self.points[i].clone())
                .collect()
        })
    }

    /// Extreme points as monomials, ascending graded-lex.
    pub fn vertices(&self) -> Vec<Monomial> {
        let mut v: Vec<Monomial> = self.vertex_points().iter().map(|p| to_monomial(p)).collect();
        v.sort();
        v
    }

    /// Whether the support point given as a monomial is a vertex.
    pub fn is_vertex(&self, m: &Monomial) -> bool {
        let x: Vec<i64> = m.exponents().iter().map(|&e| e as i64).collect();
        if let Some(v) = self.vertices.get() {
            return v.contains(&x);
        }
        match self.points.iter().position(|p| *p == x) {
            Some(i) => self.point_is_vertex(i),
            None => false,
        }
    }

    /// Every `alpha` with nonnegative integer entries and `2 alpha` in the polytope.
    pub fn half_lattice_points(&self) -> BTreeSet<Monomial> {
        let lo: Vec<i64> = self.lo.iter().map(|&l| (l + 1).div_euclid(2)).collect();
        let hi: Vec<i64> = self.hi.iter().map(|&h| h.div_euclid(2)).collect();
        let deg_lo = (self.deg_lo + 1).div_euclid(2);
        let deg_hi = self.deg_hi.div_euclid(2);

        let mut candidates = Vec::new();
        let mut cur = lo.clone();
        enumerate_box(&lo, &hi, deg_lo, deg_hi, 0, 0, &mut cur, &mut candidates);

        if self.route != Route::Hull && candidates.len() > self.points.len() && self.points.len() > 2 * (self.dim + 1) {
            // Many queries: shrink the LP columns to the extreme points first.
            self.vertex_points();
        }
        candidates
            .into_iter()
            .filter(|alpha| {
                let doubled: Vec<i64> = alpha.iter().map(|a| 2 * a).collect();
                self.contains(&doubled)
            })
            .map(|alpha| to_monomial(&alpha))
            .collect()
    }

    fn build_hrep(&self) -> HRep {
        let dim = self.dim;
        let p0 = &self.points[0];
        let diffs: Vec<Vec<i64>> = self.points.iter().map(|p| sub(p, p0)).collect();
        let equalities: Vec<HalfSpace> = nullspace(&diffs, dim)
            .into_iter()
            .map(|normal| {
                let offset = dot(&normal, p0);
                HalfSpace { normal, offset }
            })
            .collect();
        let k = dim - equalities.len();
        if k == 0 {
            return HRep { equalities, facets: Vec::new() };
        }
        // Facet normals are spanned by k affinely independent vertices; the
        // extreme points are the only ones worth combining.
        let cand: Vec<&Vec<i64>> = if self.points.len() > 60 {
            self.points
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    let others: Vec<&[i64]> = self
                        .points
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| j != i)
                        .map(|(_, p)| p.as_slice())
                        .collect();
                    !lp::in_hull_float(&others, &self.points[*i])
                })
                .map(|(_, p)| p)
                .collect()
        } else {
            self.points.iter().collect()
        };
        let mut facets = BTreeSet::new();
        let mut idx: Vec<usize> = (0..k).collect();
        if cand.len() >= k {
            loop {
                let base = cand[idx[0]];
                let mut rows: Vec<Vec<i64>> =
                    idx[1..].iter().map(|&i| sub(cand[i], base)).collect();
                rows.extend(equalities.iter().map(|e| e.normal.clone()));
                let ns = nullspace(&rows, dim);
                if ns.len() == 1 {
                    let h = &ns[0];
                    let c = dot(h, base);
                    let (mut le, mut ge) = (true, true);
                    for p in &self.points {
                        let v = dot(h, p);
                        le &= v <= c;
                        ge &= v >= c;
                    }
                    if le ^ ge {
                        let (normal, offset) = if le {
                            (h.clone(), c)
                        } else {
                            (h.iter().map(|x| -x).collect(), -c)
                        };
                        facets.insert(HalfSpace { normal, offset });
                    }
                }
                if !next_combination(&mut idx, cand.len()) {
                    break;
                }
            }
        }
        HRep {
            equalities,
            facets: facets.into_iter().collect(),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate_box(
    lo: &[i64],
    hi: &[i64],
    deg_lo: i64,
    deg_hi: i64,
    i: usize,
    acc: i64,
    cur: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if i == lo.len() {
        if acc >= deg_lo && acc <= deg_hi {
            out.push(cur.clone());
        }
        return;
    }
    let rest_lo: i64 = lo[i + 1..].iter().sum();
    for v in lo[i]..=hi[i] {
        if acc + v + rest_lo > deg_hi {
            break;
        }
        cur[i] = v;
        enumerate_box(lo, hi, deg_lo, deg_hi, i + 1, acc + v, cur, out);
    }
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn to_monomial(p: &[i64]) -> Monomial {
    Monomial::new(p.iter().map(|&e| e as u32))
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

type Q = Ratio<i128>;

fn rref(rows: &[Vec<i64>], dim: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Q::from_integer(v as i128)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..dim {
                    let t = m[r][j] * f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

fn rank(rows: &[Vec<i64>], dim: usize) -> usize {
    rref(rows, dim).1.len()
}

/// Integer basis of `{x : row · x = 0 for every row}`.
fn nullspace(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let (m, pivots) = rref(rows, dim);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); dim];
            v[f] = Q::from_integer(1);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f];
            }
            let lcm = v.iter().fold(1i128, |acc, x| num_integer_lcm(acc, *x.denom()));
            let ints: Vec<i128> = v.iter().map(|x| (x * Q::from_integer(lcm)).to_integer()).collect();
            let g = ints.iter().fold(0i128, |acc, &x| num_integer_gcd(acc, x.abs()));
            ints.iter().map(|&x| (x / g.max(1)) as i64).collect()
        })
        .collect()
}

fn num_integer_gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        num_integer_gcd(b, a % b)
    }
}

fn num_integer_lcm(a: i128, b: i128) -> i128 {
    let b = b.abs();
    a / num_integer_gcd(a, b) * b
}

/// Convex hull of the exponent vectors of `p`, with its vertices resolved.
pub fn newton_polytope(p: &Polynomial) -> Result<LatticePolytope> {
    let poly = LatticePolytope::from_polynomial(p, HullStrategy::Auto)?;
    poly.vertex_points();
    Ok(poly)
}

/// Lattice points of the half Newton polytope: the candidate basis pool.
pub fn half_polytope_points(p: &Polynomial) -> Result<BTreeSet<Monomial>> {
    half_polytope_points_with(p, HullStrategy::Auto)
}

pub fn half_polytope_points_with(p: &Polynomial, strategy: HullStrategy) -> Result<BTreeSet<Monomial>> {
    Ok(LatticePolytope::from_polynomial(p, strategy)?.half_lattice_points())
}

/// Integer vertices of the half Newton polytope.
pub fn half_polytope_vertices(p: &Polynomial) -> Result<BTreeSet<Monomial>> {
    let poly = LatticePolytope::from_polynomial(p, HullStrategy::Auto)?;
    Ok(poly
        .vertex_points()
        .iter()
        .filter_map(|v| to_monomial(v).sqrt())
        .collect())
}

/// `⌈(√(1+8|S|) − 1)/2⌉`: the smallest `m` with `m(m+1)/2 >= |S|`.
pub fn lower_bound_combinatorial(p: &Polynomial) -> usize {
    combinatorial_bound(p.len())
}

pub fn combinatorial_bound(support_size: usize) -> usize {
    let mut m = (((1.0 + 8.0 * support_size as f64).sqrt() - 1.0) / 2.0).floor() as usize;
    m = m.saturating_sub(1);
    while m * (m + 1) / 2 < support_size {
        m += 1;
    }
    m
}

/// Monomials every valid Gram basis must contain, and their count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexBound {
    pub forced: BTreeSet<Monomial>,
    pub bound: usize,
}

/// Vertices `u` of the half polytope whose square `u²` is in the support.
pub fn lower_bound_vertices(p: &Polynomial) -> Result<VertexBound> {
    let poly = LatticePolytope::from_polynomial(p, HullStrategy::Auto)?;
    Ok(forced_monomials(p, &poly))
}

pub(crate) fn forced_monomials(p: &Polynomial, poly: &LatticePolytope) -> VertexBound {
    // Vertices of N(p) are support points, so only even support monomials can
    // be squares of half-polytope vertices.
    let forced: BTreeSet<Monomial> = p
        .terms()
        .filter_map(|(m, _)| m.sqrt().map(|r| (m, r)))
        .filter(|(m, _)| poly.is_vertex(m))
        .map(|(_, r)| r)
        .collect();
    let bound = forced.len();
    VertexBound { forced, bound }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::tests::{mono, running_example};

    fn monos(es: &[&[u32]]) -> BTreeSet<Monomial> {
        es.iter().map(|e| mono(e)).collect()
    }

    fn appendix_example() -> Polynomial {
        Polynomial::new(
            2,
            [
                (mono(&[4, 1]), 7.0),
                (mono(&[3, 1]), 1.0),
                (mono(&[2, 4]), 1.0),
                (mono(&[2, 0]), 1.0),
                (mono(&[1, 1]), 3.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn running_example_polytope() {
        let poly = newton_polytope(&running_example()).unwrap();
        assert_eq!(poly.vertices(), vec![mono(&[0, 0]), mono(&[0, 4]), mono(&[4, 0])]);
        assert!(poly.contains(&[2, 2]));
        assert!(poly.contains(&[1, 1]));
        assert!(!poly.contains(&[3, 2]));
        assert_eq!(poly.facets().unwrap().len(), 3);
    }

    #[test]
    fn running_example_half_points() {
        let pts = half_polytope_points(&running_example()).unwrap();
        assert_eq!(pts, monos(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[2, 0], &[0, 2]]));
        for s in [HullStrategy::ExactLp, HullStrategy::FloatLp, HullStrategy::ExactHull] {
            assert_eq!(half_polytope_points_with(&running_example(), s).unwrap(), pts);
        }
        assert_eq!(
            half_polytope_vertices(&running_example()).unwrap(),
            monos(&[&[0, 0], &[2, 0], &[0, 2]])
        );
    }

    #[test]
    fn single_point_cases() {
        let c = Polynomial::new(2, [(mono(&[0, 0]), 3.0)]).unwrap();
        assert_eq!(half_polytope_points(&c).unwrap(), monos(&[&[0, 0]]));
        let x4 = Polynomial::new(2, [(mono(&[4, 0]), 1.0)]).unwrap();
        assert_eq!(half_polytope_points(&x4).unwrap(), monos(&[&[2, 0]]));
        assert_eq!(newton_polytope(&x4).unwrap().vertices(), vec![mono(&[4, 0])]);
        assert_eq!(half_polytope_vertices(&x4).unwrap(), monos(&[&[2, 0]]));
        let odd = Polynomial::new(1, [(mono(&[1]), 1.0)]).unwrap();
        assert!(half_polytope_points(&odd).unwrap().is_empty());
        assert!(matches!(
            half_polytope_points(&Polynomial::zero(2)),
            Err(Error::EmptyPolynomial)
        ));
    }

    #[test]
    fn appendix_polytope_vertices() {
        let p = appendix_example();
        let poly = newton_polytope(&p).unwrap();
        // (3,1) lies on the segment from (1,1) to (4,1).
        assert_eq!(
            poly.vertices().into_iter().collect::<BTreeSet<_>>(),
            monos(&[&[4, 1], &[2, 4], &[2, 0], &[1, 1]])
        );
        // Only (2,4) and (2,0) halve to integer points.
        assert_eq!(half_polytope_vertices(&p).unwrap(), monos(&[&[1, 2], &[1, 0]]));
        for s in [HullStrategy::ExactLp, HullStrategy::FloatLp] {
            assert_eq!(
                half_polytope_points_with(&p, s).unwrap(),
                half_polytope_points(&p).unwrap()
            );
        }
    }

    #[test]
    fn combinatorial_bound_values() {
        assert_eq!(lower_bound_combinatorial(&running_example()), 3);
        assert_eq!(combinatorial_bound(1), 1);
        assert_eq!(combinatorial_bound(6), 3);
        assert_eq!(combinatorial_bound(7), 4);
        assert_eq!(combinatorial_bound(0), 0);
        for s in 1..2000usize {
            let exact = (((1.0 + 8.0 * s as f64).sqrt() - 1.0) / 2.0 - 1e-12).ceil() as usize;
            assert_eq!(combinatorial_bound(s), exact, "s={s}");
        }
    }

    #[test]
    fn vertex_bound_examples() {
        let vb = lower_bound_vertices(&running_example()).unwrap();
        assert_eq!(vb.forced, monos(&[&[0, 0], &[2, 0], &[0, 2]]));
        assert_eq!(vb.bound, 3);
        let x2 = Polynomial::new(1, [(mono(&[2]), 1.0)]).unwrap();
        let vb = lower_bound_vertices(&x2).unwrap();
        assert_eq!(vb.forced, monos(&[&[1]]));
        assert_eq!(vb.bound, 1);
    }

    #[test]
    fn three_dimensional_hull() {
        // Octahedron-like support around (2,2,2) plus interior points.
        let pts: &[&[u32]] = &[
            &[0, 2, 2], &[4, 2, 2], &[2, 0, 2], &[2, 4, 2], &[2, 2, 0], &[2, 2, 4], &[2, 2, 2], &[3, 2, 2],
        ];
        let p = Polynomial::new(3, pts.iter().map(|e| (mono(e), 1.0))).unwrap();
        let poly = newton_polytope(&p).unwrap();
        assert_eq!(poly.vertices().len(), 6);
        assert_eq!(poly.facets().unwrap().len(), 8);
        let exact = half_polytope_points_with(&p, HullStrategy::ExactLp).unwrap();
        assert_eq!(half_polytope_points(&p).unwrap(), exact);
        assert_eq!(exact, monos(&[&[1, 1, 1], &[0, 1, 1], &[2, 1, 1], &[1, 0, 1], &[1, 2, 1], &[1, 1, 0], &[1, 1, 2]]));
    }

    #[test]
    fn lower_dimensional_hull_in_three_variables() {
        // All points on the plane x + y + z = 4.
        let pts: &[&[u32]] = &[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[2, 2, 0]];
        let p = Polynomial::new(3, pts.iter().map(|e| (mono(e), 1.0))).unwrap();
        let poly = newton_polytope(&p).unwrap();
        assert_eq!(poly.equalities().unwrap().len(), 1);
        assert_eq!(poly.vertices().len(), 3);
        assert_eq!(
            half_polytope_points(&p).unwrap(),
            half_polytope_points_with(&p, HullStrategy::ExactLp).unwrap()
        );
    }
}
