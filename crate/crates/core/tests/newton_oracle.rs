//! Half-polytope pools and vertex bounds against an independent planar hull.

mod common;

use std::collections::BTreeSet;

use common::random_polynomial;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use soscert::datagen::{generate_entry, GenConfig, GramStructure};
use soscert::newton::{half_polytope_points_with, HullStrategy};
use soscert::{half_polytope_points, lower_bound_vertices, Monomial, Polynomial};

type P = (i64, i64);

fn cross(o: P, a: P, b: P) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
fn hull(mut pts: Vec<P>) -> Vec<P> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<P> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn inside(h: &[P], q: P) -> bool {
    match h.len() {
        0 => false,
        1 => h[0] == q,
        2 => {
            cross(h[0], h[1], q) == 0
                && q.0 >= h[0].0.min(h[1].0)
                && q.0 <= h[0].0.max(h[1].0)
                && q.1 >= h[0].1.min(h[1].1)
                && q.1 <= h[0].1.max(h[1].1)
        }
        k => (0..k).all(|i| cross(h[i], h[(i + 1) % k], q) >= 0),
    }
}

fn support_points(p: &Polynomial) -> Vec<P> {
    p.terms()
        .map(|(m, _)| (m.exponents()[0] as i64, m.exponents()[1] as i64))
        .collect()
}

fn planar_pool(p: &Polynomial) -> BTreeSet<Monomial> {
    let h = hull(support_points(p));
    let max = h.iter().map(|q| q.0.max(q.1)).max().unwrap_or(0) / 2;
    let mut out = BTreeSet::new();
    for a in 0..=max {
        for b in 0..=max {
            if inside(&h, (2 * a, 2 * b)) {
                out.insert(Monomial::new([a as u32, b as u32]));
            }
        }
    }
    out
}

fn planar_forced(p: &Polynomial) -> BTreeSet<Monomial> {
    hull(support_points(p))
        .into_iter()
        .filter(|q| q.0 % 2 == 0 && q.1 % 2 == 0)
        .map(|q| Monomial::new([(q.0 / 2) as u32, (q.1 / 2) as u32]))
        .collect()
}

fn poly_from(n: usize, pts: &[Vec<u32>]) -> Polynomial {
    Polynomial::new(n, pts.iter().map(|e| (Monomial::new(e.iter().copied()), 1.0))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn planar_pool_matches_monotone_chain(pts in prop::collection::vec(prop::collection::vec(0u32..9, 2), 1..10)) {
        let p = poly_from(2, &pts);
        let expected = planar_pool(&p);
        for s in [HullStrategy::Auto, HullStrategy::ExactHull, HullStrategy::ExactLp, HullStrategy::FloatLp] {
            prop_assert_eq!(&half_polytope_points_with(&p, s).unwrap(), &expected, "strategy {:?}", s);
        }
    }

    #[test]
    fn planar_forced_set_matches_hull_vertices(pts in prop::collection::vec(prop::collection::vec(0u32..9, 2), 1..10)) {
        let p = poly_from(2, &pts);
        let vb = lower_bound_vertices(&p).unwrap();
        prop_assert_eq!(vb.bound, vb.forced.len());
        prop_assert_eq!(vb.forced, planar_forced(&p));
    }

    #[test]
    fn strategies_agree_in_three_dimensions(pts in prop::collection::vec(prop::collection::vec(0u32..7, 3), 1..12)) {
        let p = poly_from(3, &pts);
        let exact = half_polytope_points_with(&p, HullStrategy::ExactHull).unwrap();
        prop_assert_eq!(&half_polytope_points_with(&p, HullStrategy::ExactLp).unwrap(), &exact);
        prop_assert_eq!(&half_polytope_points_with(&p, HullStrategy::FloatLp).unwrap(), &exact);
    }
}

#[test]
fn lp_routes_agree_in_higher_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in [4usize, 5] {
        for _ in 0..40 {
            let p = random_polynomial(&mut rng, n, 8, 4);
            let exact = half_polytope_points_with(&p, HullStrategy::ExactLp).unwrap();
            assert_eq!(half_polytope_points_with(&p, HullStrategy::FloatLp).unwrap(), exact);
        }
    }
}

#[test]
fn generated_bases_lie_in_the_pool_and_above_the_bounds() {
    for (i, s) in GramStructure::all().into_iter().enumerate() {
        let gen = GenConfig::new(4, 6, 15, s);
        for id in 0..10 {
            let e = generate_entry(&gen, 31 + i as u64, id, None).unwrap();
            let pool = half_polytope_points(&e.polynomial).unwrap();
            assert!(e.basis.to_set().is_subset(&pool));
            let vb = lower_bound_vertices(&e.polynomial).unwrap();
            assert!(vb.forced.is_subset(&e.basis.to_set()));
            assert!(soscert::lower_bound_combinatorial(&e.polynomial) <= e.basis.len());
        }
    }
}
