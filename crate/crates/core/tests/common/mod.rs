#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use soscert::predictor::{BasisPredictor, PredictInput};
use soscert::{Basis, Monomial, Polynomial};

pub fn mono(e: &[u32]) -> Monomial {
    Monomial::new(e.iter().copied())
}

pub fn set(es: &[&[u32]]) -> BTreeSet<Monomial> {
    es.iter().map(|e| mono(e)).collect()
}

/// 4x1^4 + 12x1^2x2^2 + 9x2^4 + 1.
pub fn running_example() -> Polynomial {
    Polynomial::new(
        2,
        [
            (mono(&[4, 0]), 4.0),
            (mono(&[2, 2]), 12.0),
            (mono(&[0, 4]), 9.0),
            (mono(&[0, 0]), 1.0),
        ],
    )
    .unwrap()
}

/// Adversarial predictor: only the constant monomial.
pub struct ConstantPredictor;

impl BasisPredictor for ConstantPredictor {
    fn predict(&self, input: &PredictInput<'_>, _rng: &mut ChaCha8Rng) -> soscert::Result<Basis> {
        Basis::new(vec![Monomial::one(input.polynomial.n_vars())])
    }
}

/// Random monomial with each exponent in `0..=max_exp`.
pub fn random_monomial(rng: &mut ChaCha8Rng, n: usize, max_exp: u32) -> Monomial {
    Monomial::new((0..n).map(|_| rng.random_range(0..=max_exp)))
}

/// Coefficient spanning many magnitudes and both signs.
pub fn random_coefficient(rng: &mut ChaCha8Rng) -> f64 {
    let base: f64 = rng.sample(StandardNormal);
    let exp = rng.random_range(-12..=12);
    base * 10f64.powi(exp)
}

pub fn random_polynomial(rng: &mut ChaCha8Rng, n: usize, terms: usize, max_exp: u32) -> Polynomial {
    let t: Vec<(Monomial, f64)> = (0..terms)
        .map(|_| (random_monomial(rng, n, max_exp), random_coefficient(rng)))
        .collect();
    Polynomial::new(n, t).unwrap()
}
