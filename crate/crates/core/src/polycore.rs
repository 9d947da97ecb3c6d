//! Exact monomial algebra and sparse real polynomials.
//!
//! Monomials are exponent vectors ordered graded-lexicographically (total
//! degree first, then lexicographic on the exponents). Every ordered
//! collection in this crate uses that order, which makes serialization and
//! tie-breaking deterministic.
//!
//! The token text format writes each term as `C<coeff> E<e1> ... E<en>` and
//! joins terms with ` + `; bases are written as exponent groups joined by
//! ` SEP `.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

type Exponents = SmallVec<[u32; 8]>;

/// Exponent vector over a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Exponents);

impl Monomial {
    pub fn new<I: IntoIterator<Item = u32>>(exponents: I) -> Self {
        Monomial(exponents.into_iter().collect())
    }

    /// The constant monomial `1` in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn n_vars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Product of two monomials (exponentwise sum).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.n_vars(), other.n_vars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self` componentwise.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.n_vars(), other.n_vars());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Exponents>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// The monomial whose square is `self`, if every exponent is even.
    pub fn sqrt(&self) -> Option<Monomial> {
        if self.0.iter().all(|e| e % 2 == 0) {
            Some(Monomial(self.0.iter().map(|e| e / 2).collect()))
        } else {
            None
        }
    }

    pub fn square(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| 2 * e).collect())
    }

    fn permuted(&self, perm: &Permutation) -> Monomial {
        let mut out: Exponents = SmallVec::from_elem(0, self.n_vars());
        for (i, &e) in self.0.iter().enumerate() {
            out[perm.image(i)] = e;
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with real coefficients. Immutable once built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialRepr", into = "PolynomialRepr")]
pub struct Polynomial {
    n_vars: usize,
    terms: BTreeMap<Monomial, f64>,
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    n_vars: usize,
    terms: Vec<(Monomial, f64)>,
}

impl TryFrom<PolynomialRepr> for Polynomial {
    type Error = Error;

    fn try_from(repr: PolynomialRepr) -> Result<Self> {
        Polynomial::new(repr.n_vars, repr.terms)
    }
}

impl From<Polynomial> for PolynomialRepr {
    fn from(p: Polynomial) -> Self {
        PolynomialRepr {
            n_vars: p.n_vars,
            terms: p.terms.into_iter().collect(),
        }
    }
}

impl Polynomial {
    /// Builds a polynomial, summing repeated monomials and dropping terms
    /// whose coefficient is exactly zero.
    pub fn new<I>(n_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, f64)>,
    {
        let mut map: BTreeMap<Monomial, f64> = BTreeMap::new();
        for (m, c) in terms {
            if m.n_vars() != n_vars {
                return Err(Error::DimensionMismatch {
                    expected: n_vars,
                    found: m.n_vars(),
                });
            }
            if !c.is_finite() {
                return Err(Error::NonFiniteCoefficient(m));
            }
            *map.entry(m).or_insert(0.0) += c;
        }
        map.retain(|_, c| *c != 0.0);
        Ok(Polynomial { n_vars, terms: map })
    }

    pub fn zero(n_vars: usize) -> Self {
        Polynomial {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree over the support; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Coefficient of `m`, zero when absent.
    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, f64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    /// The monomials carrying a nonzero coefficient.
    pub fn support(&self) -> BTreeSet<Monomial> {
        self.terms.keys().cloned().collect()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains_key(m)
    }

    pub fn scale(&self, factor: f64) -> Polynomial {
        Polynomial::new(self.n_vars, self.terms().map(|(m, c)| (m.clone(), c * factor)))
            .expect("scaling preserves validity")
    }

    /// Renames variable `i` to `perm(i)`.
    pub fn permute_variables(&self, perm: &Permutation) -> Result<Polynomial> {
        if perm.len() != self.n_vars {
            return Err(Error::InvalidPermutation(format!(
                "permutation acts on {} indices but polynomial has {} variables",
                perm.len(),
                self.n_vars
            )));
        }
        Ok(Polynomial {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.permuted(perm), c))
                .collect(),
        })
    }

    /// Evaluates at a point, mainly for tests and diagnostics.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms()
            .map(|(m, c)| {
                c * m
                    .exponents()
                    .iter()
                    .zip(x)
                    .map(|(&e, &xi)| xi.powi(e as i32))
                    .product::<f64>()
            })
            .sum()
    }
}

/// Ordered, duplicate-free list of monomials indexing a Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Monomial>", into = "Vec<Monomial>")]
pub struct Basis {
    monomials: Vec<Monomial>,
}

impl TryFrom<Vec<Monomial>> for Basis {
    type Error = Error;

    fn try_from(v: Vec<Monomial>) -> Result<Self> {
        Basis::new(v)
    }
}

impl From<Basis> for Vec<Monomial> {
    fn from(b: Basis) -> Self {
        b.monomials
    }
}

impl Basis {
    pub fn new(monomials: Vec<Monomial>) -> Result<Self> {
        if let Some(first) = monomials.first() {
            let n = first.n_vars();
            let mut seen = HashSet::with_capacity(monomials.len());
            for m in &monomials {
                if m.n_vars() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: m.n_vars(),
                    });
                }
                if !seen.insert(m) {
                    return Err(Error::DuplicateMonomial(m.clone()));
                }
            }
        }
        Ok(Basis { monomials })
    }

    /// Builds a basis from any collection, keeping first occurrences.
    pub fn from_iter_dedup<I: IntoIterator<Item = Monomial>>(iter: I) -> Result<Self> {
        let mut seen = HashSet::new();
        let monomials: Vec<Monomial> = iter
            .into_iter()
            .filter(|m| seen.insert(m.clone()))
            .collect();
        Basis::new(monomials)
    }

    pub fn empty() -> Self {
        Basis { monomials: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Monomial> {
        self.monomials.iter()
    }

    pub fn n_vars(&self) -> Option<usize> {
        self.monomials.first().map(Monomial::n_vars)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials.contains(m)
    }

    pub fn to_set(&self) -> BTreeSet<Monomial> {
        self.monomials.iter().cloned().collect()
    }

    /// Appends `m` if absent. Returns whether the basis grew.
    pub fn push(&mut self, m: Monomial) -> Result<bool> {
        if let Some(n) = self.n_vars() {
            if m.n_vars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.n_vars(),
                });
            }
        }
        if self.contains(&m) {
            return Ok(false);
        }
        self.monomials.push(m);
        Ok(true)
    }

    /// Keeps only the monomials accepted by `keep`, preserving order.
    pub fn retain<F: FnMut(&Monomial) -> bool>(&mut self, keep: F) {
        self.monomials.retain(keep);
    }

    pub fn permute_variables(&self, perm: &Permutation) -> Result<Basis> {
        if let Some(n) = self.n_vars() {
            if perm.len() != n {
                return Err(Error::InvalidPermutation(format!(
                    "permutation acts on {} indices but basis has {n} variables",
                    perm.len()
                )));
            }
        }
        Ok(Basis {
            monomials: self.monomials.iter().map(|m| m.permuted(perm)).collect(),
        })
    }

    /// Same monomials in ascending graded-lex order.
    pub fn sorted(&self) -> Basis {
        let mut monomials = self.monomials.clone();
        monomials.sort();
        Basis { monomials }
    }
}

impl<'a> IntoIterator for &'a Basis {
    type Item = &'a Monomial;
    type IntoIter = std::slice::Iter<'a, Monomial>;

    fn into_iter(self) -> Self::IntoIter {
        self.monomials.iter()
    }
}

/// Bijection on variable indices `0..n`; variable `i` is sent to `image(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {i} out of range for {n} variables"
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("image {i} repeated")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation(images)
    }
}

/// All products `b_i * b_j` with `i <= j`.
pub fn pairwise_products(basis: &Basis) -> Result<BTreeSet<Monomial>> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let ms = basis.monomials();
    let mut out = BTreeSet::new();
    for (i, a) in ms.iter().enumerate() {
        for b in &ms[i..] {
            out.insert(a.mul(b));
        }
    }
    Ok(out)
}

/// Support monomials of `p` that are not a product of two basis elements.
pub fn uncovered(basis: &Basis, p: &Polynomial) -> Result<Vec<Monomial>> {
    if let Some(n) = basis.n_vars() {
        if n != p.n_vars() {
            return Err(Error::DimensionMismatch {
                expected: p.n_vars(),
                found: n,
            });
        }
    }
    if basis.is_empty() {
        return Ok(p.support().into_iter().collect());
    }
    let products = pairwise_products(basis)?;
    Ok(p.terms
        .keys()
        .filter(|m| !products.contains(*m))
        .cloned()
        .collect())
}

/// Whether every support monomial of `p` lies in `B * B`.
pub fn covers(basis: &Basis, p: &Polynomial) -> Result<bool> {
    Ok(uncovered(basis, p)?.is_empty())
}

fn format_coefficient(c: f64) -> String {
    // Debug formatting is the shortest string that parses back to the same f64
    // and always carries a decimal point or exponent ("4.0", "0.25", "1e-7").
    format!("{c:?}")
}

fn write_exponents(out: &mut String, m: &Monomial) {
    for (i, e) in m.exponents().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push('E');
        out.push_str(&e.to_string());
    }
}

/// Token form of `p`, terms in descending graded-lex order.
pub fn tokenize(p: &Polynomial) -> Result<String> {
    if p.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        out.push('C');
        out.push_str(&format_coefficient(c));
        if m.n_vars() > 0 {
            out.push(' ');
        }
        write_exponents(&mut out, m);
    }
    Ok(out)
}

/// Token form of a basis, monomials in descending graded-lex order.
pub fn tokenize_basis(basis: &Basis) -> String {
    let mut ms: Vec<&Monomial> = basis.iter().collect();
    ms.sort_by(|a, b| b.cmp(a));
    let mut out = String::new();
    for (k, m) in ms.into_iter().enumerate() {
        if k > 0 {
            out.push_str(" SEP ");
        }
        write_exponents(&mut out, m);
    }
    out
}

struct Tokens<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(src: &'a str) -> Self {
        Tokens { src, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        if trimmed.is_empty() {
            self.pos = self.src.len();
            return None;
        }
        let start = self.pos + (rest.len() - trimmed.len());
        let len = trimmed
            .find(char::is_whitespace)
            .unwrap_or(trimmed.len());
        self.pos = start + len;
        Some((start, &self.src[start..start + len]))
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        Tokens { src: self.src, pos: self.pos }.next()
    }
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn parse_exponent(offset: usize, tok: &str) -> Result<u32> {
    tok.strip_prefix('E')
        .ok_or_else(|| parse_err(offset, format!("expected exponent token, found {tok:?}")))?
        .parse::<u32>()
        .map_err(|e| parse_err(offset + 1, format!("bad exponent {tok:?}: {e}")))
}

fn parse_exponent_group(tokens: &mut Tokens<'_>) -> Result<Monomial> {
    let mut exps = Vec::new();
    while let Some((off, tok)) = tokens.peek() {
        if !tok.starts_with('E') {
            break;
        }
        tokens.next();
        exps.push(parse_exponent(off, tok)?);
    }
    Ok(Monomial::new(exps))
}

/// Parses the token form produced by [`tokenize`].
pub fn detokenize(s: &str) -> Result<Polynomial> {
    let mut tokens = Tokens::new(s);
    let mut terms = Vec::new();
    let mut n_vars: Option<usize> = None;
    loop {
        let (off, tok) = tokens
            .next()
            .ok_or_else(|| parse_err(s.len(), "expected coefficient token"))?;
        let coeff_str = tok
            .strip_prefix('C')
            .ok_or_else(|| parse_err(off, format!("expected coefficient token, found {tok:?}")))?;
        let coeff: f64 = coeff_str
            .parse()
            .map_err(|e| parse_err(off + 1, format!("bad coefficient {coeff_str:?}: {e}")))?;
        if !coeff.is_finite() {
            return Err(parse_err(off + 1, "coefficient is not finite"));
        }
        let exp_off = tokens.peek().map_or(s.len(), |(o, _)| o);
        let m = parse_exponent_group(&mut tokens)?;
        match n_vars {
            None => n_vars = Some(m.n_vars()),
            Some(n) if n != m.n_vars() => {
                return Err(parse_err(
                    exp_off,
                    format!("term has {} exponents, expected {n}", m.n_vars()),
                ))
            }
            _ => {}
        }
        terms.push((m, coeff));
        match tokens.next() {
            None => break,
            Some((_, "+")) => continue,
            Some((o, t)) => return Err(parse_err(o, format!("expected '+', found {t:?}"))),
        }
    }
    Polynomial::new(n_vars.unwrap_or(0), terms)
}

/// Parses a basis written as exponent groups separated by `SEP`.
pub fn detokenize_basis(s: &str) -> Result<Basis> {
    let mut tokens = Tokens::new(s);
    let mut monomials = Vec::new();
    if tokens.peek().is_none() {
        return Ok(Basis::empty());
    }
    loop {
        let off = tokens.peek().map_or(s.len(), |(o, _)| o);
        let m = parse_exponent_group(&mut tokens)?;
        if m.n_vars() == 0 {
            return Err(parse_err(off, "expected exponent token"));
        }
        monomials.push(m);
        match tokens.next() {
            None => break,
            Some((_, "SEP")) => continue,
            Some((o, t)) => return Err(parse_err(o, format!("expected 'SEP', found {t:?}"))),
        }
    }
    Basis::new(monomials).map_err(|e| parse_err(0, e.to_string()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.iter().copied())
    }

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

    fn basis(ms: &[&[u32]]) -> Basis {
        Basis::new(ms.iter().map(|e| mono(e)).collect()).unwrap()
    }

    #[test]
    fn support_of_running_example() {
        let s = running_example().support();
        let want: BTreeSet<_> = [[4, 0], [2, 2], [0, 4], [0, 0]].iter().map(|e| mono(e)).collect();
        assert_eq!(s, want);
        assert!(Polynomial::zero(2).support().is_empty());
        let p = Polynomial::new(2, [(mono(&[1, 1]), 1.0)]).unwrap();
        assert_eq!(p.support().into_iter().collect::<Vec<_>>(), vec![mono(&[1, 1])]);
    }

    #[test]
    fn graded_lex_order() {
        let mut v = vec![mono(&[0, 4]), mono(&[0, 0]), mono(&[4, 0]), mono(&[1, 0]), mono(&[2, 2])];
        v.sort();
        assert_eq!(
            v,
            vec![mono(&[0, 0]), mono(&[1, 0]), mono(&[0, 4]), mono(&[2, 2]), mono(&[4, 0])]
        );
    }

    #[test]
    fn pairwise_products_examples() {
        let b = basis(&[&[0, 0], &[2, 0], &[1, 1]]);
        let got = pairwise_products(&b).unwrap();
        let want: BTreeSet<_> = [[0, 0], [2, 0], [1, 1], [4, 0], [3, 1], [2, 2]]
            .iter()
            .map(|e| mono(e))
            .collect();
        assert_eq!(got, want);

        let one = basis(&[&[0, 0]]);
        assert_eq!(pairwise_products(&one).unwrap().len(), 1);

        let lin = basis(&[&[1, 0], &[0, 1]]);
        let want: BTreeSet<_> = [[2, 0], [1, 1], [0, 2]].iter().map(|e| mono(e)).collect();
        assert_eq!(pairwise_products(&lin).unwrap(), want);

        assert!(matches!(pairwise_products(&Basis::empty()), Err(Error::EmptyBasis)));
    }

    #[test]
    fn coverage_examples() {
        let p = running_example();
        let b = basis(&[&[0, 0], &[2, 0], &[1, 1]]);
        assert!(!covers(&b, &p).unwrap());
        assert_eq!(uncovered(&b, &p).unwrap(), vec![mono(&[0, 4])]);
        assert!(covers(&basis(&[&[0, 0], &[2, 0], &[0, 2]]), &p).unwrap());
        let wrong_dim = basis(&[&[0, 0, 0]]);
        assert!(matches!(covers(&wrong_dim, &p), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn zero_terms_dropped_and_duplicates_summed() {
        let p = Polynomial::new(
            1,
            [(mono(&[1]), 2.0), (mono(&[1]), -2.0), (mono(&[0]), 0.0), (mono(&[2]), 1.0)],
        )
        .unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&mono(&[2])), 1.0);
        assert!(Polynomial::new(1, [(mono(&[1]), f64::NAN)]).is_err());
        assert!(Polynomial::new(2, [(mono(&[1]), 1.0)]).is_err());
    }

    #[test]
    fn permutation_examples() {
        let p = Polynomial::new(2, [(mono(&[2, 1]), 1.0)]).unwrap();
        let swap = Permutation::new(vec![1, 0]).unwrap();
        let q = p.permute_variables(&swap).unwrap();
        assert_eq!(q.support().into_iter().next().unwrap(), mono(&[1, 2]));
        assert_eq!(p.permute_variables(&Permutation::identity(2)).unwrap(), p);

        let cyc = Permutation::new(vec![2, 0, 1]).unwrap();
        let r = Polynomial::new(3, [(mono(&[3, 1, 0]), 2.0), (mono(&[0, 0, 5]), -1.0)]).unwrap();
        let back = r
            .permute_variables(&cyc)
            .unwrap()
            .permute_variables(&cyc.inverse())
            .unwrap();
        assert_eq!(back, r);

        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(r.permute_variables(&swap).is_err());
    }

    #[test]
    fn tokenize_running_example() {
        assert_eq!(
            tokenize(&running_example()).unwrap(),
            "C4.0 E4 E0 + C12.0 E2 E2 + C9.0 E0 E4 + C1.0 E0 E0"
        );
        let one = Polynomial::new(2, [(mono(&[0, 0]), 1.0)]).unwrap();
        assert_eq!(tokenize(&one).unwrap(), "C1.0 E0 E0");
        assert!(tokenize(&Polynomial::zero(2)).is_err());
    }

    #[test]
    fn tokenize_basis_matches_target_format() {
        let b = basis(&[&[0, 0], &[2, 0], &[0, 2]]);
        assert_eq!(tokenize_basis(&b), "E2 E0 SEP E0 E2 SEP E0 E0");
        assert_eq!(detokenize_basis("E2 E0 SEP E0 E2 SEP E0 E0").unwrap().to_set(), b.to_set());
    }

    #[test]
    fn detokenize_round_trip_and_errors() {
        let s = "C4.0 E4 E0 + C12.0 E2 E2 + C9.0 E0 E4 + C1.0 E0 E0";
        let p = detokenize(s).unwrap();
        assert_eq!(p, running_example());
        assert_eq!(tokenize(&p).unwrap(), s);

        let q = detokenize("C-0.25 E1 E0 + C1e-7 E0 E0").unwrap();
        assert_eq!(q.coefficient(&mono(&[1, 0])), -0.25);
        assert_eq!(tokenize(&q).unwrap(), "C-0.25 E1 E0 + C1e-7 E0 E0");

        match detokenize("C1.0 E1 E0 + X2") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 13),
            other => panic!("unexpected {other:?}"),
        }
        match detokenize("C1.0 E1 E0 + C2.0 E1") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 18),
            other => panic!("unexpected {other:?}"),
        }
        match detokenize("C1.x E0") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(detokenize("").is_err());
        assert!(detokenize("C1.0 E0 E0 +").is_err());
        assert!(detokenize_basis("E1 E0 SEP").is_err());
        assert!(detokenize_basis("E1 E0 SEP E1 E0").is_err());
    }

    #[test]
    fn divisibility_helpers() {
        let a = mono(&[2, 4]);
        assert_eq!(a.sqrt(), Some(mono(&[1, 2])));
        assert_eq!(mono(&[1, 2]).sqrt(), None);
        assert_eq!(a.checked_div(&mono(&[1, 4])), Some(mono(&[1, 0])));
        assert_eq!(a.checked_div(&mono(&[3, 0])), None);
        assert!(mono(&[1, 0]).divides(&a));
        assert_eq!(mono(&[1, 2]).square(), a);
        assert_eq!(format!("{}", mono(&[2, 0, 1])), "x1^2*x3");
    }
}
