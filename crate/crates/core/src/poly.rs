//! Sparse multivariate polynomials and weighted truncation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::coeffs::{RingDescriptor, Scalar};
use crate::par::Exec;

/// An exponent vector. Entries are nonnegative for polynomial support and
/// may be negative for lattice directions and Laurent intermediates.
pub type ExponentVec = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingDescriptor, RingDescriptor),
    #[error("variable count mismatch: expected {expected}, found {found}")]
    NvarsMismatch { expected: usize, found: usize },
    #[error("negative exponent in polynomial support")]
    NegativeExponent,
    #[error("weights must be strictly positive")]
    NonPositiveWeight,
}

/// Degree-lexicographic comparison: total degree first, then the larger
/// exponent in the earliest differing variable comes first.
pub fn deglex_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let sa: i64 = a.iter().sum();
    let sb: i64 = b.iter().sum();
    sa.cmp(&sb).then_with(|| b.cmp(a))
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Key(Vec<i64>);

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        deglex_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Strictly positive weights `xi0` together with a bound `N`; a term `x^a`
/// survives truncation iff `<xi0, a> <= N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedBound {
    weights: Vec<i64>,
    bound: i64,
}

impl WeightedBound {
    pub fn new(weights: Vec<i64>, bound: i64) -> Result<Self, PolyError> {
        if weights.iter().any(|&w| w <= 0) {
            return Err(PolyError::NonPositiveWeight);
        }
        Ok(WeightedBound { weights, bound })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn weight(&self, alpha: &[i64]) -> i64 {
        dot(&self.weights, alpha)
    }

    pub fn keeps(&self, alpha: &[i64]) -> bool {
        self.weight(alpha) <= self.bound
    }

    pub fn with_bound(&self, bound: i64) -> WeightedBound {
        WeightedBound {
            weights: self.weights.clone(),
            bound,
        }
    }
}

/// A finitely supported map from exponent vectors to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    ring: RingDescriptor,
    terms: BTreeMap<Key, Scalar>,
}

impl SparsePoly {
    pub fn zero(nvars: usize, ring: RingDescriptor) -> Self {
        SparsePoly {
            nvars,
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        SparsePoly::monomial(c, vec![0; nvars])
    }

    pub fn one(nvars: usize, ring: RingDescriptor) -> Self {
        SparsePoly::constant(nvars, Scalar::one(ring))
    }

    pub fn monomial(c: Scalar, exp: ExponentVec) -> Self {
        let mut p = SparsePoly::zero(exp.len(), c.ring());
        p.add_term(exp, c);
        p
    }

    pub fn var(nvars: usize, ring: RingDescriptor, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        SparsePoly::monomial(Scalar::one(ring), e)
    }

    /// Collects terms, summing repeated exponents. Rejects negative exponents.
    pub fn from_terms<I>(nvars: usize, ring: RingDescriptor, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (ExponentVec, Scalar)>,
    {
        let p = SparsePoly::from_laurent_terms(nvars, ring, terms)?;
        if p.is_laurent() {
            return Err(PolyError::NegativeExponent);
        }
        Ok(p)
    }

    pub fn from_laurent_terms<I>(
        nvars: usize,
        ring: RingDescriptor,
        terms: I,
    ) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (ExponentVec, Scalar)>,
    {
        let mut p = SparsePoly::zero(nvars, ring);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolyError::NvarsMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            if c.ring() != ring {
                return Err(PolyError::RingMismatch(ring, c.ring()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Integer coefficients, convenient for fixtures.
    pub fn from_int_terms(
        nvars: usize,
        ring: RingDescriptor,
        terms: &[(&[i64], i64)],
    ) -> Result<Self, PolyError> {
        SparsePoly::from_terms(
            nvars,
            ring,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), Scalar::from_int(ring, *c))),
        )
    }

    pub fn add_term(&mut self, exp: ExponentVec, c: Scalar) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let key = Key(exp);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
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

    /// Terms in ascending degree-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[i64], &Scalar)> + '_ {
        self.terms.iter().map(|(k, v)| (k.0.as_slice(), v))
    }

    pub fn support(&self) -> Vec<ExponentVec> {
        self.terms.keys().map(|k| k.0.clone()).collect()
    }

    pub fn coeff(&self, exp: &[i64]) -> Scalar {
        self.terms
            .get(&Key(exp.to_vec()))
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.ring))
    }

    pub fn is_laurent(&self) -> bool {
        self.terms.keys().any(|k| k.0.iter().any(|&e| e < 0))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn check(&self, other: &SparsePoly) -> Result<(), PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch(self.ring, other.ring));
        }
        if self.nvars != other.nvars {
            return Err(PolyError::NvarsMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.to_vec(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.to_vec(), -c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars, self.ring);
        for (e, v) in self.terms() {
            out.add_term(e.to_vec(), v * c);
        }
        out
    }

    /// Multiply by `x^e`; the result may be Laurent.
    pub fn shift(&self, e: &[i64]) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars, self.ring);
        for (a, v) in self.terms() {
            out.terms.insert(
                Key(a.iter().zip(e).map(|(x, y)| x + y).collect()),
                v.clone(),
            );
        }
        out
    }

    /// Exact product, optionally dropping terms above a weighted bound.
    pub fn multiply(
        &self,
        other: &SparsePoly,
        trunc: Option<&WeightedBound>,
    ) -> Result<SparsePoly, PolyError> {
        self.multiply_with(other, trunc, Exec::default())
    }

    pub fn multiply_with(
        &self,
        other: &SparsePoly,
        trunc: Option<&WeightedBound>,
        exec: Exec,
    ) -> Result<SparsePoly, PolyError> {
        self.check(other)?;
        if let Some(t) = trunc {
            if t.weights.len() != self.nvars {
                return Err(PolyError::NvarsMismatch {
                    expected: self.nvars,
                    found: t.weights.len(),
                });
            }
        }
        let weigh = |e: &[i64]| trunc.map_or(0, |t| t.weight(e));
        let a: Vec<(&[i64], &Scalar, i64)> = self.terms().map(|(e, c)| (e, c, weigh(e))).collect();
        let mut b: Vec<(&[i64], &Scalar, i64)> =
            other.terms().map(|(e, c)| (e, c, weigh(e))).collect();
        b.sort_by_key(|t| t.2);
        let limit = trunc.map(|t| t.bound);

        let partial = |chunk: &[(&[i64], &Scalar, i64)]| {
            let mut acc: HashMap<Vec<i64>, Scalar> = HashMap::new();
            for (ea, ca, wa) in chunk {
                for (eb, cb, wb) in &b {
                    if let Some(n) = limit {
                        if wa + wb > n {
                            break;
                        }
                    }
                    let e: Vec<i64> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                    let prod = *ca * *cb;
                    match acc.get_mut(&e) {
                        Some(v) => *v += &prod,
                        None => {
                            acc.insert(e, prod);
                        }
                    }
                }
            }
            acc
        };

        let work = a.len() * b.len();
        let maps: Vec<HashMap<Vec<i64>, Scalar>> = if exec.is_parallel() && work >= 4096 {
            let chunk = (a.len() / 32).max(1);
            let chunks: Vec<&[(&[i64], &Scalar, i64)]> = a.chunks(chunk).collect();
            exec.map(&chunks, |c| partial(c))
        } else {
            vec![partial(&a)]
        };

        let mut out = SparsePoly::zero(self.nvars, self.ring);
        for m in maps {
            for (e, c) in m {
                out.add_term(e, c);
            }
        }
        Ok(out)
    }

    /// Keep exactly the terms with `<xi0, a> <= N`.
    pub fn weighted_truncate(&self, trunc: &WeightedBound) -> SparsePoly {
        self.filter(|e| trunc.keeps(e))
    }

    pub fn filter(&self, keep: impl Fn(&[i64]) -> bool) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(&k.0))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Apply a coefficient map into another ring (zero images are dropped).
    pub fn map_coeffs(&self, ring: RingDescriptor, f: impl Fn(&Scalar) -> Scalar) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars, ring);
        for (e, c) in self.terms() {
            out.add_term(e.to_vec(), f(c));
        }
        out
    }

    pub fn to_residue_field(&self) -> SparsePoly {
        self.map_coeffs(self.ring.residue_field(), |c| c.to_residue_field())
    }

    pub fn min_weight(&self, weights: &[i64]) -> Option<i64> {
        self.terms().map(|(e, _)| dot(weights, e)).min()
    }

    pub fn max_weight(&self, weights: &[i64]) -> Option<i64> {
        self.terms().map(|(e, _)| dot(weights, e)).max()
    }

    /// The terms of `<weights, a> = value`.
    pub fn part_of_weight(&self, weights: &[i64], value: i64) -> SparsePoly {
        self.filter(|e| dot(weights, e) == value)
    }

    /// Componentwise minimum of the support.
    pub fn monomial_gcd(&self) -> Option<ExponentVec> {
        let mut it = self.terms.keys();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, k| {
            acc.iter().zip(&k.0).map(|(a, b)| *a.min(b)).collect()
        }))
    }

    pub fn degree_in(&self, var: usize) -> Option<i64> {
        self.terms().map(|(e, _)| e[var]).max()
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms().map(|(e, _)| e.iter().sum()).max()
    }

    /// Coefficient of `var^d`, as a polynomial with that variable's exponent
    /// set to zero.
    pub fn coeff_of_power(&self, var: usize, d: i64) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars, self.ring);
        for (e, c) in self.terms() {
            if e[var] == d {
                let mut e = e.to_vec();
                e[var] = 0;
                out.add_term(e, c.clone());
            }
        }
        out
    }

    /// Lowest and highest terms in degree-lexicographic order.
    pub fn first_term(&self) -> Option<(&[i64], &Scalar)> {
        self.terms().next()
    }

    pub fn last_term(&self) -> Option<(&[i64], &Scalar)> {
        self.terms().next_back()
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(e, c)| format!("{c}*{e:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> Add<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_add(rhs).expect("incompatible polynomials")
    }
}

impl<'a> Sub<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self.try_sub(rhs).expect("incompatible polynomials")
    }
}

impl<'a> Mul<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.multiply(rhs, None).expect("incompatible polynomials")
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.map_coeffs(self.ring, |c| -c)
    }
}
