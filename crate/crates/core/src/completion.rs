//! The coefficient rings seen as complete local rings.
//!
//! For `Q` and `F_p` the graded ring is the polynomial ring itself. For
//! `Z/p^k` the prime is an extra graded variable `P` placed first: a term
//! `p^v u x^a` with `u` a unit has initial form `u mod p * P^v X^a`, and a
//! residue-field term `l P^v X^a` lifts to `[l] p^v x^a` with the canonical
//! representative `[l]` in `[0, p)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Pow;

use crate::coeffs::{RingDescriptor, Scalar};
use crate::grading::WeightSystem;
use crate::poly::{deglex_cmp, dot, SparsePoly, WeightedBound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Completion {
    Field(RingDescriptor),
    Mixed { p: u32, k: u32 },
}

impl Completion {
    pub fn of(ring: RingDescriptor) -> Self {
        match ring {
            RingDescriptor::ResidueRing { p, k } => Completion::Mixed { p, k },
            r => Completion::Field(r),
        }
    }

    pub fn ring(&self) -> RingDescriptor {
        match *self {
            Completion::Field(r) => r,
            Completion::Mixed { p, k } => RingDescriptor::ResidueRing { p, k },
        }
    }

    pub fn residue(&self) -> RingDescriptor {
        self.ring().residue_field()
    }

    pub fn is_mixed(&self) -> bool {
        matches!(self, Completion::Mixed { .. })
    }

    /// Number of graded coordinates for `n` ring variables.
    pub fn graded_nvars(&self, n: usize) -> usize {
        n + self.is_mixed() as usize
    }

    /// Term-by-term initial forms in graded coordinates over the residue field.
    pub fn expand(&self, f: &SparsePoly) -> SparsePoly {
        match *self {
            Completion::Field(_) => f.clone(),
            Completion::Mixed { p, .. } => {
                let fp = RingDescriptor::PrimeField(p);
                let pb = BigInt::from(p);
                let mut out = SparsePoly::zero(f.nvars() + 1, fp);
                for (e, c) in f.terms() {
                    let v = c.valuation().expect("nonzero residue");
                    let unit = c.as_residue().expect("residue") / Pow::pow(&pb, v);
                    let mut g = Vec::with_capacity(e.len() + 1);
                    g.push(v as i64);
                    g.extend_from_slice(e);
                    out.add_term(g, Scalar::from_int(fp, unit));
                }
                out
            }
        }
    }

    /// Representative lift of a graded residue-field polynomial.
    pub fn lift(&self, g: &SparsePoly) -> SparsePoly {
        match *self {
            Completion::Field(_) => g.clone(),
            Completion::Mixed { p, k } => {
                let ring = self.ring();
                let mut out = SparsePoly::zero(g.nvars() - 1, ring);
                for (e, c) in g.terms() {
                    let v = e[0];
                    assert!(v >= 0, "negative power of p");
                    if v >= k as i64 {
                        continue;
                    }
                    let rep = c.as_residue().expect("residue").clone()
                        * Pow::pow(&BigInt::from(p), v as u32);
                    out.add_term(e[1..].to_vec(), Scalar::from_int(ring, rep));
                }
                out
            }
        }
    }

    /// Weight of the term `c x^a` in graded coordinates.
    fn term_weight(&self, weights: &[i64], e: &[i64], c: &Scalar) -> i64 {
        match self {
            Completion::Field(_) => dot(weights, e),
            Completion::Mixed { .. } => {
                weights[0] * c.valuation().expect("nonzero") as i64 + dot(&weights[1..], e)
            }
        }
    }

    /// Reduce modulo the ideal of graded weight above the bound. The bound's
    /// weights are in graded coordinates.
    pub fn truncate(&self, f: &SparsePoly, bound: &WeightedBound) -> SparsePoly {
        match *self {
            Completion::Field(_) => f.weighted_truncate(bound),
            Completion::Mixed { p, k } => {
                let w = bound.weights();
                let n = bound.bound();
                let ring = self.ring();
                let mut out = SparsePoly::zero(f.nvars(), ring);
                for (e, c) in f.terms() {
                    let base = dot(&w[1..], e);
                    if base > n {
                        continue;
                    }
                    let t = (n - base) / w[0] + 1;
                    if t >= k as i64 {
                        out.add_term(e.to_vec(), c.clone());
                    } else {
                        let m = Pow::pow(&BigInt::from(p), t as u32);
                        out.add_term(
                            e.to_vec(),
                            Scalar::from_int(ring, c.as_residue().expect("residue") % m),
                        );
                    }
                }
                out
            }
        }
    }

    /// Smallest graded weight of a term of `f`.
    pub fn min_weight(&self, f: &SparsePoly, weights: &[i64]) -> Option<i64> {
        f.terms()
            .map(|(e, c)| self.term_weight(weights, e, c))
            .min()
    }

    /// The homogeneous part of least weight for a weight system on graded
    /// coordinates, with weights ordered by total first.
    pub fn initial_part(
        &self,
        f: &SparsePoly,
        ws: &WeightSystem,
    ) -> Option<(Vec<i64>, SparsePoly)> {
        let g = self.expand(f);
        let mut best: Option<Vec<i64>> = None;
        for (e, _) in g.terms() {
            let w = ws.weight(e);
            if best
                .as_ref()
                .is_none_or(|b| deglex_cmp(&w, b) == Ordering::Less)
            {
                best = Some(w);
            }
        }
        let best = best?;
        let part = g.filter(|e| ws.weight(e) == best);
        Some((best, part))
    }
}
