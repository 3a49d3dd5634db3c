//! Factors monic in the distinguished last variable: monic lifting along a
//! descendant loose edge, Weierstrass normalization, division, and the
//! one-variable p-adic case.

use num_bigint::BigInt;
use thiserror::Error;

use crate::coeffs::{is_prime, CoeffError, RingDescriptor, Scalar};
use crate::completion::Completion;
use crate::grading::orthogonal_basis;
use crate::lift::{
    edge_prime_power_test, edge_restriction, from_line_form, lift_loop, validate_split,
    EdgeRestriction, LiftError, Lifted, PrimePower, SplitKind, SplitRequest, Truncation,
};
use crate::newton::{is_descendant_direction, Edge, NewtonError, NewtonPolyhedron};
use crate::par::Exec;
use crate::poly::{dot, ExponentVec, PolyError, SparsePoly, WeightedBound};
use crate::univariate::{factor, FactorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeierError {
    #[error("polynomial needs a distinguished last variable")]
    NoDistinguishedVariable,
    #[error("edge is not descendant")]
    NotDescendant,
    #[error("polynomial is not monic in the last variable")]
    NotMonic,
    #[error("series is not prepared in the last variable with degree {0}")]
    NotPrepared(i64),
    #[error("precision too low: product differs from the input")]
    PrecisionTooLow,
    #[error("invalid p-adic input: {0}")]
    InvalidPadic(String),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassInput {
    f: SparsePoly,
    degy: i64,
}

impl WeierstrassInput {
    pub fn new(f: SparsePoly) -> Result<Self, WeierError> {
        if f.nvars() == 0 {
            return Err(WeierError::NoDistinguishedVariable);
        }
        let degy = f
            .degree_in(f.nvars() - 1)
            .ok_or(NewtonError::ZeroPolynomial)?;
        Ok(WeierstrassInput { f, degy })
    }

    pub fn f(&self) -> &SparsePoly {
        &self.f
    }

    pub fn degy(&self) -> i64 {
        self.degy
    }
}

pub fn descendant_loose_edges(wi: &WeierstrassInput) -> Result<Vec<Edge>, WeierError> {
    descendant_edges_with(&wi.f, Exec::default())
}

fn descendant_edges_with(f: &SparsePoly, exec: Exec) -> Result<Vec<Edge>, WeierError> {
    let g = Completion::of(f.ring()).expand(f);
    let poly = NewtonPolyhedron::build_with(&g, exec)?;
    Ok(poly
        .compact_edges()
        .iter()
        .filter(|e| e.loose && e.descendant)
        .cloned()
        .collect())
}

/// `p = y^d + lower` with the `y^d` coefficient exactly the constant one.
pub fn is_monic_in_last(p: &SparsePoly) -> bool {
    let Some(y) = p.nvars().checked_sub(1) else {
        return false;
    };
    let Some(d) = p.degree_in(y) else {
        return false;
    };
    let top = p.coeff_of_power(y, d);
    top.len() == 1
        && top
            .first_term()
            .is_some_and(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
}

/// Lift a split whose first factor is monic in `y` along a descendant
/// loose edge.
pub fn lift_monic(
    wi: &WeierstrassInput,
    edge: &Edge,
    split: &SplitRequest,
    bound: i64,
) -> Result<Lifted, WeierError> {
    if !is_descendant_direction(&edge.direction) {
        return Err(WeierError::NotDescendant);
    }
    if !is_monic_in_last(&split.g) {
        return Err(WeierError::NotMonic);
    }
    let e = validate_split(&wi.f, edge, split, SplitKind::Monic)?;
    Ok(lift_loop(&wi.f, e, split, bound)?)
}

/// Weights that make `in(gbar) = v0 y^d + (linear in x)` for a prepared
/// `gbar`, in graded coordinates.
pub fn normalization_weights(graded_nvars: usize, d: i64) -> Vec<i64> {
    let mut w = vec![d.max(1); graded_nvars];
    w[graded_nvars - 1] = 1;
    w
}

fn min_weight_part(g: &SparsePoly, weights: &[i64]) -> Option<(i64, SparsePoly)> {
    let m = g.min_weight(weights)?;
    Some((m, g.part_of_weight(weights, m)))
}

/// Division by a polynomial monic in the last variable, exact in that
/// variable; the optional bound truncates every intermediate result.
fn ydivide(
    f: &SparsePoly,
    g: &SparsePoly,
    tr: Option<&Truncation>,
) -> Result<(SparsePoly, SparsePoly), PolyError> {
    let y = f.nvars() - 1;
    let d = g.degree_in(y).expect("nonzero divisor");
    let mut q = SparsePoly::zero(f.nvars(), f.ring());
    let mut r = match tr {
        Some(t) => t.trunc(f),
        None => f.clone(),
    };
    while let Some(k) = r.degree_in(y).filter(|&k| k >= d) {
        let mut shift = vec![0; f.nvars()];
        shift[y] = k - d;
        let lead = r.coeff_of_power(y, k).shift(&shift);
        let prod = match tr {
            Some(t) => t.mul(&lead, g)?,
            None => lead.multiply(g, None)?,
        };
        // Clear the top coefficient exactly so the loop always advances.
        let mut next = r.try_sub(&prod)?;
        next = next.filter(|e| e[y] != k);
        r = match tr {
            Some(t) => t.trunc(&next),
            None => next,
        };
        q = q.try_add(&lead)?;
    }
    Ok((q, r))
}

/// `f = q g + r` with `deg_y r < deg_y g`, truncated at the weighted bound
/// (graded coordinates).
pub fn poly_divide(
    f: &SparsePoly,
    g: &SparsePoly,
    bound: &WeightedBound,
) -> Result<(SparsePoly, SparsePoly), WeierError> {
    if !is_monic_in_last(g) {
        return Err(WeierError::NotMonic);
    }
    let tr = Truncation::new(Completion::of(f.ring()), bound.weights(), bound.bound())?;
    Ok(ydivide(f, g, Some(&tr))?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    /// The unit, truncated at `bound - weight(g)`.
    pub u: SparsePoly,
    /// The Weierstrass polynomial.
    pub g: SparsePoly,
}

/// Write a prepared `gbar` as `u g` with `g` a Weierstrass polynomial of
/// `y`-degree `d`, up to the weighted bound.
pub fn weierstrass_normalize(
    gbar: &SparsePoly,
    d: i64,
    bound: &WeightedBound,
) -> Result<Normalized, WeierError> {
    let comp = Completion::of(gbar.ring());
    let weights = bound.weights();
    let graded = comp.expand(gbar);
    let yv = graded
        .nvars()
        .checked_sub(1)
        .ok_or(WeierError::NoDistinguishedVariable)?;
    let pure_y = graded
        .terms()
        .filter(|(e, _)| e[..yv].iter().all(|&x| x == 0))
        .map(|(e, _)| e[yv])
        .min();
    if pure_y != Some(d) {
        return Err(WeierError::NotPrepared(d));
    }
    let (gw, init) = min_weight_part(&graded, weights).expect("nonzero");
    let mut top = vec![0; graded.nvars()];
    top[yv] = d;
    let v0 = init.coeff(&top);
    if v0.is_zero() {
        return Err(WeierError::NotPrepared(d));
    }
    let v0inv = v0.invert()?;
    let big_g = init.scale(&v0inv);
    if !is_monic_in_last(&big_g) || big_g.degree_in(yv) != Some(d) {
        return Err(WeierError::NotPrepared(d));
    }

    let tr = Truncation::new(comp, weights, bound.bound())?;
    let mut u = comp.lift(&SparsePoly::constant(graded.nvars(), v0.clone()));
    let mut g = comp.lift(&big_g);
    let mut last = gw;
    loop {
        let e = tr.trunc(&gbar.try_sub(&tr.mul(&u, &g)?)?);
        let Some((wt, part)) = min_weight_part(&comp.expand(&e), weights) else {
            break;
        };
        if wt <= last {
            return Err(LiftError::Stalled(vec![wt]).into());
        }
        let (q, r) = ydivide(&part, &big_g, None)?;
        u = u.try_add(&comp.lift(&q))?;
        g = g.try_add(&comp.lift(&r.scale(&v0inv)))?;
        last = wt;
    }
    Ok(Normalized {
        u: tr.with_bound(bound.bound() - gw).trunc(&u),
        g: tr.trunc(&g),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassFactors {
    /// Monic in `y`.
    pub g: SparsePoly,
    /// A polynomial in `y`.
    pub h: SparsePoly,
    pub u: SparsePoly,
    pub lifted: Lifted,
    pub bound: i64,
    /// Least `xi0`-weight of `f - g h`, `None` when it vanishes.
    pub exit_min_weight: Option<i64>,
}

impl WeierstrassFactors {
    pub fn verified(&self) -> bool {
        self.exit_min_weight.is_none_or(|w| w > self.bound)
    }
}

/// Monic lifting, Weierstrass normalization of the first factor and
/// division of `f` by it.
pub fn weierstrass_factor(
    wi: &WeierstrassInput,
    edge: &Edge,
    split: &SplitRequest,
    bound: i64,
) -> Result<WeierstrassFactors, WeierError> {
    let ws = orthogonal_basis(&edge.direction).map_err(LiftError::from)?;
    let xi0 = ws.xi0().to_vec();
    let (eg, _) = split.g.first_term().ok_or(WeierError::NotMonic)?;
    let gw = dot(&xi0, eg);
    let wide = bound + gw;
    let lifted = lift_monic(wi, edge, split, wide)?;
    let d = split.g.degree_in(split.g.nvars() - 1).expect("nonzero");
    let wb = WeightedBound::new(xi0.clone(), wide)?;
    let norm = weierstrass_normalize(&lifted.g, d, &wb)?;
    let (q, _) = poly_divide(&wi.f, &norm.g, &wb)?;
    let comp = Completion::of(wi.f.ring());
    let tr = Truncation::new(comp, &xi0, bound)?;
    let g = tr.trunc(&norm.g);
    let h = tr.trunc(&q);
    let exact = wi.f.try_sub(&g.multiply(&h, None)?)?;
    Ok(WeierstrassFactors {
        exit_min_weight: tr.min_weight(&exact),
        g,
        h,
        u: norm.u,
        lifted,
        bound,
    })
}

/// `sum a_j y^j` over `Z/p^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicPoly {
    coeffs: Vec<BigInt>,
    p: u32,
    k: u32,
}

impl PadicPoly {
    pub fn new(coeffs: Vec<BigInt>, p: u32, k: u32) -> Result<Self, WeierError> {
        if !is_prime(p as u64) {
            return Err(CoeffError::NotPrime(p as u64).into());
        }
        if k < 2 {
            return Err(WeierError::InvalidPadic(
                "precision must be at least 2".into(),
            ));
        }
        let pp = PadicPoly { coeffs, p, k };
        let f = pp.to_poly();
        let lead = f.last_term().map(|(_, c)| c.valuation());
        if lead != Some(Some(0)) {
            return Err(WeierError::InvalidPadic(
                "leading coefficient must be a unit".into(),
            ));
        }
        Ok(pp)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ring(&self) -> RingDescriptor {
        RingDescriptor::ResidueRing {
            p: self.p,
            k: self.k,
        }
    }

    pub fn to_poly(&self) -> SparsePoly {
        let ring = self.ring();
        let mut f = SparsePoly::zero(1, ring);
        for (j, a) in self.coeffs.iter().enumerate() {
            f.add_term(vec![j as i64], Scalar::from_int(ring, a.clone()));
        }
        f
    }

    /// `(v_p(a_j), j)` for the coefficients nonzero modulo `p^k`.
    pub fn polygon_points(&self) -> Vec<ExponentVec> {
        Completion::of(self.ring())
            .expand(&self.to_poly())
            .support()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PadicVerdict {
    Factors {
        unit: Scalar,
        factors: Vec<SparsePoly>,
        edge: Edge,
    },
    NoCoprimeSplit {
        edge: Edge,
        power: PrimePower,
    },
    NoLooseEdgeInfo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicReport {
    pub points: Vec<ExponentVec>,
    pub vertices: Vec<ExponentVec>,
    pub verdict: PadicVerdict,
}

/// The split `G * H = f|_E` with `G` the first irreducible group of the
/// edge polynomial, scaled monic in `y`. `None` when the restriction has a
/// single coprime part (a content monomial counts as a part).
pub fn monic_split(r: &EdgeRestriction, seed: u64) -> Result<Option<SplitRequest>, WeierError> {
    let fac = factor(&r.univariate, seed)?;
    let content = r.edge.floor().iter().any(|&x| x > 0);
    if fac.factors.len() + usize::from(content) < 2 {
        return Ok(None);
    }
    let c = &r.edge.direction;
    let (q, m) = &fac.factors[0];
    let qm = q.pow(*m);
    let deg = qm.degree().expect("nonconstant") as i64;
    let beta: Vec<i64> = c.iter().map(|&cj| deg * 0.max(-cj)).collect();
    let q0 = qm.coeff(0);
    let g = from_line_form(&beta, c, &qm.scale(&q0.invert()?))?;
    let rest = r.univariate.div_exact(&qm).scale(&q0);
    let anchor: Vec<i64> = r.content.iter().zip(&beta).map(|(a, b)| a - b).collect();
    let h = from_line_form(&anchor, c, &rest)?;
    Ok(Some(SplitRequest { g, h }))
}

/// Outcome of the search for a monic split along descendant loose edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonicSearch {
    Found(Edge, SplitRequest),
    PrimePower(Edge, PrimePower),
    NoDescendantEdge,
}

pub fn find_monic_split(f: &SparsePoly, seed: u64, exec: Exec) -> Result<MonicSearch, WeierError> {
    let mut power = None;
    for e in descendant_edges_with(f, exec)? {
        let r = edge_restriction(f, &e)?;
        if let Some(split) = monic_split(&r, seed)? {
            return Ok(MonicSearch::Found(e, split));
        }
        if power.is_none() {
            if let Some(pw) = edge_prime_power_test(&r, seed)? {
                power = Some((e, pw));
            }
        }
    }
    Ok(match power {
        Some((e, pw)) => MonicSearch::PrimePower(e, pw),
        None => MonicSearch::NoDescendantEdge,
    })
}

enum Split {
    Done(Edge, SparsePoly, SparsePoly),
    PrimePower(Edge, PrimePower),
    NoEdge,
}

/// One coprime split of a monic `f` along its first splittable descendant
/// edge, exact modulo `p^k`.
fn split_once(f: &SparsePoly, k: u32, seed: u64) -> Result<Split, WeierError> {
    Ok(match find_monic_split(f, seed, Exec::Sequential)? {
        MonicSearch::Found(e, split) => {
            let xi0 = orthogonal_basis(&e.direction)
                .map_err(LiftError::from)?
                .xi0()
                .to_vec();
            let degf = f.degree_in(0).expect("nonzero");
            let bound = xi0[0] * (k as i64 - 1) + xi0[1] * degf;
            let wi = WeierstrassInput::new(f.clone())?;
            let out = weierstrass_factor(&wi, &e, &split, bound)?;
            Split::Done(e, out.g, out.h)
        }
        MonicSearch::PrimePower(e, pw) => Split::PrimePower(e, pw),
        MonicSearch::NoDescendantEdge => Split::NoEdge,
    })
}

fn split_all(
    f: SparsePoly,
    k: u32,
    seed: u64,
    out: &mut Vec<SparsePoly>,
) -> Result<(), WeierError> {
    match split_once(&f, k, seed)? {
        Split::Done(_, g, h) => {
            split_all(g, k, seed, out)?;
            split_all(h, k, seed, out)
        }
        _ => {
            out.push(f);
            Ok(())
        }
    }
}

/// Split a one-variable polynomial over `Z/p^k` along its Newton polygon.
pub fn padic_newton_factor(pp: &PadicPoly, seed: u64) -> Result<PadicReport, WeierError> {
    let f = pp.to_poly();
    let points = pp.polygon_points();
    let poly =
        NewtonPolyhedron::build_with(&Completion::of(pp.ring()).expand(&f), Exec::Sequential)?;
    let vertices = poly.vertices().to_vec();
    let (_, lc) = f.last_term().expect("nonzero");
    let unit = lc.clone();
    let monic = f.scale(&unit.invert()?);
    let verdict = match split_once(&monic, pp.k, seed)? {
        Split::NoEdge => PadicVerdict::NoLooseEdgeInfo,
        Split::PrimePower(edge, power) => PadicVerdict::NoCoprimeSplit { edge, power },
        Split::Done(edge, g, h) => {
            let mut factors = Vec::new();
            split_all(g, pp.k, seed, &mut factors)?;
            split_all(h, pp.k, seed, &mut factors)?;
            let prod = factors
                .iter()
                .try_fold(SparsePoly::constant(1, unit.clone()), |acc, g| {
                    acc.multiply(g, None)
                })?;
            if prod != f {
                return Err(WeierError::PrecisionTooLow);
            }
            PadicVerdict::Factors {
                unit,
                factors,
                edge,
            }
        }
    };
    Ok(PadicReport {
        points,
        vertices,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: RingDescriptor = RingDescriptor::Rationals;

    fn poly(n: usize, terms: &[(&[i64], i64)]) -> SparsePoly {
        SparsePoly::from_int_terms(n, Q, terms).unwrap()
    }

    #[test]
    fn normalize_geometric_series() {
        // (1 + x) y - x = (1 + x)(y - x/(1 + x))
        let gbar = poly(2, &[(&[0, 1], 1), (&[1, 1], 1), (&[1, 0], -1)]);
        let wb = WeightedBound::new(normalization_weights(2, 1), 12).unwrap();
        let out = weierstrass_normalize(&gbar, 1, &wb).unwrap();
        let mut expect = vec![(vec![0, 1], 1)];
        for j in 1..=12 {
            expect.push((vec![j, 0], if j % 2 == 1 { -1 } else { 1 }));
        }
        let expect = SparsePoly::from_terms(
            2,
            Q,
            expect.into_iter().map(|(e, c)| (e, Scalar::from_int(Q, c))),
        )
        .unwrap();
        assert_eq!(out.g, expect);
        assert_eq!(out.u, poly(2, &[(&[0, 0], 1), (&[1, 0], 1)]));
    }

    #[test]
    fn already_weierstrass() {
        let g = poly(2, &[(&[0, 2], 1), (&[1, 0], 1)]);
        let wb = WeightedBound::new(normalization_weights(2, 2), 20).unwrap();
        let out = weierstrass_normalize(&g, 2, &wb).unwrap();
        assert_eq!(out.g, g);
        assert_eq!(out.u, poly(2, &[(&[0, 0], 1)]));
        assert_eq!(
            weierstrass_normalize(&g, 1, &wb),
            Err(WeierError::NotPrepared(1))
        );
    }

    #[test]
    fn divide_by_itself() {
        let g = poly(2, &[(&[0, 2], 1), (&[1, 0], 1)]);
        let wb = WeightedBound::new(vec![1, 1], 20).unwrap();
        let (q, r) = poly_divide(&g, &g, &wb).unwrap();
        assert_eq!(q, poly(2, &[(&[0, 0], 1)]));
        assert!(r.is_zero());
        let two_g = g.scale(&Scalar::from_int(Q, 2));
        assert_eq!(poly_divide(&g, &two_g, &wb), Err(WeierError::NotMonic));
    }

    #[test]
    fn padic_example_mod_powers_of_two() {
        let pp = PadicPoly::new(vec![540.into(), 270.into(), 0.into(), 1.into()], 2, 32).unwrap();
        let rep = padic_newton_factor(&pp, 0).unwrap();
        assert_eq!(rep.vertices, vec![vec![0, 3], vec![1, 1], vec![2, 0]]);
        match rep.verdict {
            PadicVerdict::Factors { factors, .. } => {
                assert_eq!(factors.len(), 2);
                let degs: Vec<i64> = factors.iter().map(|f| f.degree_in(0).unwrap()).collect();
                assert_eq!(degs, vec![2, 1]);
            }
            v => panic!("unexpected {v:?}"),
        }
    }
}
