//! Restriction to faces, the graded cofactor solver and the lifting loop
//! that turns a coprime split of an edge polynomial into a factorization in
//! the completion.
//!
//! Everything graded lives in the graded coordinates of [`Completion`]: the
//! ring variables, preceded by `P` when the coefficients are `Z/p^k`.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::coeffs::Scalar;
use crate::completion::Completion;
use crate::grading::{orthogonal_basis, GradingError, WeightSystem};
use crate::newton::{Edge, NewtonError, NewtonPolyhedron};
use crate::par::Exec;
use crate::poly::{deglex_cmp, ExponentVec, PolyError, SparsePoly, WeightedBound};
use crate::univariate::{factor, FactorError, UniPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitDefect {
    NotCoprime,
    DivisibleByVariable,
    ProductMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("empty face")]
    EmptyFace,
    #[error("polynomial is not supported on a line parallel to the edge")]
    NotEdgeHomogeneous,
    #[error("polynomial is not homogeneous for the edge grading")]
    NotHomogeneous,
    #[error("edge is not loose")]
    NotLoose,
    #[error("invalid split: {0:?}")]
    InvalidSplit(SplitDefect),
    #[error("cofactor system unsolvable at weight {0:?}")]
    Unsolvable(Vec<i64>),
    #[error("residual weight did not increase past {0:?}")]
    Stalled(Vec<i64>),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// Write an edge-homogeneous polynomial as `x^anchor * p(x^c)` with
/// `p(0) != 0`.
pub fn line_form(poly: &SparsePoly, c: &[i64]) -> Result<(ExponentVec, UniPoly), LiftError> {
    let (base, _) = poly.first_term().ok_or(LiftError::NotEdgeHomogeneous)?;
    let base = base.to_vec();
    let i = c
        .iter()
        .position(|&x| x != 0)
        .ok_or(LiftError::NotEdgeHomogeneous)?;
    let mut steps = Vec::with_capacity(poly.len());
    for (e, coef) in poly.terms() {
        let d: Vec<i64> = e.iter().zip(&base).map(|(x, y)| x - y).collect();
        if d[i] % c[i] != 0 {
            return Err(LiftError::NotEdgeHomogeneous);
        }
        let t = d[i] / c[i];
        if d.iter().zip(c).any(|(x, cj)| *x != t * cj) {
            return Err(LiftError::NotEdgeHomogeneous);
        }
        steps.push((t, coef.clone()));
    }
    let tmin = steps.iter().map(|s| s.0).min().expect("nonempty");
    let tmax = steps.iter().map(|s| s.0).max().expect("nonempty");
    let ring = poly.ring();
    let mut coeffs = vec![Scalar::zero(ring); (tmax - tmin + 1) as usize];
    for (t, v) in steps {
        coeffs[(t - tmin) as usize] = v;
    }
    let anchor = base.iter().zip(c).map(|(b, cj)| b + tmin * cj).collect();
    Ok((anchor, UniPoly::new(ring, coeffs)))
}

/// Inverse of [`line_form`].
pub fn from_line_form(anchor: &[i64], c: &[i64], p: &UniPoly) -> Result<SparsePoly, PolyError> {
    SparsePoly::from_terms(
        anchor.len(),
        p.ring(),
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(t, v)| {
                let e = anchor
                    .iter()
                    .zip(c)
                    .map(|(a, cj)| a + t as i64 * cj)
                    .collect();
                (e, v.clone())
            }),
    )
}

/// Terms of `f` on the given face points, as a graded polynomial over the
/// residue field.
pub fn restrict(f: &SparsePoly, face: &[ExponentVec]) -> Result<SparsePoly, LiftError> {
    if face.is_empty() {
        return Err(LiftError::EmptyFace);
    }
    let g = Completion::of(f.ring()).expand(f);
    Ok(g.filter(|e| face.iter().any(|p| p.as_slice() == e)))
}

pub fn restrict_to_edge(f: &SparsePoly, edge: &Edge) -> SparsePoly {
    Completion::of(f.ring())
        .expand(f)
        .filter(|e| edge.contains(e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRestriction {
    pub poly: SparsePoly,
    pub edge: Edge,
    pub ws: WeightSystem,
    pub content: ExponentVec,
    pub univariate: UniPoly,
}

pub fn edge_restriction(f: &SparsePoly, edge: &Edge) -> Result<EdgeRestriction, LiftError> {
    let poly = restrict_to_edge(f, edge);
    let ws = orthogonal_basis(&edge.direction)?;
    let (content, univariate) = line_form(&poly, &edge.direction)?;
    Ok(EdgeRestriction {
        poly,
        edge: edge.clone(),
        ws,
        content,
        univariate,
    })
}

/// The monomial at the `a` end and the polynomial in `t = x^c`.
pub fn edge_univariate(r: &EdgeRestriction) -> (ExponentVec, UniPoly) {
    (r.content.clone(), r.univariate.clone())
}

/// Coprimality of two polynomials supported on lines parallel to `c`.
pub fn coprime_check(g: &SparsePoly, h: &SparsePoly, c: &[i64]) -> Result<bool, LiftError> {
    let (_, pg) = line_form(g, c)?;
    let (_, ph) = line_form(h, c)?;
    let mg = g.monomial_gcd().expect("nonzero");
    let mh = h.monomial_gcd().expect("nonzero");
    if mg.iter().zip(&mh).any(|(a, b)| *a > 0 && *b > 0) {
        return Ok(false);
    }
    Ok(pg.gcd(&ph).is_one())
}

pub fn factor_edge_univariate(
    p: &UniPoly,
    seed: u64,
) -> Result<crate::univariate::Factorization, FactorError> {
    factor(p, seed)
}

/// A coprime split `G * H = f|_E`, in graded coordinates over the residue
/// field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitRequest {
    pub g: SparsePoly,
    pub h: SparsePoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CofactorSolution {
    /// Cofactor of `G`.
    pub h: SparsePoly,
    /// Cofactor of `H`.
    pub g: SparsePoly,
    pub rows: usize,
    pub h_cols: usize,
    pub g_cols: usize,
}

fn homogeneous_weight(p: &SparsePoly, ws: &WeightSystem) -> Result<Vec<i64>, LiftError> {
    let mut it = p.terms();
    let (e, _) = it.next().ok_or(LiftError::NotHomogeneous)?;
    let w = ws.weight(e);
    if it.any(|(e, _)| ws.weight(e) != w) {
        return Err(LiftError::NotHomogeneous);
    }
    Ok(w)
}

fn sub_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Solve `G h' + H g' = r` inside the graded pieces of weights
/// `w(r) - w(G)` and `w(r) - w(H)`.
pub fn solve_cofactor(
    g: &SparsePoly,
    h: &SparsePoly,
    r: &SparsePoly,
    ws: &WeightSystem,
) -> Result<CofactorSolution, LiftError> {
    let (n, ring) = (g.nvars(), g.ring());
    if r.is_zero() {
        return Ok(CofactorSolution {
            h: SparsePoly::zero(n, ring),
            g: SparsePoly::zero(n, ring),
            rows: 0,
            h_cols: 0,
            g_cols: 0,
        });
    }
    let wg = homogeneous_weight(g, ws)?;
    let wh = homogeneous_weight(h, ws)?;
    let wr = homogeneous_weight(r, ws)?;
    let er = r.first_term().expect("nonzero").0.to_vec();
    let eg = g.first_term().expect("nonzero").0.to_vec();
    let eh = h.first_term().expect("nonzero").0.to_vec();

    let sorted = |mut v: Vec<ExponentVec>| {
        v.sort_by(|a, b| deglex_cmp(a, b));
        v
    };
    let hpts = sorted(
        ws.slice(&sub_vec(&wr, &wg), Some(&sub_vec(&er, &eg)))?
            .points,
    );
    let gpts = sorted(
        ws.slice(&sub_vec(&wr, &wh), Some(&sub_vec(&er, &eh)))?
            .points,
    );
    let rpts = sorted(ws.slice(&wr, Some(&er))?.points);
    let row_of: HashMap<&[i64], usize> = rpts
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();

    let ncols = hpts.len() + gpts.len();
    let m = rpts.len();
    let zero = Scalar::zero(ring);
    let mut a = vec![vec![zero.clone(); ncols + 1]; m];
    let columns = hpts
        .iter()
        .map(|p| (p, g))
        .chain(gpts.iter().map(|p| (p, h)));
    for (j, (shift, factor)) in columns.enumerate() {
        for (e, c) in factor.terms() {
            let row = row_of
                .get(add_vec(e, shift).as_slice())
                .copied()
                .ok_or_else(|| LiftError::Unsolvable(wr.clone()))?;
            a[row][j] += c;
        }
    }
    for (e, c) in r.terms() {
        let row = row_of
            .get(e)
            .copied()
            .ok_or_else(|| LiftError::Unsolvable(wr.clone()))?;
        a[row][ncols] = c.clone();
    }

    // Gauss-Jordan with the first usable pivot in column order.
    let mut pivots = Vec::new();
    let mut cur = 0;
    for col in 0..ncols {
        let Some(p) = (cur..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(cur, p);
        let inv = a[cur][col]
            .invert()
            .map_err(|_| LiftError::Unsolvable(wr.clone()))?;
        for v in a[cur].iter_mut() {
            *v = &*v * &inv;
        }
        let prow = a[cur].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == cur || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &(&f * pv);
                }
            }
        }
        pivots.push(col);
        cur += 1;
        if cur == m {
            break;
        }
    }
    if a[cur..].iter().any(|row| !row[ncols].is_zero()) {
        return Err(LiftError::Unsolvable(wr));
    }
    let mut hs = SparsePoly::zero(n, ring);
    let mut gs = SparsePoly::zero(n, ring);
    for (i, &col) in pivots.iter().enumerate() {
        let v = a[i][ncols].clone();
        if col < hpts.len() {
            hs.add_term(hpts[col].clone(), v);
        } else {
            gs.add_term(gpts[col - hpts.len()].clone(), v);
        }
    }
    let check = g.multiply(&hs, None)?.try_add(&h.multiply(&gs, None)?)?;
    if &check != r {
        return Err(LiftError::Unsolvable(wr));
    }
    Ok(CofactorSolution {
        h: hs,
        g: gs,
        rows: m,
        h_cols: hpts.len(),
        g_cols: gpts.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftStep {
    /// The weight `w + z + i` that was cleared.
    pub weight: Vec<i64>,
    /// The offset `i`.
    pub offset: Vec<i64>,
    pub rows: usize,
    pub h_cols: usize,
    pub g_cols: usize,
    /// Smallest `xi0`-weight of the residual before and after the step.
    pub before: i64,
    pub after: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub bound: i64,
    pub working_bound: i64,
    pub steps: Vec<LiftStep>,
    /// Smallest `xi0`-weight of `f - g h` for the returned factors, `None`
    /// when the difference vanishes.
    pub exit_min_weight: Option<i64>,
}

impl Certificate {
    pub fn verified(&self) -> bool {
        self.exit_min_weight.is_none_or(|w| w > self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifted {
    pub g: SparsePoly,
    pub h: SparsePoly,
    pub edge: Edge,
    pub ws: WeightSystem,
    pub certificate: Certificate,
}

/// Truncated arithmetic for one weight system.
pub(crate) struct Truncation {
    pub comp: Completion,
    pub graded: WeightedBound,
    ring_bound: WeightedBound,
}

impl Truncation {
    pub(crate) fn new(
        comp: Completion,
        graded_weights: &[i64],
        bound: i64,
    ) -> Result<Self, PolyError> {
        let ring_w = if comp.is_mixed() {
            &graded_weights[1..]
        } else {
            graded_weights
        };
        Ok(Truncation {
            comp,
            graded: WeightedBound::new(graded_weights.to_vec(), bound)?,
            ring_bound: WeightedBound::new(ring_w.to_vec(), bound)?,
        })
    }

    pub(crate) fn trunc(&self, f: &SparsePoly) -> SparsePoly {
        self.comp.truncate(f, &self.graded)
    }

    pub(crate) fn mul(&self, a: &SparsePoly, b: &SparsePoly) -> Result<SparsePoly, PolyError> {
        Ok(self.trunc(&a.multiply_with(b, Some(&self.ring_bound), Exec::Sequential)?))
    }

    pub(crate) fn with_bound(&self, bound: i64) -> Self {
        Truncation {
            comp: self.comp,
            graded: self.graded.with_bound(bound),
            ring_bound: self.ring_bound.with_bound(bound),
        }
    }

    pub(crate) fn min_weight(&self, f: &SparsePoly) -> Option<i64> {
        self.comp.min_weight(f, self.graded.weights())
    }
}

/// Which hypothesis certifies the cofactor solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SplitKind {
    /// `G` not divisible by any variable.
    General,
    /// `G` monic in the last variable.
    Monic,
}

pub(crate) fn validate_split(
    f: &SparsePoly,
    edge: &Edge,
    split: &SplitRequest,
    kind: SplitKind,
) -> Result<Edge, LiftError> {
    let comp = Completion::of(f.ring());
    let poly = NewtonPolyhedron::build_with(&comp.expand(f), Exec::Sequential)?;
    let e = poly
        .find_edge(&edge.a, &edge.b)
        .ok_or_else(|| NewtonError::NotAnEdge(edge.a.clone(), edge.b.clone()))?
        .clone();
    if !e.loose {
        return Err(LiftError::NotLoose);
    }
    let restriction = restrict_to_edge(f, &e);
    if split.g.is_zero() || split.h.is_zero() || split.g.multiply(&split.h, None)? != restriction {
        return Err(LiftError::InvalidSplit(SplitDefect::ProductMismatch));
    }
    if kind == SplitKind::General
        && split
            .g
            .monomial_gcd()
            .expect("nonzero")
            .iter()
            .any(|&x| x > 0)
    {
        return Err(LiftError::InvalidSplit(SplitDefect::DivisibleByVariable));
    }
    if !coprime_check(&split.g, &split.h, &e.direction)? {
        return Err(LiftError::InvalidSplit(SplitDefect::NotCoprime));
    }
    Ok(e)
}

/// The lifting loop proper; the split has been validated.
pub(crate) fn lift_loop(
    f: &SparsePoly,
    edge: Edge,
    split: &SplitRequest,
    bound: i64,
) -> Result<Lifted, LiftError> {
    let comp = Completion::of(f.ring());
    let ws = orthogonal_basis(&edge.direction)?;
    let xi0 = ws.xi0().to_vec();
    let w = homogeneous_weight(&split.g, &ws)?;
    let z = homogeneous_weight(&split.h, &ws)?;
    let wz = add_vec(&w, &z);
    let wsum: i64 = w.iter().sum();
    let zsum: i64 = z.iter().sum();
    let working = bound + wsum.max(zsum);
    let tr = Truncation::new(comp, &xi0, working)?;

    let mut g = comp.lift(&split.g);
    let mut h = comp.lift(&split.h);
    let mut residual = tr.trunc(&f.try_sub(&tr.mul(&g, &h)?)?);
    let mut steps = Vec::new();
    let mut last: Option<Vec<i64>> = None;
    while let Some((wt, part)) = comp.initial_part(&residual, &ws) {
        if let Some(prev) = &last {
            if deglex_cmp(&wt, prev) != Ordering::Greater {
                return Err(LiftError::Stalled(wt));
            }
        }
        let before = tr.min_weight(&residual).expect("nonzero residual");
        let sol = solve_cofactor(&split.g, &split.h, &part, &ws)?;
        let gl = comp.lift(&sol.g);
        let hl = comp.lift(&sol.h);
        let delta = tr
            .mul(&gl, &h)?
            .try_add(&tr.mul(&g, &hl)?)?
            .try_add(&tr.mul(&gl, &hl)?)?;
        residual = tr.trunc(&residual.try_sub(&delta)?);
        g = g.try_add(&gl)?;
        h = h.try_add(&hl)?;
        steps.push(LiftStep {
            offset: sub_vec(&wt, &wz),
            weight: wt.clone(),
            rows: sol.rows,
            h_cols: sol.h_cols,
            g_cols: sol.g_cols,
            before,
            after: tr.min_weight(&residual),
        });
        last = Some(wt);
    }
    let out = tr.with_bound(bound);
    let g = out.trunc(&g);
    let h = out.trunc(&h);
    let exact = f.try_sub(&g.multiply(&h, None)?)?;
    let certificate = Certificate {
        bound,
        working_bound: working,
        steps,
        exit_min_weight: out.min_weight(&exact),
    };
    Ok(Lifted {
        g,
        h,
        edge,
        ws,
        certificate,
    })
}

/// Lift a coprime split of `f|_E` to factors `g, h` with `f = g h` up to
/// `xi0`-weight `bound`.
pub fn lift_factorization(
    f: &SparsePoly,
    edge: &Edge,
    split: &SplitRequest,
    bound: i64,
) -> Result<Lifted, LiftError> {
    let e = validate_split(f, edge, split, SplitKind::General)?;
    lift_loop(f, e, split, bound)
}

/// `f|_E = unit * F^k` with `F` irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePower {
    pub f: SparsePoly,
    pub k: u32,
    pub unit: Scalar,
    /// `F` has two terms whose exponents differ by a primitive vector.
    pub binomial: bool,
}

pub fn edge_prime_power_test(
    r: &EdgeRestriction,
    seed: u64,
) -> Result<Option<PrimePower>, LiftError> {
    let fac = factor(&r.univariate, seed)?;
    let [(q, k)] = fac.factors.as_slice() else {
        return Ok(None);
    };
    let k = *k;
    if r.content.iter().any(|x| x % k as i64 != 0) {
        return Ok(None);
    }
    let q0 = q.coeff(0);
    let q = q.scale(&q0.invert().expect("nonzero constant term"));
    let anchor: Vec<i64> = r.content.iter().map(|x| x / k as i64).collect();
    let f = from_line_form(&anchor, &r.edge.direction, &q)?;
    Ok(Some(PrimePower {
        f,
        k,
        unit: r.univariate.coeff(0),
        binomial: q.degree() == Some(1),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    ReducibleWithFactors {
        split: SplitRequest,
        lifted: Box<Lifted>,
    },
    NoLooseEdge,
    EdgePrimePower {
        edge: Edge,
        power: PrimePower,
    },
}

/// The canonical split for one edge: the monomial content against the rest,
/// or else the first irreducible group of the edge polynomial against the
/// others.
pub fn canonical_split(r: &EdgeRestriction, seed: u64) -> Result<Option<SplitRequest>, LiftError> {
    let m = r.edge.floor();
    let c = &r.edge.direction;
    if m.iter().any(|&x| x > 0) {
        let ring = r.poly.ring();
        let neg: Vec<i64> = m.iter().map(|x| -x).collect();
        return Ok(Some(SplitRequest {
            g: r.poly.shift(&neg),
            h: SparsePoly::monomial(Scalar::one(ring), m),
        }));
    }
    let fac = factor(&r.univariate, seed)?;
    if fac.factors.len() < 2 {
        return Ok(None);
    }
    let (q, e) = &fac.factors[0];
    let qg = q.pow(*e);
    let d = qg.degree().expect("nonconstant") as i64;
    let beta: Vec<i64> = c.iter().map(|&cj| d * 0.max(-cj)).collect();
    let rest = r.univariate.div_exact(&qg);
    let g = from_line_form(&beta, c, &qg)?;
    let h = from_line_form(&sub_vec(&r.content, &beta), c, &rest)?;
    Ok(Some(SplitRequest { g, h }))
}

/// Witness search restricted to one loose edge.
pub fn witness_for_edge(
    f: &SparsePoly,
    edge: &Edge,
    bound: i64,
    seed: u64,
) -> Result<Verdict, LiftError> {
    if !edge.loose {
        return Err(LiftError::NotLoose);
    }
    let r = edge_restriction(f, edge)?;
    if let Some(split) = canonical_split(&r, seed)? {
        let lifted = lift_factorization(f, edge, &split, bound)?;
        return Ok(Verdict::ReducibleWithFactors {
            split,
            lifted: Box::new(lifted),
        });
    }
    match edge_prime_power_test(&r, seed)? {
        Some(power) => Ok(Verdict::EdgePrimePower {
            edge: edge.clone(),
            power,
        }),
        None => Err(LiftError::InvalidSplit(SplitDefect::NotCoprime)),
    }
}

/// Look for a loose edge whose restriction splits, trying edges in
/// lexicographic order. Edge jobs run through `exec`.
pub fn reducibility_witness(
    f: &SparsePoly,
    bound: i64,
    seed: u64,
    exec: Exec,
) -> Result<Verdict, LiftError> {
    let comp = Completion::of(f.ring());
    let poly = NewtonPolyhedron::build_with(&comp.expand(f), exec)?;
    let edges: Vec<Edge> = poly.loose_edges().into_iter().cloned().collect();
    if edges.is_empty() {
        return Ok(Verdict::NoLooseEdge);
    }
    let results = exec.map(&edges, |e| witness_for_edge(f, e, bound, seed));
    let mut fallback = None;
    let mut first_err = None;
    for r in results {
        match r {
            Ok(v @ Verdict::ReducibleWithFactors { .. }) => return Ok(v),
            Ok(v) => {
                fallback.get_or_insert(v);
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match (fallback, first_err) {
        (Some(v), _) => Ok(v),
        (None, Some(e)) => Err(e),
        (None, None) => Ok(Verdict::NoLooseEdge),
    }
}

/// `f - g h`, reported as its least `weights`-weight (`None` if zero).
pub fn residual_min_weight(
    f: &SparsePoly,
    g: &SparsePoly,
    h: &SparsePoly,
    weights: &[i64],
) -> Result<Option<i64>, PolyError> {
    let r = f.try_sub(&g.multiply(h, None)?)?;
    Ok(Completion::of(f.ring()).min_weight(&r, weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::RingDescriptor;

    const Q: RingDescriptor = RingDescriptor::Rationals;

    fn poly(n: usize, terms: &[(&[i64], i64)]) -> SparsePoly {
        SparsePoly::from_int_terms(n, Q, terms).unwrap()
    }

    fn cubic_f() -> SparsePoly {
        // (x3^2 + x1 x2)(x3 + x1 x2)
        let a = poly(3, &[(&[0, 0, 2], 1), (&[1, 1, 0], 1)]);
        let b = poly(3, &[(&[0, 0, 1], 1), (&[1, 1, 0], 1)]);
        a.multiply(&b, None).unwrap()
    }

    fn edge_of(f: &SparsePoly, a: &[i64], b: &[i64]) -> Edge {
        NewtonPolyhedron::build(f)
            .unwrap()
            .find_edge(a, b)
            .unwrap()
            .clone()
    }

    #[test]
    fn cubic_restriction_and_univariate() {
        let f = cubic_f();
        let e = edge_of(&f, &[1, 1, 1], &[2, 2, 0]);
        let r = edge_restriction(&f, &e).unwrap();
        assert_eq!(r.poly, poly(3, &[(&[1, 1, 1], 1), (&[2, 2, 0], 1)]));
        assert_eq!(r.content, vec![1, 1, 1]);
        assert_eq!(r.univariate, UniPoly::from_ints(Q, &[1, 1]));
        assert_eq!(
            from_line_form(&r.content, &e.direction, &r.univariate).unwrap(),
            r.poly
        );
    }

    #[test]
    fn cubic_lift_is_exact() {
        let f = cubic_f();
        let e = edge_of(&f, &[1, 1, 1], &[2, 2, 0]);
        let split = SplitRequest {
            g: poly(3, &[(&[0, 0, 1], 1), (&[1, 1, 0], 1)]),
            h: poly(3, &[(&[1, 1, 0], 1)]),
        };
        let out = lift_factorization(&f, &e, &split, 30).unwrap();
        assert_eq!(out.g, split.g);
        assert_eq!(out.h, poly(3, &[(&[0, 0, 2], 1), (&[1, 1, 0], 1)]));
        assert_eq!(out.certificate.exit_min_weight, None);

        let bad = SplitRequest {
            g: poly(3, &[(&[0, 1, 1], 1), (&[1, 2, 0], 1)]),
            h: poly(3, &[(&[1, 0, 0], 1)]),
        };
        assert_eq!(
            lift_factorization(&f, &e, &bad, 30),
            Err(LiftError::InvalidSplit(SplitDefect::DivisibleByVariable))
        );
    }

    #[test]
    fn cofactor_examples() {
        let ws = orthogonal_basis(&[1, 1, -1]).unwrap();
        let g = poly(3, &[(&[0, 0, 1], 1), (&[1, 1, 0], 1)]);
        let h = poly(3, &[(&[1, 1, 0], 1)]);
        let r = poly(3, &[(&[0, 0, 3], 1)]);
        let sol = solve_cofactor(&g, &h, &r, &ws).unwrap();
        let back = g
            .multiply(&sol.h, None)
            .unwrap()
            .try_add(&h.multiply(&sol.g, None).unwrap())
            .unwrap();
        assert_eq!(back, r);
        let zero = SparsePoly::zero(3, Q);
        let sol = solve_cofactor(&g, &h, &zero, &ws).unwrap();
        assert!(sol.g.is_zero() && sol.h.is_zero());
    }

    #[test]
    fn coprimality() {
        let c = [1, 1, -1];
        let g = poly(3, &[(&[0, 0, 1], 1), (&[1, 1, 0], 1)]);
        assert!(coprime_check(&g, &poly(3, &[(&[1, 1, 0], 1)]), &c).unwrap());
        let g2 = g.multiply(&g, None).unwrap();
        assert!(!coprime_check(&g, &g2, &c).unwrap());
        assert!(!coprime_check(
            &poly(3, &[(&[1, 0, 0], 1)]),
            &poly(3, &[(&[2, 1, 0], 1)]),
            &c
        )
        .unwrap());
        assert_eq!(
            coprime_check(&poly(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], 1)]), &g, &c),
            Err(LiftError::NotEdgeHomogeneous)
        );
    }

    #[test]
    fn binomial_prime_power() {
        let f = poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        match reducibility_witness(&f, 10, 0, Exec::Sequential).unwrap() {
            Verdict::EdgePrimePower { power, .. } => {
                assert_eq!(power.k, 1);
                assert!(power.binomial);
                assert_eq!(power.f, f);
            }
            v => panic!("unexpected {v:?}"),
        }
        let g = poly(2, &[(&[2, 0], 1)]);
        assert_eq!(
            reducibility_witness(&g, 10, 0, Exec::Sequential).unwrap(),
            Verdict::NoLooseEdge
        );
    }
}
