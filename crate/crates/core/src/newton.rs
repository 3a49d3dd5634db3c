//! Newton polyhedra: vertices, compact edges and loose-edge classification.
//!
//! Every geometric question is answered by the exact simplex in [`crate::lp`].

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::lp::{LpProblem, Rel};
use crate::par::Exec;
use crate::poly::{ExponentVec, SparsePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("the zero polynomial has no Newton polyhedron")]
    ZeroPolynomial,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weight vector must be nonnegative and nonzero")]
    InvalidWeight,
    #[error("{0:?}--{1:?} is not a compact edge")]
    NotAnEdge(ExponentVec, ExponentVec),
}

/// A compact edge `[a, b]` with `a` lexicographically smaller than `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: ExponentVec,
    pub b: ExponentVec,
    /// Primitive direction from `a` to `b`.
    pub direction: ExponentVec,
    pub loose: bool,
    /// Parallel to a vector with nonnegative leading entries and a negative
    /// last entry.
    pub descendant: bool,
}

impl Edge {
    /// Lattice length: number of primitive steps from `a` to `b`.
    pub fn length(&self) -> i64 {
        let i = self
            .direction
            .iter()
            .position(|&c| c != 0)
            .expect("nonzero direction");
        (self.b[i] - self.a[i]) / self.direction[i]
    }

    /// Componentwise minimum of the endpoints.
    pub fn floor(&self) -> ExponentVec {
        self.a.iter().zip(&self.b).map(|(x, y)| *x.min(y)).collect()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        let d: Vec<i64> = p.iter().zip(&self.a).map(|(x, y)| x - y).collect();
        let len = self.length();
        let i = self
            .direction
            .iter()
            .position(|&c| c != 0)
            .expect("nonzero direction");
        if d[i] % self.direction[i] != 0 {
            return false;
        }
        let t = d[i] / self.direction[i];
        (0..=len).contains(&t) && d.iter().zip(&self.direction).all(|(x, c)| *x == t * c)
    }
}

pub fn primitive(v: &[i64]) -> ExponentVec {
    let g = v.iter().fold(0i64, |g, x| g.gcd(x));
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub(crate) fn is_descendant_direction(c: &[i64]) -> bool {
    let n = c.len();
    if n < 2 {
        return false;
    }
    let test = |s: i64| c[..n - 1].iter().all(|&x| s * x >= 0) && s * c[n - 1] < 0;
    test(1) || test(-1)
}

/// The minimizing subset of the support for a weight vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub points: Vec<ExponentVec>,
    pub compact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    nvars: usize,
    support: Vec<ExponentVec>,
    vertices: Vec<ExponentVec>,
    edges: Vec<Edge>,
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `s` is a vertex iff it is not a convex combination of the other points
/// plus a nonnegative vector.
pub(crate) fn is_vertex(s: &[i64], others: &[&ExponentVec]) -> bool {
    let n = s.len();
    let m = others.len();
    if m == 0 {
        return true;
    }
    let mut lp = LpProblem::new(m + n);
    for j in 0..n {
        let mut row = vec![0; m + n];
        for (k, u) in others.iter().enumerate() {
            row[k] = u[j];
        }
        row[m + j] = 1;
        lp.add(&row, Rel::Eq, s[j]);
    }
    let mut row = vec![0; m + n];
    row[..m].fill(1);
    lp.add(&row, Rel::Eq, 1);
    !lp.feasible()
}

fn edge_lp(a: &[i64], b: &[i64], vertices: &[ExponentVec]) -> bool {
    let n = a.len();
    let mut lp = LpProblem::new(n);
    for i in 0..n {
        let mut row = vec![0; n];
        row[i] = 1;
        lp.add(&row, Rel::Ge, 1);
    }
    lp.add(&sub(b, a), Rel::Eq, 0);
    for u in vertices {
        if u.as_slice() != a && u.as_slice() != b {
            lp.add(&sub(u, a), Rel::Ge, 1);
        }
    }
    lp.feasible()
}

fn loose_lp(a: &[i64], b: &[i64], vertices: &[ExponentVec]) -> bool {
    let n = a.len();
    for v in vertices {
        if v.as_slice() == a || v.as_slice() == b {
            continue;
        }
        let mut lp = LpProblem::new(n);
        for i in 0..n {
            let mut row = vec![0; n];
            row[i] = 1;
            lp.add(&row, Rel::Ge, 1);
        }
        lp.add(&sub(b, a), Rel::Eq, 0);
        lp.add(&sub(v, a), Rel::Eq, 0);
        for u in vertices {
            lp.add(&sub(u, a), Rel::Ge, 0);
        }
        if lp.feasible() {
            return false;
        }
    }
    true
}

impl NewtonPolyhedron {
    pub fn build(f: &SparsePoly) -> Result<Self, NewtonError> {
        NewtonPolyhedron::from_support(f.nvars(), f.support(), Exec::default())
    }

    pub fn build_with(f: &SparsePoly, exec: Exec) -> Result<Self, NewtonError> {
        NewtonPolyhedron::from_support(f.nvars(), f.support(), exec)
    }

    pub fn from_support(
        nvars: usize,
        support: Vec<ExponentVec>,
        exec: Exec,
    ) -> Result<Self, NewtonError> {
        if support.is_empty() {
            return Err(NewtonError::ZeroPolynomial);
        }
        if let Some(bad) = support.iter().find(|s| s.len() != nvars) {
            return Err(NewtonError::DimensionMismatch {
                expected: nvars,
                found: bad.len(),
            });
        }
        let mut support = support;
        support.sort();
        support.dedup();

        let flags = exec.map(&support, |s| {
            let others: Vec<&ExponentVec> = support.iter().filter(|u| *u != s).collect();
            is_vertex(s, &others)
        });
        let vertices: Vec<ExponentVec> = support
            .iter()
            .zip(flags)
            .filter(|(_, v)| *v)
            .map(|(s, _)| s.clone())
            .collect();

        let mut pairs = Vec::new();
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                pairs.push((i, j));
            }
        }
        let edges: Vec<Option<Edge>> = exec.map(&pairs, |&(i, j)| {
            let (a, b) = (&vertices[i], &vertices[j]);
            if !edge_lp(a, b, &vertices) {
                return None;
            }
            let direction = primitive(&sub(b, a));
            Some(Edge {
                a: a.clone(),
                b: b.clone(),
                loose: loose_lp(a, b, &vertices),
                descendant: is_descendant_direction(&direction),
                direction,
            })
        });

        Ok(NewtonPolyhedron {
            nvars,
            support,
            vertices,
            edges: edges.into_iter().flatten().collect(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Support points, sorted lexicographically.
    pub fn support(&self) -> &[ExponentVec] {
        &self.support
    }

    /// Vertices, sorted lexicographically.
    pub fn vertices(&self) -> &[ExponentVec] {
        &self.vertices
    }

    /// Compact edges, sorted lexicographically by `(a, b)`.
    pub fn compact_edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn loose_edges(&self) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.loose).collect()
    }

    pub fn is_polygonal(&self) -> bool {
        self.edges.iter().all(|e| e.loose)
    }

    pub fn find_edge(&self, a: &[i64], b: &[i64]) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    /// Recomputes the loose test for `e` from scratch.
    pub fn is_loose(&self, e: &Edge) -> Result<bool, NewtonError> {
        let is_v = |p: &[i64]| self.vertices.iter().any(|v| v == p);
        if e.a.len() != self.nvars
            || !is_v(&e.a)
            || !is_v(&e.b)
            || e.a == e.b
            || !edge_lp(&e.a, &e.b, &self.vertices)
        {
            return Err(NewtonError::NotAnEdge(e.a.clone(), e.b.clone()));
        }
        Ok(loose_lp(&e.a, &e.b, &self.vertices))
    }

    /// Points of the support minimizing `<xi, .>`.
    pub fn face_of(&self, xi: &[BigRational]) -> Result<Face, NewtonError> {
        if xi.len() != self.nvars {
            return Err(NewtonError::DimensionMismatch {
                expected: self.nvars,
                found: xi.len(),
            });
        }
        if xi.iter().any(|x| x < &BigRational::zero()) || xi.iter().all(|x| x.is_zero()) {
            return Err(NewtonError::InvalidWeight);
        }
        let val = |p: &[i64]| -> BigRational {
            p.iter()
                .zip(xi)
                .map(|(a, x)| x * BigRational::from_integer((*a).into()))
                .fold(BigRational::zero(), |s, t| s + t)
        };
        let min = self
            .support
            .iter()
            .map(|p| val(p))
            .min()
            .expect("nonempty support");
        Ok(Face {
            points: self
                .support
                .iter()
                .filter(|p| val(p) == min)
                .cloned()
                .collect(),
            compact: xi.iter().all(|x| x > &BigRational::zero()),
        })
    }

    pub fn face_of_int(&self, xi: &[i64]) -> Result<Face, NewtonError> {
        let xi: Vec<BigRational> = xi
            .iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect();
        self.face_of(&xi)
    }

    /// The polyhedron of the Minkowski sum `self + other`.
    pub fn minkowski(&self, other: &NewtonPolyhedron) -> Result<NewtonPolyhedron, NewtonError> {
        self.minkowski_with(other, Exec::default())
    }

    pub fn minkowski_with(
        &self,
        other: &NewtonPolyhedron,
        exec: Exec,
    ) -> Result<NewtonPolyhedron, NewtonError> {
        if self.nvars != other.nvars {
            return Err(NewtonError::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        let mut pts = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        NewtonPolyhedron::from_support(self.nvars, pts, exec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::RingDescriptor;

    fn poly(terms: &[&[i64]]) -> SparsePoly {
        let n = terms[0].len();
        let ts: Vec<(&[i64], i64)> = terms.iter().map(|t| (*t, 1)).collect();
        SparsePoly::from_int_terms(n, RingDescriptor::Rationals, &ts).unwrap()
    }

    #[test]
    fn example_one_geometry() {
        let f = poly(&[&[6, 2, 0], &[0, 0, 4], &[1, 1, 4], &[7, 5, 2]]);
        let np = NewtonPolyhedron::build(&f).unwrap();
        assert_eq!(np.vertices(), &[vec![0, 0, 4], vec![6, 2, 0]]);
        assert_eq!(np.compact_edges().len(), 1);
        let e = &np.compact_edges()[0];
        assert!(e.loose);
        assert_eq!(e.direction, vec![3, 1, -2]);
        assert_eq!(e.length(), 2);
        assert_eq!(
            np.face_of_int(&[1, 1, 1]).unwrap().points,
            vec![vec![0, 0, 4]]
        );
    }

    #[test]
    fn simplex_has_no_loose_edges() {
        let np = NewtonPolyhedron::build(&poly(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(np.compact_edges().len(), 3);
        assert!(np.compact_edges().iter().all(|e| !e.loose));
        assert!(!np.is_polygonal());
    }

    #[test]
    fn example_two_geometry() {
        let np = NewtonPolyhedron::build(&poly(&[&[1, 1, 1], &[3, 3, 0], &[3, 0, 3], &[0, 3, 3]]))
            .unwrap();
        assert_eq!(np.vertices().len(), 4);
        assert_eq!(np.loose_edges().len(), 3);
        assert!(np.is_polygonal());
        let e = np.find_edge(&[1, 1, 1], &[3, 3, 0]).unwrap();
        assert!(np.is_loose(e).unwrap());
    }

    #[test]
    fn single_monomial() {
        let np = NewtonPolyhedron::build(&poly(&[&[2, 1]])).unwrap();
        assert_eq!(np.vertices(), &[vec![2, 1]]);
        assert!(np.compact_edges().is_empty());
        assert!(np.is_polygonal());
        assert!(NewtonPolyhedron::from_support(2, vec![], Exec::Sequential).is_err());
    }

    #[test]
    fn plane_edges_are_loose() {
        let np = NewtonPolyhedron::build(&poly(&[&[0, 3], &[1, 1], &[2, 0], &[3, 3]])).unwrap();
        assert_eq!(np.vertices(), &[vec![0, 3], vec![1, 1], vec![2, 0]]);
        assert_eq!(np.compact_edges().len(), 2);
        assert!(np.compact_edges().iter().all(|e| e.loose && e.descendant));
    }

    #[test]
    fn face_with_axis_weight() {
        let np = NewtonPolyhedron::build(&poly(&[&[0, 2], &[1, 0], &[0, 5], &[3, 1]])).unwrap();
        let face = np.face_of_int(&[1, 0]).unwrap();
        assert_eq!(face.points, vec![vec![0, 2], vec![0, 5]]);
        assert!(!face.compact);
        assert!(np.face_of_int(&[0, 0]).is_err());
    }

    #[test]
    fn minkowski_examples() {
        let seg = NewtonPolyhedron::build(&poly(&[&[0, 0, 1], &[1, 1, 0]])).unwrap();
        let pt = NewtonPolyhedron::build(&poly(&[&[1, 1, 0]])).unwrap();
        let sum = seg.minkowski(&pt).unwrap();
        assert_eq!(sum.vertices(), &[vec![1, 1, 1], vec![2, 2, 0]]);
        let zero = NewtonPolyhedron::build(&poly(&[&[0, 0, 0]])).unwrap();
        assert_eq!(seg.minkowski(&zero).unwrap().vertices(), seg.vertices());
    }
}
