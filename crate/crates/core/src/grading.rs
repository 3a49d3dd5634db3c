//! Weight systems attached to an edge direction, graded slices and the
//! monoid of admissible weights.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lp::{LpProblem, Rel};
use crate::poly::{dot, ExponentVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("direction {0:?} needs a positive and a negative entry")]
    NoMixedSigns(ExponentVec),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("weight {0:?} is not the weight of any lattice point")]
    NoIntegralPoint(Vec<i64>),
    #[error("expected a vector of length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("anchor has weight {found:?}, expected {expected:?}")]
    AnchorMismatch { expected: Vec<i64>, found: Vec<i64> },
    #[error("integer overflow in lattice computation")]
    Overflow,
}

/// Column Hermite form `A U = [H | 0]` of the matrix of orthogonal vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Hnf {
    h: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
}

fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn ck(v: Option<i128>) -> Result<i128, GradingError> {
    v.ok_or(GradingError::Overflow)
}

impl Hnf {
    fn compute(rows: &[Vec<i64>], n: usize) -> Result<Hnf, GradingError> {
        let m = rows.len();
        let mut a: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut u: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i128).collect())
            .collect();
        // Column operation: (col_i, col_j) <- (s col_i + t col_j, p col_i + q col_j).
        let colop = |mat: &mut Vec<Vec<i128>>,
                     i: usize,
                     j: usize,
                     s: i128,
                     t: i128,
                     p: i128,
                     q: i128|
         -> Result<(), GradingError> {
            for row in mat.iter_mut() {
                let (x, y) = (row[i], row[j]);
                row[i] = ck(ck(s.checked_mul(x))?.checked_add(ck(t.checked_mul(y))?))?;
                row[j] = ck(ck(p.checked_mul(x))?.checked_add(ck(q.checked_mul(y))?))?;
            }
            Ok(())
        };
        for i in 0..m {
            for j in i + 1..n {
                if a[i][j] == 0 {
                    continue;
                }
                let (x, y) = (a[i][i], a[i][j]);
                let (g, s, t) = xgcd(x, y);
                let (p, q) = (-y / g, x / g);
                colop(&mut a, i, j, s, t, p, q)?;
                colop(&mut u, i, j, s, t, p, q)?;
            }
            if a[i][i] == 0 {
                return Err(GradingError::InvalidBasis(
                    "orthogonal vectors are dependent".into(),
                ));
            }
            if a[i][i] < 0 {
                for row in a.iter_mut().chain(u.iter_mut()) {
                    row[i] = -row[i];
                }
            }
        }
        let h = a.iter().map(|r| r[..m].to_vec()).collect();
        Ok(Hnf { h, u })
    }

    /// An integer `alpha` with `A alpha = w`, if one exists.
    fn solve(&self, w: &[i64]) -> Result<Option<Vec<i64>>, GradingError> {
        let m = self.h.len();
        let n = self.u.len();
        let mut y = vec![0i128; m];
        for i in 0..m {
            let mut r = w[i] as i128;
            for k in 0..i {
                r = ck(r.checked_sub(ck(self.h[i][k].checked_mul(y[k]))?))?;
            }
            if r % self.h[i][i] != 0 {
                return Ok(None);
            }
            y[i] = r / self.h[i][i];
        }
        let mut alpha = vec![0i64; n];
        for (r, out) in alpha.iter_mut().enumerate() {
            let mut s = 0i128;
            for k in 0..m {
                s = ck(s.checked_add(ck(self.u[r][k].checked_mul(y[k]))?))?;
            }
            *out = i64::try_from(s).map_err(|_| GradingError::Overflow)?;
        }
        Ok(Some(alpha))
    }
}

/// An edge direction `c` with a nonnegative basis `xi_1..xi_n` of which the
/// first `n-1` vectors are orthogonal to `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    direction: ExponentVec,
    basis: Vec<ExponentVec>,
    xi0: ExponentVec,
    hnf: Hnf,
}

/// The lattice points of one weight class, ordered along the direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSlice {
    pub weight: Vec<i64>,
    pub points: Vec<ExponentVec>,
}

impl GradedSlice {
    pub fn dim(&self) -> usize {
        self.points.len()
    }
}

fn has_mixed_signs(c: &[i64]) -> bool {
    c.iter().any(|&x| x > 0) && c.iter().any(|&x| x < 0)
}

fn determinant(m: &[ExponentVec]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let mut det = BigRational::from_integer(1.into());
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= a[col][col].clone();
        for r in col + 1..n {
            let f = &a[r][col] / &a[col][col];
            for k in col..n {
                let v = &f * &a[col][k];
                a[r][k] -= v;
            }
        }
    }
    det.to_integer()
}

/// The basis algorithm, returning the basis (orthogonal vectors first) and
/// the value of `sum |w_i|` before the first and after every iteration.
pub fn orthogonal_basis_traced(c: &[i64]) -> Result<(Vec<ExponentVec>, Vec<i64>), GradingError> {
    if !has_mixed_signs(c) {
        return Err(GradingError::NoMixedSigns(c.to_vec()));
    }
    let n = c.len();
    let mut xi: Vec<ExponentVec> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    let mut w: Vec<i64> = c.to_vec();
    let measure = |w: &[i64]| w.iter().map(|x| x.abs()).sum::<i64>();
    let mut trace = vec![measure(&w)];
    let add = |xi: &mut Vec<ExponentVec>, w: &mut Vec<i64>, k: usize, j: usize| {
        let src = xi[j].clone();
        for (t, s) in xi[k].iter_mut().zip(src) {
            *t += s;
        }
        w[k] += w[j];
    };
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| w[i] != 0).collect();
        if nz.len() == 2 && w[nz[0]] + w[nz[1]] == 0 {
            add(&mut xi, &mut w, nz[1], nz[0]);
            trace.push(measure(&w));
            break;
        }
        let mut step2 = None;
        'pairs: for (pi, &p) in nz.iter().enumerate() {
            for &q in &nz[pi + 1..] {
                if w[p].signum() != w[q].signum() && w[p].abs() != w[q].abs() {
                    step2 = Some(if w[p].abs() < w[q].abs() {
                        (p, q)
                    } else {
                        (q, p)
                    });
                    break 'pairs;
                }
            }
        }
        if let Some((j, k)) = step2 {
            add(&mut xi, &mut w, k, j);
            trace.push(measure(&w));
            continue;
        }
        let step3 = nz.iter().find_map(|&j| {
            let opp: Vec<usize> = nz
                .iter()
                .copied()
                .filter(|&i| i != j && w[i] == -w[j])
                .collect();
            (opp.len() >= 2).then(|| (j, opp[0]))
        });
        let (j, k) = step3.expect("all nonzero entries share one absolute value with mixed signs");
        add(&mut xi, &mut w, k, j);
        trace.push(measure(&w));
    }
    let rest = (0..n)
        .find(|&i| w[i] != 0)
        .expect("one nonzero entry remains");
    let mut basis: Vec<ExponentVec> = (0..n)
        .filter(|&i| i != rest)
        .map(|i| xi[i].clone())
        .collect();
    basis.push(xi[rest].clone());
    Ok((basis, trace))
}

/// Runs the basis algorithm on a primitive mixed-sign direction.
pub fn orthogonal_basis(c: &[i64]) -> Result<WeightSystem, GradingError> {
    let (basis, _) = orthogonal_basis_traced(c)?;
    WeightSystem::new(c.to_vec(), basis)
}

impl WeightSystem {
    /// Validates a user-supplied basis.
    pub fn new(direction: ExponentVec, basis: Vec<ExponentVec>) -> Result<Self, GradingError> {
        let n = direction.len();
        if !has_mixed_signs(&direction) {
            return Err(GradingError::NoMixedSigns(direction));
        }
        if basis.len() != n || basis.iter().any(|b| b.len() != n) {
            return Err(GradingError::InvalidBasis(format!(
                "need {n} vectors of length {n}"
            )));
        }
        if basis.iter().flatten().any(|&x| x < 0) {
            return Err(GradingError::InvalidBasis("negative entry".into()));
        }
        if basis[..n - 1].iter().any(|b| dot(b, &direction) != 0) {
            return Err(GradingError::InvalidBasis(
                "first n-1 vectors must be orthogonal to the direction".into(),
            ));
        }
        if dot(&basis[n - 1], &direction) == 0 {
            return Err(GradingError::InvalidBasis(
                "last vector must not be orthogonal to the direction".into(),
            ));
        }
        if determinant(&basis).is_zero() {
            return Err(GradingError::InvalidBasis("vectors are dependent".into()));
        }
        let mut xi0 = vec![0; n];
        for b in &basis[..n - 1] {
            for (s, x) in xi0.iter_mut().zip(b) {
                *s += x;
            }
        }
        if xi0.iter().any(|&x| x <= 0) {
            return Err(GradingError::InvalidBasis(
                "sum of orthogonal vectors is not strictly positive".into(),
            ));
        }
        let hnf = Hnf::compute(&basis[..n - 1], n)?;
        Ok(WeightSystem {
            direction,
            basis,
            xi0,
            hnf,
        })
    }

    pub fn nvars(&self) -> usize {
        self.direction.len()
    }

    pub fn direction(&self) -> &[i64] {
        &self.direction
    }

    /// All `n` basis vectors; the first `n-1` are orthogonal to the direction.
    pub fn basis(&self) -> &[ExponentVec] {
        &self.basis
    }

    pub fn orthogonal(&self) -> &[ExponentVec] {
        &self.basis[..self.nvars() - 1]
    }

    /// Sum of the orthogonal vectors; strictly positive.
    pub fn xi0(&self) -> &[i64] {
        &self.xi0
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.basis)
    }

    /// The weight `(<xi_1, alpha>, .., <xi_{n-1}, alpha>)`.
    pub fn weight(&self, alpha: &[i64]) -> Vec<i64> {
        self.orthogonal().iter().map(|x| dot(x, alpha)).collect()
    }

    /// `<xi0, alpha>`, the sum of the weight entries.
    pub fn total(&self, alpha: &[i64]) -> i64 {
        dot(&self.xi0, alpha)
    }

    /// A lattice point of weight `w`, if any.
    pub fn lattice_point(&self, w: &[i64]) -> Result<Option<ExponentVec>, GradingError> {
        let m = self.nvars() - 1;
        if w.len() != m {
            return Err(GradingError::LengthMismatch {
                expected: m,
                found: w.len(),
            });
        }
        self.hnf.solve(w)
    }

    /// The lattice points of weight `w` in the nonnegative orthant.
    pub fn slice(&self, w: &[i64], anchor: Option<&[i64]>) -> Result<GradedSlice, GradingError> {
        let base = match anchor {
            Some(a) => {
                if a.len() != self.nvars() {
                    return Err(GradingError::LengthMismatch {
                        expected: self.nvars(),
                        found: a.len(),
                    });
                }
                let found = self.weight(a);
                if found != w {
                    return Err(GradingError::AnchorMismatch {
                        expected: w.to_vec(),
                        found,
                    });
                }
                a.to_vec()
            }
            None => self
                .lattice_point(w)?
                .ok_or_else(|| GradingError::NoIntegralPoint(w.to_vec()))?,
        };
        let c = &self.direction;
        let mut lo = i64::MIN;
        let mut hi = i64::MAX;
        let mut empty = false;
        for (d, &cj) in base.iter().zip(c) {
            match cj.signum() {
                1 => lo = lo.max(Integer::div_ceil(&-d, &cj)),
                -1 => hi = hi.min(Integer::div_floor(d, &-cj)),
                _ => empty |= *d < 0,
            }
        }
        let points = if empty || lo > hi {
            Vec::new()
        } else {
            (lo..=hi)
                .map(|t| base.iter().zip(c).map(|(d, cj)| d + t * cj).collect())
                .collect()
        };
        Ok(GradedSlice {
            weight: w.to_vec(),
            points,
        })
    }

    /// Membership in the monoid of admissible weights.
    pub fn in_m(&self, z: &[i64]) -> bool {
        if z.iter().any(|&x| x < 0) {
            return false;
        }
        let Ok(Some(alpha)) = self.lattice_point(z) else {
            return false;
        };
        let n = self.nvars();
        let mut lp = LpProblem::new(n);
        lp.add(&self.direction, Rel::Eq, 0);
        lp.add(&alpha, Rel::Le, -1);
        !lp.feasible()
    }
}

/// Exact `sum |w|` of a weight vector, handy for logs.
pub fn weight_norm(w: &[i64]) -> i64 {
    w.iter().map(|x| x.abs()).sum()
}

pub fn is_unimodular(ws: &WeightSystem) -> bool {
    ws.determinant().abs() == BigInt::from(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_traces() {
        let (b, trace) = orthogonal_basis_traced(&[2, 3, -4]).unwrap();
        assert_eq!(b, vec![vec![5, 2, 4], vec![3, 2, 3], vec![1, 1, 1]]);
        assert!(trace.windows(2).all(|w| w[1] < w[0]));

        let (b, _) = orthogonal_basis_traced(&[1, -1]).unwrap();
        assert_eq!(b, vec![vec![1, 1], vec![1, 0]]);

        let ws = orthogonal_basis(&[1, 1, -1]).unwrap();
        assert_eq!(ws.orthogonal(), &[vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(ws.basis()[2], vec![0, 1, 0]);
        assert_eq!(ws.xi0(), &[1, 1, 2]);

        assert_eq!(orthogonal_basis(&[3, 1, -2]).unwrap().xi0(), &[3, 1, 5]);
        let ws = orthogonal_basis(&[5, 7, -1]).unwrap();
        assert_eq!(ws.orthogonal(), &[vec![1, 0, 5], vec![0, 1, 7]]);
        assert_eq!(ws.basis()[2], vec![0, 1, 6]);
        assert_eq!(ws.xi0(), &[1, 1, 12]);
        assert_eq!(orthogonal_basis(&[1, -2]).unwrap().xi0(), &[2, 1]);
        assert!(matches!(
            orthogonal_basis(&[1, 2]),
            Err(GradingError::NoMixedSigns(_))
        ));
    }

    fn three_two() -> WeightSystem {
        WeightSystem::new(vec![2, -3], vec![vec![3, 2], vec![1, 0]]).unwrap()
    }

    #[test]
    fn weights_and_slices() {
        let ws = three_two();
        assert_eq!(ws.weight(&[1, 0]), vec![3]);
        assert_eq!(ws.weight(&[0, 1]), vec![2]);
        assert_eq!(ws.weight(&[0, 0]), vec![0]);
        assert_eq!(ws.slice(&[1], None).unwrap().dim(), 0);
        assert_eq!(ws.slice(&[0], None).unwrap().points, vec![vec![0, 0]]);
        let s6 = ws.slice(&[6], None).unwrap();
        assert_eq!(s6.dim(), 2);
        assert!(s6.points.contains(&vec![2, 0]) && s6.points.contains(&vec![0, 3]));
        assert_eq!(
            ws.slice(&[6], Some(&[-2, 6][..])).unwrap(),
            ws.slice(&[6], Some(&[0, 3][..])).unwrap()
        );
        assert!(ws.slice(&[6], Some(&[1, 0][..])).is_err());
    }

    #[test]
    fn non_surjective_weight_map() {
        // Both orthogonal vectors are even in the first coordinate pairing.
        let ws = WeightSystem::new(
            vec![1, 1, -1],
            vec![vec![2, 0, 2], vec![0, 1, 1], vec![0, 1, 0]],
        )
        .unwrap();
        assert_eq!(
            ws.slice(&[1, 0], None),
            Err(GradingError::NoIntegralPoint(vec![1, 0]))
        );
        assert!(!ws.in_m(&[1, 0]));
        assert_eq!(ws.slice(&[2, 0], None).unwrap().dim(), 1);
    }

    #[test]
    fn monoid_membership() {
        let ws = orthogonal_basis(&[1, 1, -1]).unwrap();
        assert!(ws.in_m(&[0, 0]));
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let w = ws.weight(&[a, b, c]);
                    assert!(ws.in_m(&w));
                }
            }
        }
        assert!(!ws.in_m(&[-1, 0]));
    }

    #[test]
    fn slice_points_have_the_weight() {
        let ws = orthogonal_basis(&[2, 3, -4]).unwrap();
        let w = ws.weight(&[4, 6, 0]);
        let s = ws.slice(&w, None).unwrap();
        assert_eq!(s.dim(), 3);
        for p in &s.points {
            assert_eq!(ws.weight(p), w);
        }
        for pair in s.points.windows(2) {
            let d: Vec<i64> = pair[1].iter().zip(&pair[0]).map(|(x, y)| x - y).collect();
            assert_eq!(d, ws.direction());
        }
        assert!(is_unimodular(&ws));
    }
}
