//! Independent reference implementations for the test suites. Nothing here
//! calls into the LP, the HNF solver or the slice code of the library.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

pub type Pt = Vec<i64>;

// ------------------------------------------------------------ integer linear algebra

/// Bareiss fraction-free determinant.
pub fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Generalized cross product of `n-1` rows in dimension `n`.
fn null_vector(rows: &[&Pt], n: usize) -> Option<Vec<i128>> {
    debug_assert_eq!(rows.len() + 1, n);
    let v: Vec<i128> = (0..n)
        .map(|col| {
            let minor = rows
                .iter()
                .map(|r| (0..n).filter(|&j| j != col).map(|j| r[j] as i128).collect())
                .collect();
            let s = if col % 2 == 0 { 1 } else { -1 };
            s * det(minor)
        })
        .collect();
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    (g != 0).then(|| v.iter().map(|x| x / g).collect())
}

fn dot(a: &[i128], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * *y as i128).sum()
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), &mut f);
}

/// Extreme rays of `{xi >= 0 : <xi, e> = 0 for e in eqs, <xi, g> >= 0 for g in ineqs}`,
/// by enumerating every choice of `n - 1` tight constraints.
pub fn cone_rays(n: usize, eqs: &[Pt], ineqs: &[Pt]) -> Vec<Vec<i128>> {
    let mut all: Vec<Pt> = ineqs.to_vec();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        all.push(e);
    }
    let mut rays: Vec<Vec<i128>> = Vec::new();
    if eqs.len() >= n {
        return rays;
    }
    let k = n - 1 - eqs.len();
    combinations(all.len(), k, |idx| {
        let rows: Vec<&Pt> = eqs.iter().chain(idx.iter().map(|&i| &all[i])).collect();
        let Some(v) = null_vector(&rows, n) else {
            return;
        };
        for s in [1, -1] {
            let r: Vec<i128> = v.iter().map(|x| s * x).collect();
            if all.iter().all(|g| dot(&r, g) >= 0) && !rays.contains(&r) {
                rays.push(r);
            }
        }
    });
    rays
}

/// A point in the relative interior of the cone, as the sum of its rays.
pub fn interior_normal(n: usize, eqs: &[Pt], ineqs: &[Pt]) -> Option<Vec<i128>> {
    let rays = cone_rays(n, eqs, ineqs);
    if rays.is_empty() {
        return None;
    }
    Some((0..n).map(|i| rays.iter().map(|r| r[i]).sum()).collect())
}

fn sub(a: &[i64], b: &[i64]) -> Pt {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn collinear(a: &[i64], b: &[i64], t: &[i64]) -> bool {
    let u = sub(b, a);
    let v = sub(t, a);
    (0..u.len()).all(|i| (0..u.len()).all(|j| u[i] * v[j] == u[j] * v[i]))
}

// ------------------------------------------------------------ polyhedra

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleEdge {
    pub a: Pt,
    pub b: Pt,
    pub loose: bool,
}

pub fn dedup(mut s: Vec<Pt>) -> Vec<Pt> {
    s.sort();
    s.dedup();
    s
}

/// Vertices of `conv(S) + R_{>=0}^n`: points that are the unique minimizer of
/// some strictly positive functional.
pub fn vertices(n: usize, support: &[Pt]) -> Vec<Pt> {
    let s = dedup(support.to_vec());
    s.iter()
        .filter(|p| {
            let ineqs: Vec<Pt> = s.iter().filter(|t| t != p).map(|t| sub(t, p)).collect();
            match interior_normal(n, &[], &ineqs) {
                Some(xi) => xi.iter().all(|&x| x > 0) && ineqs.iter().all(|g| dot(&xi, g) > 0),
                None => false,
            }
        })
        .cloned()
        .collect()
}

/// Compact edges between vertices with their looseness.
pub fn edges(n: usize, support: &[Pt]) -> Vec<OracleEdge> {
    let s = dedup(support.to_vec());
    let v = vertices(n, &s);
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let (a, b) = (&v[i], &v[j]);
            let ineqs: Vec<Pt> = s.iter().map(|t| sub(t, a)).collect();
            let Some(xi) = interior_normal(n, &[sub(b, a)], &ineqs) else {
                continue;
            };
            let is_edge = xi.iter().all(|&x| x > 0)
                && s.iter()
                    .all(|t| dot(&xi, &sub(t, a)) > 0 || collinear(a, b, t));
            if !is_edge {
                continue;
            }
            let loose = s.iter().filter(|t| !collinear(a, b, t)).all(|t| {
                match interior_normal(n, &[sub(b, a), sub(t, a)], &ineqs) {
                    Some(x) => !x.iter().all(|&y| y > 0),
                    None => true,
                }
            });
            out.push(OracleEdge {
                a: a.clone(),
                b: b.clone(),
                loose,
            });
        }
    }
    out
}

pub fn minkowski_points(s: &[Pt], t: &[Pt]) -> Vec<Pt> {
    let mut out = Vec::new();
    for a in s {
        for b in t {
            out.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    dedup(out)
}

// ------------------------------------------------------------ weights and slices

pub fn is_primitive(c: &[i64]) -> bool {
    c.iter().fold(0i128, |g, &x| gcd(g, x as i128)) == 1
}

pub fn random_direction(rng: &mut impl Rng, n: usize, bound: i64) -> Pt {
    loop {
        let c: Pt = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        if c.iter().any(|&x| x > 0) && c.iter().any(|&x| x < 0) && is_primitive(&c) {
            return c;
        }
    }
}

/// Membership in M for the weight of a Laurent exponent `d`: nonnegative
/// against the generators `|c_j| e_i + c_i e_j` (`c_i > 0 > c_j`) and `e_k`
/// (`c_k = 0`) of the cone of nonnegative functionals orthogonal to `c`.
pub fn in_m(c: &[i64], d: &[i64]) -> bool {
    let n = c.len();
    for i in 0..n {
        if c[i] == 0 && d[i] < 0 {
            return false;
        }
        for j in 0..n {
            if c[i] > 0 && c[j] < 0 && d[i] * -c[j] + d[j] * c[i] < 0 {
                return false;
            }
        }
    }
    true
}

/// Lattice points `d + t c` in the nonnegative orthant, by scanning `t`.
pub fn line_points(c: &[i64], d: &[i64]) -> Vec<Pt> {
    (-400..=400)
        .map(|t| d.iter().zip(c).map(|(x, y)| x + t * y).collect::<Pt>())
        .filter(|p| p.iter().all(|&x| x >= 0))
        .collect()
}

/// Endpoints `a`, `b = a + r c` with `min(a_i, b_i) = 0` for all `i`.
pub fn coprime_pair(c: &[i64], r: i64) -> (Pt, Pt) {
    let a: Pt = c.iter().map(|&x| if x < 0 { -r * x } else { 0 }).collect();
    let b: Pt = a.iter().zip(c).map(|(x, y)| x + r * y).collect();
    (a, b)
}

// ------------------------------------------------------------ polynomials

/// Dense-free polynomial over Q as a map from exponents to coefficients.
pub type QPoly = BTreeMap<Pt, BigRational>;

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn qmul(f: &QPoly, g: &QPoly) -> QPoly {
    let mut out = QPoly::new();
    for (a, x) in f {
        for (b, y) in g {
            let e: Pt = a.iter().zip(b).map(|(s, t)| s + t).collect();
            let slot = out.entry(e).or_insert_with(BigRational::zero);
            *slot += x * y;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn qsub(f: &QPoly, g: &QPoly) -> QPoly {
    let mut out = f.clone();
    for (e, v) in g {
        let slot = out.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot -= v;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn qadd(f: &QPoly, g: &QPoly) -> QPoly {
    let mut out = f.clone();
    for (e, v) in g {
        let slot = out.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += v;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn qtrunc(f: &QPoly, w: &[i64], bound: i64) -> QPoly {
    f.iter()
        .filter(|(e, _)| e.iter().zip(w).map(|(a, b)| a * b).sum::<i64>() <= bound)
        .map(|(e, v)| (e.clone(), v.clone()))
        .collect()
}

pub fn min_weight(f: &QPoly, w: &[i64]) -> Option<i64> {
    f.keys()
        .map(|e| e.iter().zip(w).map(|(a, b)| a * b).sum())
        .min()
}

/// Coefficients over Q of a library polynomial.
pub fn to_q(f: &nplift::SparsePoly) -> QPoly {
    f.terms()
        .map(|(e, c)| (e.to_vec(), c.as_rational().expect("rational coefficients").clone()))
        .collect()
}

pub fn from_q(n: usize, f: &QPoly) -> nplift::SparsePoly {
    let ring = nplift::RingDescriptor::Rationals;
    nplift::SparsePoly::from_terms(
        n,
        ring,
        f.iter()
            .map(|(e, v)| (e.clone(), nplift::Scalar::from_rational(ring, v).unwrap())),
    )
    .unwrap()
}

/// Power series of `(1 + s)^(1/2)` in a polynomial `s` without constant
/// term, truncated at `w`-weight `bound`.
pub fn sqrt_one_plus(s: &QPoly, w: &[i64], bound: i64) -> QPoly {
    let n = w.len();
    let mut out = QPoly::new();
    out.insert(vec![0; n], q(1));
    let mut power = out.clone();
    let mut coeff = q(1);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for k in 0.. {
        power = qtrunc(&qmul(&power, s), w, bound);
        if power.is_empty() {
            break;
        }
        coeff = coeff * (&half - q(k)) / q(k + 1);
        let term: QPoly = power.iter().map(|(e, v)| (e.clone(), v * &coeff)).collect();
        out = qadd(&out, &term);
    }
    out
}

/// Univariate gcd over Q, coefficients from degree 0 upward.
pub fn ugcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
        while v.last().is_some_and(|x| x.is_zero()) {
            v.pop();
        }
        v
    }
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let mut r = a.clone();
        while r.len() >= b.len() {
            let f = r.last().unwrap() / b.last().unwrap();
            let shift = r.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            r = trim(r);
            if r.is_empty() {
                break;
            }
        }
        (a, b) = (b, r);
    }
    let lc = a.last().cloned().unwrap_or_else(BigRational::one);
    a.iter().map(|x| x / &lc).collect()
}

/// Random nonzero small rational.
pub fn rand_q(rng: &mut impl Rng) -> BigRational {
    loop {
        let v = rng.gen_range(-5..=5);
        if v != 0 {
            let d = rng.gen_range(1..=3);
            return BigRational::new(BigInt::from(v), BigInt::from(d));
        }
    }
}
