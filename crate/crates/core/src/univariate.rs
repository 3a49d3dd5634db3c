//! Dense univariate polynomials and their factorization over `Q` and `F_p`.
//!
//! Over `F_p`: squarefree decomposition, distinct-degree splitting and
//! Cantor-Zassenhaus equal-degree splitting. Over `Q`: content removal,
//! squarefree decomposition, factorization modulo a good prime, quadratic
//! Hensel lifting and exhaustive recombination.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coeffs::{is_prime, RingDescriptor, Scalar};

/// Largest degree accepted by [`factor`].
pub const MAX_FACTOR_DEGREE: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("factorization over {0} is not supported; use the residue field")]
    UnsupportedRing(RingDescriptor),
    #[error("degree {0} exceeds the supported maximum")]
    DegreeTooLarge(usize),
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
}

/// Coefficients from degree 0 upwards, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    ring: RingDescriptor,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(ring: RingDescriptor, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { ring, coeffs }
    }

    pub fn from_ints(ring: RingDescriptor, cs: &[i64]) -> Self {
        UniPoly::new(
            ring,
            cs.iter().map(|&c| Scalar::from_int(ring, c)).collect(),
        )
    }

    pub fn zero(ring: RingDescriptor) -> Self {
        UniPoly {
            ring,
            coeffs: vec![],
        }
    }

    pub fn constant(c: Scalar) -> Self {
        UniPoly::new(c.ring(), vec![c])
    }

    pub fn one(ring: RingDescriptor) -> Self {
        UniPoly::constant(Scalar::one(ring))
    }

    pub fn x(ring: RingDescriptor) -> Self {
        UniPoly::new(ring, vec![Scalar::zero(ring), Scalar::one(ring)])
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().expect("nonzero polynomial")
    }

    pub fn lc(&self) -> Scalar {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.ring))
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        UniPoly::new(self.ring, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().invert().expect("leading coefficient is a unit"))
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new(
            self.ring,
            (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect(),
        )
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new(
            self.ring,
            (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect(),
        )
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.ring);
        }
        let mut out = vec![Scalar::zero(self.ring); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(self.ring, out)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        (0..e).fold(UniPoly::one(self.ring), |acc, _| acc.mul(self))
    }

    /// Division with remainder by a polynomial with unit leading coefficient.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.deg();
        let inv = d.lc().invert().expect("leading coefficient is a unit");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(self.ring), self.clone());
        }
        let mut q = vec![Scalar::zero(self.ring); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = &r[i] * &inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                let v = &c * dc;
                r[i - dd + j] -= &v;
            }
            q[i - dd] = c;
        }
        (UniPoly::new(self.ring, q), UniPoly::new(self.ring, r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divrem(d).1
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &UniPoly) -> UniPoly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.ring,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Scalar::from_int(self.ring, i as i64))
                .collect(),
        )
    }

    /// Monic gcd over a field (zero if both inputs are zero).
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let ring = self.ring;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UniPoly::one(ring), UniPoly::zero(ring));
        let (mut t0, mut t1) = (UniPoly::zero(ring), UniPoly::one(ring));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.lc().invert().expect("nonzero gcd");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn mulmod(&self, o: &UniPoly, m: &UniPoly) -> UniPoly {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, e: &BigUint, m: &UniPoly) -> UniPoly {
        let mut result = UniPoly::one(self.ring).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mulmod(&result, m);
            if e.bit(i) {
                result = result.mulmod(&base, m);
            }
        }
        result
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(self.ring), |acc, c| &(&acc * x) + c)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `unit * prod f_i^{e_i}` with pairwise distinct normalized irreducible `f_i`
/// (monic over `F_p`, primitive integral with positive leading coefficient
/// over `Q`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Scalar,
    pub factors: Vec<(UniPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(self.unit.clone()), |acc, (f, e)| {
                acc.mul(&f.pow(*e))
            })
    }
}

fn scalar_cmp(a: &Scalar, b: &Scalar) -> Ordering {
    match (a.as_rational(), b.as_rational()) {
        (Some(x), Some(y)) => x.cmp(y),
        _ => a.as_residue().cmp(&b.as_residue()),
    }
}

fn poly_cmp(a: &UniPoly, b: &UniPoly) -> Ordering {
    a.coeffs.len().cmp(&b.coeffs.len()).then_with(|| {
        for (x, y) in a.coeffs.iter().rev().zip(b.coeffs.iter().rev()) {
            match scalar_cmp(x, y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

fn sort_factors(fs: &mut [(UniPoly, u32)]) {
    fs.sort_by(|a, b| poly_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
}

/// Factor a nonzero polynomial over `Q` or `F_p`. The seed drives the
/// randomized splitting; results do not depend on it.
pub fn factor(f: &UniPoly, seed: u64) -> Result<Factorization, FactorError> {
    if f.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    let d = f.deg();
    if d > MAX_FACTOR_DEGREE {
        return Err(FactorError::DegreeTooLarge(d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = match f.ring {
        RingDescriptor::PrimeField(p) => {
            let unit = f.lc();
            let factors = if d == 0 {
                vec![]
            } else {
                factor_fp_monic(&f.monic(), p, &mut rng)
            };
            Factorization { unit, factors }
        }
        RingDescriptor::Rationals => factor_q(f, &mut rng),
        r => return Err(FactorError::UnsupportedRing(r)),
    };
    sort_factors(&mut out.factors);
    Ok(out)
}

// ---------------------------------------------------------------- F_p

fn pth_root(f: &UniPoly, p: u32) -> UniPoly {
    let p = p as usize;
    UniPoly::new(f.ring, f.coeffs.iter().step_by(p).cloned().collect())
}

fn squarefree_fp(f: &UniPoly, p: u32) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree_fp(&pth_root(f, p), p) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        for (g, m) in squarefree_fp(&pth_root(&c, p), p) {
            out.push((g, m * p));
        }
    }
    out
}

fn distinct_degree(f: &UniPoly, p: u32) -> Vec<(UniPoly, usize)> {
    let ring = f.ring;
    let x = UniPoly::x(ring);
    let pe = BigUint::from(p);
    let mut f = f.clone();
    let mut h = x.rem(&f);
    let mut out = Vec::new();
    let mut i = 1;
    while f.deg() >= 2 * i {
        h = h.powmod(&pe, &f);
        let g = f.gcd(&h.sub(&x));
        if !g.is_one() {
            f = f.div_exact(&g);
            h = h.rem(&f);
            out.push((g, i));
        }
        i += 1;
    }
    if f.deg() > 0 {
        let d = f.deg();
        out.push((f, d));
    }
    out
}

fn random_poly(ring: RingDescriptor, p: u32, deg: usize, rng: &mut ChaCha8Rng) -> UniPoly {
    UniPoly::new(
        ring,
        (0..deg)
            .map(|_| Scalar::from_int(ring, rng.gen_range(0..p as u64)))
            .collect(),
    )
}

fn equal_degree(f: &UniPoly, d: usize, p: u32, rng: &mut ChaCha8Rng) -> Vec<UniPoly> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let ring = f.ring;
    loop {
        let a = random_poly(ring, p, n, rng);
        if a.degree().is_none_or(|k| k == 0) {
            continue;
        }
        let b = if p == 2 {
            let mut acc = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = cur.mulmod(&cur, f);
                acc = acc.add(&cur);
            }
            acc
        } else {
            let e = (num_traits::pow(BigUint::from(p), d) - 1u32) / 2u32;
            a.powmod(&e, f).sub(&UniPoly::one(ring))
        };
        let g = f.gcd(&b);
        if let Some(k) = g.degree() {
            if k > 0 && k < n {
                let mut out = equal_degree(&g, d, p, rng);
                out.extend(equal_degree(&f.div_exact(&g), d, p, rng));
                return out;
            }
        }
    }
}

fn factor_fp_monic(f: &UniPoly, p: u32, rng: &mut ChaCha8Rng) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    for (sq, m) in squarefree_fp(f, p) {
        for (g, d) in distinct_degree(&sq, p) {
            for h in equal_degree(&g, d, p, rng) {
                out.push((h.monic(), m));
            }
        }
    }
    out
}

// ---------------------------------------------------------------- Q

type ZPoly = Vec<BigInt>;

fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zmod(a: &[BigInt], m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zadd(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn zsub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zmod(&out, m)
}

/// Division by a monic polynomial modulo `m`.
fn zdivrem(a: &[BigInt], d: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let dd = d.len() - 1;
    debug_assert!(d[dd].is_one());
    let mut r: ZPoly = zmod(a, m);
    if r.len() <= dd {
        return (vec![], r);
    }
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for i in (dd..r.len()).rev() {
        let c = r[i].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, dc) in d.iter().enumerate() {
            r[i - dd + j] = (&r[i - dd + j] - &c * dc).mod_floor(m);
        }
        q[i - dd] = c;
    }
    (ztrim(q), ztrim(r))
}

fn to_fp(a: &[BigInt], p: u32) -> UniPoly {
    let ring = RingDescriptor::PrimeField(p);
    UniPoly::new(
        ring,
        a.iter()
            .map(|c| Scalar::from_int(ring, c.clone()))
            .collect(),
    )
}

fn from_fp(a: &UniPoly) -> ZPoly {
    a.coeffs
        .iter()
        .map(|c| c.as_residue().expect("residue").clone())
        .collect()
}

fn to_q(a: &[BigInt]) -> UniPoly {
    let ring = RingDescriptor::Rationals;
    UniPoly::new(
        ring,
        a.iter()
            .map(|c| Scalar::from_int(ring, c.clone()))
            .collect(),
    )
}

/// Primitive integral associate with positive leading coefficient, and the
/// rational factor relating the two.
fn primitive_part(f: &UniPoly) -> (Scalar, ZPoly) {
    let rats: Vec<&BigRational> = f
        .coeffs
        .iter()
        .map(|c| c.as_rational().expect("rational"))
        .collect();
    let den = rats.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
    let ints: Vec<BigInt> = rats
        .iter()
        .map(|r| (*r * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let mut g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if ints.last().expect("nonzero").is_negative() {
        g = -g;
    }
    let prim: ZPoly = ints.iter().map(|c| c / &g).collect();
    let content =
        Scalar::from_fraction(RingDescriptor::Rationals, g, den).expect("nonzero denominator");
    (content, prim)
}

fn yun(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let f = f.monic();
    let d = f.derivative();
    let a0 = f.gcd(&d);
    let mut b = f.div_exact(&a0);
    let mut c = d.div_exact(&a0);
    let mut dd = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while !b.is_one() {
        let a = b.gcd(&dd);
        b = b.div_exact(&a);
        c = dd.div_exact(&a);
        dd = c.sub(&b.derivative());
        if !a.is_one() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// One quadratic Hensel step: `f = g h mod m` with `h` monic and
/// `s g + t h = 1 mod m`, lifted modulo `m2` (which divides `m^2`).
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m2: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let e = zsub(f, &zmul(g, h, m2), m2);
    let (q, r) = zdivrem(&zmul(s, &e, m2), h, m2);
    let g1 = zadd(&zadd(g, &zmul(t, &e, m2), m2), &zmul(&q, g, m2), m2);
    let h1 = zadd(h, &r, m2);
    let b = zsub(
        &zadd(&zmul(s, &g1, m2), &zmul(t, &h1, m2), m2),
        &[BigInt::one()],
        m2,
    );
    let (c, d) = zdivrem(&zmul(s, &b, m2), &h1, m2);
    let s1 = zsub(s, &d, m2);
    let t1 = zsub(&zsub(t, &zmul(t, &b, m2), m2), &zmul(&c, &g1, m2), m2);
    (g1, h1, s1, t1)
}

/// Lift `a = lc * prod factors (mod p)` to monic factors modulo `pe`.
fn hensel_lift(a: &[BigInt], factors: &[UniPoly], p: u32, pe: &BigInt) -> Vec<ZPoly> {
    let pb = BigInt::from(p);
    let lc = a.last().expect("nonzero").clone();
    if factors.len() == 1 {
        let inv = lc.modinv(pe).expect("leading coefficient is a unit");
        return vec![zmod(&a.iter().map(|c| c * &inv).collect::<Vec<_>>(), pe)];
    }
    let ring = RingDescriptor::PrimeField(p);
    let h0 = factors[0].clone();
    let g0 = factors[1..].iter().fold(
        UniPoly::constant(Scalar::from_int(ring, lc.clone())),
        |acc, f| acc.mul(f),
    );
    let (one, s0, t0) = g0.xgcd(&h0);
    debug_assert!(one.is_one());
    let (q, s0r) = s0.divrem(&h0);
    let t0r = t0.add(&q.mul(&g0));
    let (mut g, mut h, mut s, mut t) = (from_fp(&g0), from_fp(&h0), from_fp(&s0r), from_fp(&t0r));
    let mut m = pb;
    while &m < pe {
        let m2 = (&m * &m).min(pe.clone());
        (g, h, s, t) = hensel_step(&zmod(a, &m2), &g, &h, &s, &t, &m2);
        m = m2;
    }
    let mut out = vec![h];
    out.extend(hensel_lift(&g, &factors[1..], p, pe));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half: BigInt = m / 2;
    a.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect()
}

fn zprimitive(a: &[BigInt]) -> ZPoly {
    let mut g = a.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if a.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Factor a primitive squarefree integer polynomial with positive leading
/// coefficient into primitive irreducibles.
fn factor_squarefree_z(a: &[BigInt], rng: &mut ChaCha8Rng) -> Vec<ZPoly> {
    let n = a.len() - 1;
    if n <= 1 {
        return vec![a.to_vec()];
    }
    let lc = a[n].clone();
    let mut p = 3u32;
    let mut fp;
    loop {
        if is_prime(p as u64) && !(&lc % BigInt::from(p)).is_zero() {
            fp = to_fp(a, p);
            if fp.deg() == n && fp.gcd(&fp.derivative()).is_one() {
                break;
            }
        }
        p += 2;
    }
    let mut modular: Vec<UniPoly> = factor_fp_monic(&fp.monic(), p, rng)
        .into_iter()
        .map(|(f, _)| f)
        .collect();
    if modular.len() == 1 {
        return vec![a.to_vec()];
    }
    modular.sort_by(poly_cmp);
    // Coefficient bound for lc(a)/lc(g) * g over all factors g of a.
    let norm: BigInt = a.iter().map(|c| c.abs()).sum();
    let bound: BigInt = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm;
    let pb = BigInt::from(p);
    let mut pe = pb.clone();
    while pe <= bound {
        pe *= &pb;
    }
    let lifted = hensel_lift(a, &modular, p, &pe);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut cur = a.to_vec();
    let mut out = Vec::new();
    let mut k = 1;
    while 2 * k <= remaining.len() {
        let mut hit = None;
        for sub in subsets(remaining.len(), k) {
            let lcc = cur.last().expect("nonzero").clone();
            let prod = sub
                .iter()
                .fold(vec![lcc], |acc, &i| zmul(&acc, &lifted[remaining[i]], &pe));
            let cand = zprimitive(&symmetric(&prod, &pe));
            let (q, r) = to_q(&cur).divrem(&to_q(&cand));
            if r.is_zero() {
                hit = Some((sub, cand, q));
                break;
            }
        }
        match hit {
            Some((sub, cand, q)) => {
                out.push(cand);
                let (_, prim) = primitive_part(&q);
                cur = prim;
                remaining = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !sub.contains(i))
                    .map(|(_, &r)| r)
                    .collect();
            }
            None => k += 1,
        }
    }
    if cur.len() > 1 {
        out.push(cur);
    }
    out
}

fn factor_q(f: &UniPoly, rng: &mut ChaCha8Rng) -> Factorization {
    let mut factors = Vec::new();
    if f.deg() > 0 {
        for (sq, m) in yun(f) {
            let (_, prim) = primitive_part(&sq);
            for g in factor_squarefree_z(&prim, rng) {
                factors.push((to_q(&g), m));
            }
        }
    }
    let prod = factors
        .iter()
        .fold(UniPoly::one(f.ring), |acc, (g, m)| acc.mul(&g.pow(*m)));
    let unit = &f.lc() * &prod.lc().invert().expect("nonzero");
    Factorization { unit, factors }
}
