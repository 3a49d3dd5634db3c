//! Exact coefficient arithmetic.
//!
//! Three coefficient rings are supported: the rationals, prime fields `F_p`
//! and truncated p-adic residue rings `Z/p^k`. Values are always kept in
//! canonical form (reduced fractions with positive denominator, residues in
//! `[0, modulus)`), so structural equality is ring equality.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("element {0} is not invertible in {1}")]
    NotInvertible(String, RingDescriptor),
    #[error("unknown ring descriptor {0:?} (expected Q, F<p> or Z/<p>^<k>)")]
    UnknownRing(String),
}

/// The coefficient ring of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingDescriptor {
    Rationals,
    PrimeField(u32),
    ResidueRing { p: u32, k: u32 },
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<u32, CoeffError> {
    if p >= 1 << 31 || !is_prime(p) {
        return Err(CoeffError::NotPrime(p));
    }
    Ok(p as u32)
}

thread_local! {
    static MODULI: RefCell<HashMap<(u32, u32), BigInt>> = RefCell::new(HashMap::new());
}

impl RingDescriptor {
    pub fn prime_field(p: u64) -> Result<Self, CoeffError> {
        Ok(RingDescriptor::PrimeField(check_prime(p)?))
    }

    pub fn residue_ring(p: u64, k: u32) -> Result<Self, CoeffError> {
        let p = check_prime(p)?;
        if k == 0 {
            return Err(CoeffError::ZeroPrecision);
        }
        Ok(RingDescriptor::ResidueRing { p, k })
    }

    pub fn is_field(self) -> bool {
        !matches!(self, RingDescriptor::ResidueRing { .. })
    }

    /// Characteristic prime of the residue field, if any.
    pub fn prime(self) -> Option<u32> {
        match self {
            RingDescriptor::Rationals => None,
            RingDescriptor::PrimeField(p) | RingDescriptor::ResidueRing { p, .. } => Some(p),
        }
    }

    /// The residue field: `Z/p^k -> F_p`, identity otherwise.
    pub fn residue_field(self) -> RingDescriptor {
        match self {
            RingDescriptor::ResidueRing { p, .. } => RingDescriptor::PrimeField(p),
            r => r,
        }
    }

    /// `p` or `p^k`; `None` for the rationals.
    pub fn modulus(self) -> Option<BigInt> {
        match self {
            RingDescriptor::Rationals => None,
            RingDescriptor::PrimeField(p) => Some(BigInt::from(p)),
            RingDescriptor::ResidueRing { p, k } => Some(MODULI.with(|m| {
                m.borrow_mut()
                    .entry((p, k))
                    .or_insert_with(|| BigInt::from(p).pow(k))
                    .clone()
            })),
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Rationals => write!(f, "Q"),
            RingDescriptor::PrimeField(p) => write!(f, "F{p}"),
            RingDescriptor::ResidueRing { p, k } => write!(f, "Z/{p}^{k}"),
        }
    }
}

impl FromStr for RingDescriptor {
    type Err = CoeffError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || CoeffError::UnknownRing(s.to_string());
        if t == "Q" {
            return Ok(RingDescriptor::Rationals);
        }
        if let Some(rest) = t.strip_prefix("Z/") {
            let (p, k) = rest.split_once('^').ok_or_else(bad)?;
            let p: u64 = p.parse().map_err(|_| bad())?;
            let k: u32 = k.parse().map_err(|_| bad())?;
            return RingDescriptor::residue_ring(p, k);
        }
        if let Some(rest) = t.strip_prefix('F') {
            let p: u64 = rest.parse().map_err(|_| bad())?;
            return RingDescriptor::prime_field(p);
        }
        Err(bad())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Value {
    Rational(BigRational),
    Residue(BigInt),
}

/// An exact element of a [`RingDescriptor`].
///
/// Arithmetic between scalars of different rings is a logic error and
/// panics; the polynomial layer checks ring agreement before it gets here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    ring: RingDescriptor,
    value: Value,
}

impl Scalar {
    pub fn zero(ring: RingDescriptor) -> Self {
        Scalar::from_int(ring, 0)
    }

    pub fn one(ring: RingDescriptor) -> Self {
        Scalar::from_int(ring, 1)
    }

    pub fn from_int(ring: RingDescriptor, v: impl Into<BigInt>) -> Self {
        let v = v.into();
        match ring.modulus() {
            None => Scalar {
                ring,
                value: Value::Rational(BigRational::from_integer(v)),
            },
            Some(m) => Scalar {
                ring,
                value: Value::Residue(v.mod_floor(&m)),
            },
        }
    }

    /// `num / den`; fails when `den` is not invertible in `ring`.
    pub fn from_fraction(
        ring: RingDescriptor,
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
    ) -> Result<Self, CoeffError> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(CoeffError::NotInvertible("0".into(), ring));
        }
        match ring {
            RingDescriptor::Rationals => Ok(Scalar {
                ring,
                value: Value::Rational(BigRational::new(num, den)),
            }),
            _ => {
                let d = Scalar::from_int(ring, den).invert()?;
                Ok(&Scalar::from_int(ring, num) * &d)
            }
        }
    }

    pub fn from_rational(ring: RingDescriptor, q: &BigRational) -> Result<Self, CoeffError> {
        Scalar::from_fraction(ring, q.numer().clone(), q.denom().clone())
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(q) => q.is_zero(),
            Value::Residue(v) => v.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rational(q) => q.is_one(),
            Value::Residue(v) => v.is_one(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(q) => Some(q),
            Value::Residue(_) => None,
        }
    }

    /// Canonical residue in `[0, modulus)`.
    pub fn as_residue(&self) -> Option<&BigInt> {
        match &self.value {
            Value::Rational(_) => None,
            Value::Residue(v) => Some(v),
        }
    }

    /// Re-reduce the stored value. Values are canonical on construction, so
    /// this is the identity on every reachable scalar.
    pub fn normalize(&self) -> Scalar {
        match &self.value {
            Value::Rational(q) => Scalar {
                ring: self.ring,
                value: Value::Rational(BigRational::new(q.numer().clone(), q.denom().clone())),
            },
            Value::Residue(v) => Scalar::from_int(self.ring, v.clone()),
        }
    }

    pub fn invert(&self) -> Result<Scalar, CoeffError> {
        let fail = || CoeffError::NotInvertible(self.to_string(), self.ring);
        match &self.value {
            Value::Rational(q) => {
                if q.is_zero() {
                    Err(fail())
                } else {
                    Ok(Scalar {
                        ring: self.ring,
                        value: Value::Rational(q.recip()),
                    })
                }
            }
            Value::Residue(v) => {
                let m = self.ring.modulus().expect("residue ring has a modulus");
                let g = v.extended_gcd(&m);
                if !g.gcd.is_one() {
                    return Err(fail());
                }
                Ok(Scalar::from_int(self.ring, g.x))
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match &self.value {
            Value::Rational(q) => Scalar {
                ring: self.ring,
                value: Value::Rational(Pow::pow(q, e)),
            },
            Value::Residue(v) => {
                let m = self.ring.modulus().expect("modulus");
                Scalar {
                    ring: self.ring,
                    value: Value::Residue(v.modpow(&BigInt::from(e), &m)),
                }
            }
        }
    }

    /// Image in the residue field (`mod p` for `Z/p^k`, identity otherwise).
    pub fn to_residue_field(&self) -> Scalar {
        match (self.ring, &self.value) {
            (RingDescriptor::ResidueRing { p, .. }, Value::Residue(v)) => {
                Scalar::from_int(RingDescriptor::PrimeField(p), v.clone())
            }
            _ => self.clone(),
        }
    }

    /// Canonical representative of an `F_p` element inside `Z/p^k`.
    pub fn lift_to(&self, ring: RingDescriptor) -> Scalar {
        match (&self.value, ring) {
            (Value::Residue(v), RingDescriptor::ResidueRing { .. }) => {
                Scalar::from_int(ring, v.clone())
            }
            _ => {
                assert_eq!(self.ring, ring, "cannot lift {} into {}", self.ring, ring);
                self.clone()
            }
        }
    }

    /// p-adic valuation inside `Z/p^k`; `None` for zero or non-residue rings.
    pub fn valuation(&self) -> Option<u32> {
        let (RingDescriptor::ResidueRing { p, .. }, Value::Residue(v)) = (self.ring, &self.value)
        else {
            return None;
        };
        if v.is_zero() {
            return None;
        }
        let p = BigInt::from(p);
        let mut v = v.clone();
        let mut e = 0;
        while (&v % &p).is_zero() {
            v /= &p;
            e += 1;
        }
        Some(e)
    }

    /// Integer value when the scalar is a small rational integer or residue.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.value {
            Value::Rational(q) if q.is_integer() => q.numer().to_i64(),
            Value::Rational(_) => None,
            Value::Residue(v) => v.to_i64(),
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        matches!(&self.value, Value::Rational(q) if q.is_negative())
    }

    fn same_ring(&self, other: &Scalar) {
        assert_eq!(self.ring, other.ring, "ring mismatch in scalar arithmetic");
    }

    fn residue(ring: RingDescriptor, v: BigInt) -> Scalar {
        let m = ring.modulus().expect("modulus");
        Scalar {
            ring,
            value: Value::Residue(v.mod_floor(&m)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Value::Residue(v) => write!(f, "{v}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.same_ring(rhs);
        match (&self.value, &rhs.value) {
            (Value::Rational(a), Value::Rational(b)) => Scalar {
                ring: self.ring,
                value: Value::Rational(a + b),
            },
            (Value::Residue(a), Value::Residue(b)) => Scalar::residue(self.ring, a + b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.same_ring(rhs);
        match (&self.value, &rhs.value) {
            (Value::Rational(a), Value::Rational(b)) => Scalar {
                ring: self.ring,
                value: Value::Rational(a - b),
            },
            (Value::Residue(a), Value::Residue(b)) => Scalar::residue(self.ring, a - b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.same_ring(rhs);
        match (&self.value, &rhs.value) {
            (Value::Rational(a), Value::Rational(b)) => Scalar {
                ring: self.ring,
                value: Value::Rational(a * b),
            },
            (Value::Residue(a), Value::Residue(b)) => Scalar::residue(self.ring, a * b),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.value {
            Value::Rational(a) => Scalar {
                ring: self.ring,
                value: Value::Rational(-a),
            },
            Value::Residue(a) => Scalar::residue(self.ring, -a),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident $atr:ident $am:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $atr<&Scalar> for Scalar {
            fn $am(&mut self, rhs: &Scalar) { *self = (&*self).$m(rhs); }
        }
    )*};
}
owned_ops!(Add add AddAssign add_assign, Sub sub SubAssign sub_assign, Mul mul MulAssign mul_assign);
