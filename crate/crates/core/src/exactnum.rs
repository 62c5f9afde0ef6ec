//! Exact scalars: rationals, prime fields and binomial coefficients.
//!
//! Everything above this module is generic over [`Field`], which is
//! implemented for [`BigRational`] (characteristic 0) and
//! [`PrimeFieldElem`] (characteristic p). A field value carries enough
//! context to build zeros and ones of the same field, so polynomial code
//! never needs a global modulus.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
}

/// Operations shared by the exact scalar fields.
///
/// `Ctx` identifies a concrete field (the modulus for `F_p`, nothing for `Q`).
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self;
    fn from_bigint(ctx: &Self::Ctx, v: &BigInt) -> Self;
    fn context(&self) -> Self::Ctx;

    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// 0 for the rationals.
    fn characteristic(ctx: &Self::Ctx) -> u64;

    /// Generalized binomial coefficient `C(n, k)` for any integer `n`,
    /// mapped into the field.
    fn binomial(ctx: &Self::Ctx, n: i64, k: u64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.context())
    }

    /// Strictly negative in the natural order; always false in `F_p`.
    fn is_negative(&self) -> bool {
        false
    }

    /// Coefficient text inside a polynomial rendering (no modulus suffix).
    fn render_coeff(&self) -> String {
        self.to_string()
    }

    /// Greatest common divisor of two dense coefficient vectors, monic, or
    /// empty when both inputs are zero.
    fn poly_gcd(ctx: &Self::Ctx, a: &[Self], b: &[Self]) -> Vec<Self> {
        crate::polyseries::euclid_gcd(ctx, a, b)
    }
}

/// Marker context for the rational field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for BigRational {
    type Ctx = Rationals;

    fn zero(_: &Rationals) -> Self {
        <BigRational as Zero>::zero()
    }
    fn one(_: &Rationals) -> Self {
        <BigRational as One>::one()
    }
    fn from_i64(_: &Rationals, v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(_: &Rationals, v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn context(&self) -> Rationals {
        Rationals
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn characteristic(_: &Rationals) -> u64 {
        0
    }
    fn binomial(_: &Rationals, n: i64, k: u64) -> Self {
        BigRational::from_integer(binomial_signed(n, k))
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn poly_gcd(_: &Rationals, a: &[Self], b: &[Self]) -> Vec<Self> {
        crate::polyseries::rational_primitive_gcd(a, b)
    }
}

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    /// Validates primality by trial division.
    pub fn new(p: u64) -> Result<Self, ExactError> {
        if is_prime(p) && p < (1 << 32) {
            Ok(PrimeModulus(p))
        } else {
            Err(ExactError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn elem(self, v: i64) -> PrimeFieldElem {
        PrimeFieldElem::from_i64(&self, v)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(p: u64) -> bool {
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

/// An element of `F_p`, stored as its representative in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeFieldElem {
    p: u64,
    value: u64,
}

impl PrimeFieldElem {
    pub fn new(modulus: PrimeModulus, value: u64) -> Self {
        PrimeFieldElem { p: modulus.0, value: value % modulus.0 }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> PrimeModulus {
        PrimeModulus(self.p)
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self.value;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, base, self.p);
            }
            base = mulmod(base, base, self.p);
            e >>= 1;
        }
        PrimeFieldElem { p: self.p, value: acc }
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl fmt::Display for PrimeFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.p)
    }
}

impl Field for PrimeFieldElem {
    type Ctx = PrimeModulus;

    fn zero(ctx: &PrimeModulus) -> Self {
        PrimeFieldElem { p: ctx.0, value: 0 }
    }
    fn one(ctx: &PrimeModulus) -> Self {
        PrimeFieldElem { p: ctx.0, value: 1 % ctx.0 }
    }
    fn from_i64(ctx: &PrimeModulus, v: i64) -> Self {
        PrimeFieldElem { p: ctx.0, value: v.rem_euclid(ctx.0 as i64) as u64 }
    }
    fn from_bigint(ctx: &PrimeModulus, v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(ctx.0));
        PrimeFieldElem { p: ctx.0, value: r.to_u64().expect("residue below modulus") }
    }
    fn context(&self) -> PrimeModulus {
        PrimeModulus(self.p)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let s = self.value + other.value;
        PrimeFieldElem { p: self.p, value: if s >= self.p { s - self.p } else { s } }
    }
    fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let v = if self.value >= other.value {
            self.value - other.value
        } else {
            self.value + self.p - other.value
        };
        PrimeFieldElem { p: self.p, value: v }
    }
    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        PrimeFieldElem { p: self.p, value: mulmod(self.value, other.value, self.p) }
    }
    fn neg(&self) -> Self {
        PrimeFieldElem { p: self.p, value: if self.value == 0 { 0 } else { self.p - self.value } }
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            // Fermat
            Some(self.pow(self.p - 2))
        }
    }
    fn characteristic(ctx: &PrimeModulus) -> u64 {
        ctx.0
    }
    fn binomial(ctx: &PrimeModulus, n: i64, k: u64) -> Self {
        lucas_signed(*ctx, n, k)
    }
    fn render_coeff(&self) -> String {
        self.value.to_string()
    }
}

/// `C(n, k)` as an arbitrary-precision integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` for a possibly negative upper index, using
/// `C(-m, k) = (-1)^k C(m + k - 1, k)`.
pub fn binomial_signed(n: i64, k: u64) -> BigInt {
    if n >= 0 {
        BigInt::from(binomial(n as u64, k))
    } else {
        let m = n.unsigned_abs();
        let b = BigInt::from(binomial(m + k - 1, k));
        if k % 2 == 1 {
            -b
        } else {
            b
        }
    }
}

/// `C(n, k) mod p` via Lucas' theorem on base-p digits.
pub fn binomial_mod_p(n: u64, k: u64, p: u64) -> Result<PrimeFieldElem, ExactError> {
    let modulus = PrimeModulus::new(p)?;
    Ok(lucas(modulus, n, k))
}

pub(crate) fn lucas(modulus: PrimeModulus, mut n: u64, mut k: u64) -> PrimeFieldElem {
    let p = modulus.0;
    let mut acc = PrimeFieldElem::one(&modulus);
    while k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return PrimeFieldElem::zero(&modulus);
        }
        acc = acc.mul(&small_binomial(modulus, nd, kd));
        n /= p;
        k /= p;
    }
    acc
}

fn lucas_signed(modulus: PrimeModulus, n: i64, k: u64) -> PrimeFieldElem {
    if n >= 0 {
        lucas(modulus, n as u64, k)
    } else {
        let m = n.unsigned_abs();
        let b = lucas(modulus, m + k - 1, k);
        if k % 2 == 1 {
            b.neg()
        } else {
            b
        }
    }
}

/// `C(n, k) mod p` for digits `k <= n < p`.
fn small_binomial(modulus: PrimeModulus, n: u64, k: u64) -> PrimeFieldElem {
    let k = k.min(n - k);
    let mut num = PrimeFieldElem::one(&modulus);
    let mut den = PrimeFieldElem::one(&modulus);
    for i in 0..k {
        num = num.mul(&PrimeFieldElem::new(modulus, n - i));
        den = den.mul(&PrimeFieldElem::new(modulus, i + 1));
    }
    num.mul(&den.inv().expect("digits below p have invertible factorials"))
}

/// Base-p digits, least significant first. Empty for zero.
pub fn digits(mut n: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % p);
        n /= p;
    }
    out
}
