use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dense::mul_coeffs;
use super::PolyError;
use crate::exactnum::{BigRational, Field, Rationals};

/// Dense univariate polynomial; `coeffs[k]` is the coefficient of the
/// `k`-th power. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<F: Field> {
    ctx: F::Ctx,
    coeffs: Vec<F>,
}

fn trim<F: Field>(v: &mut Vec<F>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl<F: Field> Poly<F> {
    pub fn from_coeffs(ctx: &F::Ctx, mut coeffs: Vec<F>) -> Self {
        trim(&mut coeffs);
        Poly { ctx: ctx.clone(), coeffs }
    }

    pub fn from_i64s(ctx: &F::Ctx, coeffs: &[i64]) -> Self {
        Self::from_coeffs(ctx, coeffs.iter().map(|&c| F::from_i64(ctx, c)).collect())
    }

    pub fn zero(ctx: &F::Ctx) -> Self {
        Poly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        Self::constant(F::one(ctx))
    }

    pub fn constant(c: F) -> Self {
        let ctx = c.context();
        Self::from_coeffs(&ctx, vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: F, k: usize) -> Self {
        let ctx = c.context();
        let mut coeffs = vec![F::zero(&ctx); k];
        coeffs.push(c);
        Self::from_coeffs(&ctx, coeffs)
    }

    /// The variable itself.
    pub fn x(ctx: &F::Ctx) -> Self {
        Self::monomial(F::one(ctx), 1)
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(|| F::zero(&self.ctx))
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    /// Exponent of the lowest nonzero term.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        Poly { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![F::zero(&self.ctx); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { ctx: self.ctx.clone(), coeffs }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), PolyError> {
        let dlen = divisor.coeffs.len();
        let lc_inv = divisor.leading().and_then(F::inv).ok_or(PolyError::DivisionByZero)?;
        if self.coeffs.len() < dlen {
            return Ok((Self::zero(&self.ctx), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(&self.ctx); rem.len() - dlen + 1];
        for s in (0..quot.len()).rev() {
            let c = rem[s + dlen - 1].mul(&lc_inv);
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[s + i] = rem[s + i].sub(&c.mul(d));
            }
            quot[s] = c;
        }
        rem.truncate(dlen - 1);
        Ok((Self::from_coeffs(&self.ctx, quot), Self::from_coeffs(&self.ctx, rem)))
    }

    /// Exact quotient; errors when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::Parameter("polynomial division is not exact".into()))
        }
    }

    /// Monic greatest common divisor (zero when both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        Self::from_coeffs(&self.ctx, F::poly_gcd(&self.ctx, &self.coeffs, &other.coeffs))
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(&self.ctx), |acc, c| acc.mul(x).add(c))
    }

    /// Substitute `x^q` for `x`.
    pub fn compose_power(&self, q: u64) -> Result<Self, PolyError> {
        if q < 2 {
            return Err(PolyError::Parameter(format!("substitution power must be >= 2, got {q}")));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let q = q as usize;
        let mut coeffs = vec![F::zero(&self.ctx); (self.coeffs.len() - 1) * q + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * q] = c.clone();
        }
        Ok(Poly { ctx: self.ctx.clone(), coeffs })
    }

    /// Canonical text, ascending powers, e.g. `1 + 2*z^3`.
    pub fn render(&self, var: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = if neg { c.neg() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = match k {
                0 => mag.render_coeff(),
                _ => {
                    let pow = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                    if mag.is_one() {
                        pow
                    } else {
                        format!("{}*{}", mag.render_coeff(), pow)
                    }
                }
            };
            out.push_str(&body);
        }
        out
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render('z'))
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::from_coeffs(&self.ctx, coeffs)
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(F::neg).collect() }
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        Poly::from_coeffs(&self.ctx, mul_coeffs(&self.ctx, &self.coeffs, &rhs.coeffs))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, rhs: Poly<F>) -> Poly<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}

pub(crate) fn euclid_gcd<F: Field>(ctx: &F::Ctx, a: &[F], b: &[F]) -> Vec<F> {
    let mut a = Poly::from_coeffs(ctx, a.to_vec());
    let mut b = Poly::from_coeffs(ctx, b.to_vec());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b).expect("divisor is nonzero");
        a = b;
        b = r;
    }
    a.monic().into_coeffs()
}

/// Integer polynomial with content removed and positive leading coefficient.
fn primitive_part(p: Vec<BigInt>) -> Vec<BigInt> {
    let content = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if content.is_zero() {
        return Vec::new();
    }
    let sign = if p.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    let mut out: Vec<BigInt> = p.into_iter().map(|c| &c / &content * &sign).collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn clear_denominators(p: &[BigRational]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    p.iter().map(|c| c.numer() * (&l / c.denom())).collect()
}

/// Pseudo-remainder of `a` by `b` over the integers.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &lr * bc;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Gcd over Q by content extraction and primitive Euclid on integer
/// polynomials, returned monic.
pub(crate) fn rational_primitive_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut a = primitive_part(clear_denominators(a));
    let mut b = primitive_part(clear_denominators(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = primitive_part(pseudo_rem(&a, &b));
        a = b;
        b = r;
    }
    let coeffs: Vec<BigRational> = a.into_iter().map(BigRational::from_integer).collect();
    Poly::from_coeffs(&Rationals, coeffs).monic().into_coeffs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{PrimeFieldElem, PrimeModulus};

    fn q(coeffs: &[i64]) -> Poly<BigRational> {
        Poly::from_i64s(&Rationals, coeffs)
    }

    #[test]
    fn trailing_zeros_trimmed() {
        assert_eq!(q(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(q(&[0, 0]).is_zero());
        assert_eq!(q(&[]).degree(), None);
    }

    #[test]
    fn division_and_gcd() {
        let a = q(&[-1, 0, 1]); // z^2 - 1
        let b = q(&[-1, 1]); // z - 1
        let (quot, r) = a.div_rem(&b).unwrap();
        assert_eq!(quot, q(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&b), b);
        assert_eq!(q(&[2, 4]).gcd(&q(&[3, 6])), Poly::from_coeffs(&Rationals, vec![
            BigRational::new(1.into(), 2.into()),
            <BigRational as One>::one()
        ]));
        assert_eq!(a.div_rem(&q(&[])), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn gcd_over_fp_matches_euclid_on_rationals_shape() {
        let m = PrimeModulus::new(5).unwrap();
        let a = Poly::<PrimeFieldElem>::from_i64s(&m, &[1, 0, 1]); // z^2+1 = (z-2)(z-3) mod 5
        let b = Poly::<PrimeFieldElem>::from_i64s(&m, &[-2, 1]);
        assert_eq!(a.gcd(&b), b);
        assert!(a.gcd(&Poly::from_i64s(&m, &[1, 1])).is_one());
    }

    #[test]
    fn rendering_ascending() {
        assert_eq!(q(&[1, 0, 0, 2]).to_string(), "1 + 2*z^3");
        assert_eq!(q(&[1, -1]).to_string(), "1 - z");
        assert_eq!(q(&[0, -1, 0, -3]).render('t'), "-t - 3*t^3");
        assert_eq!(q(&[]).to_string(), "0");
        let half = Poly::constant(BigRational::new(1.into(), 2.into())).shift(2);
        assert_eq!(half.to_string(), "1/2*z^2");
        let m = PrimeModulus::new(3).unwrap();
        assert_eq!(Poly::<PrimeFieldElem>::from_i64s(&m, &[-1, 2]).render('t'), "2 + 2*t");
    }

    #[test]
    fn compose_power_substitutes() {
        assert_eq!(q(&[1, 1]).compose_power(2).unwrap(), q(&[1, 0, 1]));
        assert!(q(&[1, 1]).compose_power(1).is_err());
    }

    #[test]
    fn horner() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(q(&[1, 1]).evaluate(&half), BigRational::new(3.into(), 2.into()));
        assert_eq!(q(&[7, 3, 5]).evaluate(&<BigRational as Zero>::zero()), BigRational::from_integer(7.into()));
    }
}
