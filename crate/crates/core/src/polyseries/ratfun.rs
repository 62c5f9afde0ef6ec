use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Poly, PolyError};
use crate::exactnum::Field;

/// A rational function `num / den` in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFun<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFun<F> {
    /// The unique coprime representative with monic denominator.
    pub fn normalize(num: Poly<F>, den: Poly<F>) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let ctx = den.ctx().clone();
        if num.is_zero() {
            return Ok(RatFun { num, den: Poly::one(&ctx) });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let lc = den.leading().expect("nonzero denominator").clone();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFun { num, den })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        let ctx = p.ctx().clone();
        RatFun { num: p, den: Poly::one(&ctx) }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero(ctx: &F::Ctx) -> Self {
        Self::from_poly(Poly::zero(ctx))
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        Self::from_poly(Poly::one(ctx))
    }

    /// `c * x^k` for any integer `k`.
    pub fn monomial(c: F, k: i64) -> Self {
        let ctx = c.context();
        if k >= 0 {
            Self::from_poly(Poly::monomial(c, k as usize))
        } else {
            Self::normalize(Poly::constant(c), Poly::monomial(F::one(&ctx), k.unsigned_abs() as usize))
                .expect("nonzero monomial denominator")
        }
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.den.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `Some(c)` when the function is the constant `c`.
    pub fn as_constant(&self) -> Option<F> {
        if self.is_polynomial() && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Order of vanishing at 0 (negative for a pole); `None` for zero.
    pub fn valuation_at_zero(&self) -> Option<i64> {
        let vn = self.num.valuation()? as i64;
        let vd = self.den.valuation().expect("nonzero denominator") as i64;
        Some(vn - vd)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.ctx());
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, PolyError> {
        Self::normalize(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, PolyError> {
        if rhs.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Self::normalize(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, e: u32) -> Self {
        // coprime parts stay coprime
        RatFun { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// `num(x) / den(x)`; errors at a pole.
    pub fn evaluate(&self, x: &F) -> Result<F, PolyError> {
        let d = self.den.evaluate(x);
        let d_inv = d.inv().ok_or_else(|| PolyError::Pole(x.to_string()))?;
        Ok(self.num.evaluate(x).mul(&d_inv))
    }

    /// Substitute `x^q` for `x`.
    pub fn compose_power(&self, q: u64) -> Result<Self, PolyError> {
        // x -> x^q preserves coprimality and monicity
        Ok(RatFun { num: self.num.compose_power(q)?, den: self.den.compose_power(q)? })
    }

    /// Canonical text: `(num)/(den)`, or just the numerator when `den = 1`.
    pub fn render(&self, var: char) -> String {
        if self.is_polynomial() {
            self.num.render(var)
        } else {
            format!("({})/({})", self.num.render(var), self.den.render(var))
        }
    }
}

impl<F: Field> fmt::Display for RatFun<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render('z'))
    }
}

impl<F: Field> From<Poly<F>> for RatFun<F> {
    fn from(p: Poly<F>) -> Self {
        RatFun::from_poly(p)
    }
}

impl<F: Field> Add for &RatFun<F> {
    type Output = RatFun<F>;
    fn add(self, rhs: &RatFun<F>) -> RatFun<F> {
        if self.den == rhs.den {
            return RatFun::normalize(&self.num + &rhs.num, self.den.clone()).expect("nonzero denominator");
        }
        RatFun::normalize(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
            .expect("nonzero denominator")
    }
}

impl<F: Field> Sub for &RatFun<F> {
    type Output = RatFun<F>;
    fn sub(self, rhs: &RatFun<F>) -> RatFun<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Neg for &RatFun<F> {
    type Output = RatFun<F>;
    fn neg(self) -> RatFun<F> {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl<F: Field> Mul for &RatFun<F> {
    type Output = RatFun<F>;
    fn mul(self, rhs: &RatFun<F>) -> RatFun<F> {
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFun::from_poly(&self.num * &rhs.num);
        }
        RatFun::normalize(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for RatFun<F> {
            type Output = RatFun<F>;
            fn $m(self, rhs: RatFun<F>) -> RatFun<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Field> Neg for RatFun<F> {
    type Output = RatFun<F>;
    fn neg(self) -> RatFun<F> {
        -&self
    }
}
