use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::dense::mul_coeffs;
use super::{Poly, PolyError, RatFun};
use crate::exactnum::Field;

/// A truncated Laurent series known modulo `x^order`.
///
/// Coefficients are stored densely for the exponents
/// `valuation .. order`. When nonzero, the first stored coefficient is
/// nonzero; the zero series has `valuation == order` and no coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries<F: Field> {
    ctx: F::Ctx,
    valuation: i64,
    coeffs: Vec<F>,
    order: i64,
}

impl<F: Field> TruncSeries<F> {
    /// Builds the series `sum coeffs[k] x^(start + k)` known modulo `x^order`.
    /// Coefficients at or beyond `order` are dropped.
    pub fn from_coeffs(ctx: &F::Ctx, start: i64, coeffs: Vec<F>, order: i64) -> Self {
        let skip = coeffs.iter().position(|c| !c.is_zero());
        let Some(skip) = skip else {
            return Self::zero(ctx, order);
        };
        let valuation = start + skip as i64;
        if valuation >= order {
            return Self::zero(ctx, order);
        }
        let len = (order - valuation) as usize;
        let mut kept: Vec<F> = coeffs.into_iter().skip(skip).take(len).collect();
        kept.resize(len, F::zero(ctx));
        TruncSeries { ctx: ctx.clone(), valuation, coeffs: kept, order }
    }

    pub fn zero(ctx: &F::Ctx, order: i64) -> Self {
        TruncSeries { ctx: ctx.clone(), valuation: order, coeffs: Vec::new(), order }
    }

    pub fn one(ctx: &F::Ctx, order: i64) -> Self {
        Self::from_coeffs(ctx, 0, vec![F::one(ctx)], order)
    }

    /// `c * x^k` known modulo `x^order`.
    pub fn monomial(c: F, k: i64, order: i64) -> Self {
        let ctx = c.context();
        Self::from_coeffs(&ctx, k, vec![c], order)
    }

    pub fn from_poly(p: &Poly<F>, order: i64) -> Self {
        Self::from_coeffs(p.ctx(), 0, p.coeffs().to_vec(), order)
    }

    /// Laurent expansion at 0 of a rational function, exact below `order`.
    pub fn from_ratfun(f: &RatFun<F>, order: i64) -> Self {
        let ctx = f.ctx().clone();
        let Some(v) = f.valuation_at_zero() else {
            return Self::zero(&ctx, order);
        };
        let rel = (order - v).max(0);
        if rel == 0 {
            return Self::zero(&ctx, order);
        }
        let den_val = f.den().valuation().expect("nonzero denominator") as i64;
        let num = Self::from_poly(f.num(), f.num().valuation().unwrap() as i64 + rel);
        let den = Self::from_poly(f.den(), den_val + rel);
        let out = num.checked_mul_inverse(&den, rel as usize).expect("denominator is a nonzero polynomial");
        debug_assert_eq!(out.order, order.max(v));
        out.truncate(order)
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Coefficients for exponents `valuation .. order`.
    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^e`, or `None` when `e >= order`.
    pub fn coeff(&self, e: i64) -> Option<F> {
        if e >= self.order {
            return None;
        }
        if e < self.valuation {
            return Some(F::zero(&self.ctx));
        }
        Some(self.coeffs[(e - self.valuation) as usize].clone())
    }

    /// Forget every coefficient at or above `order`.
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        Self::from_coeffs(&self.ctx, self.valuation, self.coeffs.clone(), order)
    }

    /// Equality of all coefficients below the smaller of the two orders.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let n = self.order.min(other.order);
        self.truncate(n) == other.truncate(n)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx, self.order);
        }
        TruncSeries {
            ctx: self.ctx.clone(),
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
            order: self.order,
        }
    }

    /// Multiply by `x^k`; the order moves with it.
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries {
            ctx: self.ctx.clone(),
            valuation: self.valuation + k,
            coeffs: self.coeffs.clone(),
            order: self.order + k,
        }
    }

    /// Substitute `x^q` for `x`; the order becomes `q * order`, optionally
    /// capped.
    pub fn compose_power(&self, q: u64, cap: Option<i64>) -> Result<Self, PolyError> {
        if q < 2 {
            return Err(PolyError::Parameter(format!("substitution power must be >= 2, got {q}")));
        }
        let qi = q as i64;
        let order = self.order * qi;
        let mut coeffs = Vec::new();
        if !self.is_zero() {
            coeffs = vec![F::zero(&self.ctx); (order - self.valuation * qi) as usize];
            for (k, c) in self.coeffs.iter().enumerate() {
                coeffs[k * q as usize] = c.clone();
            }
        }
        let out = Self::from_coeffs(&self.ctx, self.valuation * qi, coeffs, order);
        Ok(match cap {
            Some(n) => out.truncate(n),
            None => out,
        })
    }

    /// Multiplicative inverse with `rel` known coefficients after the
    /// leading term (further capped by the precision of `self`).
    pub fn invert(&self, rel: usize) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::InsufficientPrecision(format!(
                "series is zero modulo x^{}, cannot invert",
                self.order
            )));
        }
        let known = (self.order - self.valuation) as usize;
        let n = rel.min(known);
        let lead_inv = self.coeffs[0].inv().expect("leading coefficient is nonzero");
        let mut g: Vec<F> = Vec::with_capacity(n);
        for m in 0..n {
            let mut acc = if m == 0 { F::one(&self.ctx) } else { F::zero(&self.ctx) };
            for k in 1..=m {
                acc = acc.sub(&self.coeffs[k].mul(&g[m - k]));
            }
            g.push(acc.mul(&lead_inv));
        }
        Ok(Self::from_coeffs(&self.ctx, -self.valuation, g, -self.valuation + n as i64))
    }

    /// `self / other` with the quotient known to `rel` coefficients past its
    /// leading term.
    fn checked_mul_inverse(&self, other: &Self, rel: usize) -> Result<Self, PolyError> {
        Ok(self * &other.invert(rel)?)
    }

    /// Product with an exact rational function. The result keeps the full
    /// relative precision of `self`.
    pub fn mul_ratfun(&self, f: &RatFun<F>) -> Self {
        let Some(v) = f.valuation_at_zero() else {
            return Self::zero(&self.ctx, self.order);
        };
        let rel = self.order - self.valuation;
        let expansion = Self::from_ratfun(f, v + rel.max(0));
        self * &expansion
    }

    /// Exact Horner-style evaluation of the known part; only valid for
    /// series with nonnegative valuation.
    pub fn evaluate_truncation(&self, x: &F) -> F {
        let mut acc = F::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        let mut pw = F::one(&self.ctx);
        for _ in 0..self.valuation.max(0) {
            pw = pw.mul(x);
        }
        acc.mul(&pw)
    }

    pub fn render(&self, var: char) -> String {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.valuation + k as i64;
            terms.push(match e {
                0 => c.render_coeff(),
                1 => format!("{}*{var}", c.render_coeff()),
                _ => format!("{}*{var}^{e}", c.render_coeff()),
            });
        }
        terms.push(format!("O({var}^{})", self.order));
        terms.join(" + ")
    }
}

impl<F: Field> fmt::Display for TruncSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render('z'))
    }
}

impl<F: Field> Add for &TruncSeries<F> {
    type Output = TruncSeries<F>;
    fn add(self, rhs: &TruncSeries<F>) -> TruncSeries<F> {
        let order = self.order.min(rhs.order);
        let start = self.valuation.min(rhs.valuation);
        if start >= order {
            return TruncSeries::zero(&self.ctx, order);
        }
        let len = (order - start) as usize;
        let mut coeffs = vec![F::zero(&self.ctx); len];
        for s in [self, rhs] {
            for (k, c) in s.coeffs.iter().enumerate() {
                let idx = s.valuation + k as i64 - start;
                if (idx as usize) < len {
                    coeffs[idx as usize] = coeffs[idx as usize].add(c);
                }
            }
        }
        TruncSeries::from_coeffs(&self.ctx, start, coeffs, order)
    }
}

impl<F: Field> Neg for &TruncSeries<F> {
    type Output = TruncSeries<F>;
    fn neg(self) -> TruncSeries<F> {
        TruncSeries {
            ctx: self.ctx.clone(),
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(F::neg).collect(),
            order: self.order,
        }
    }
}

impl<F: Field> Sub for &TruncSeries<F> {
    type Output = TruncSeries<F>;
    fn sub(self, rhs: &TruncSeries<F>) -> TruncSeries<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Mul for &TruncSeries<F> {
    type Output = TruncSeries<F>;
    fn mul(self, rhs: &TruncSeries<F>) -> TruncSeries<F> {
        let order = (self.valuation + rhs.order).min(rhs.valuation + self.order);
        if self.is_zero() || rhs.is_zero() {
            return TruncSeries::zero(&self.ctx, order);
        }
        let start = self.valuation + rhs.valuation;
        let len = (order - start).max(0) as usize;
        let a = &self.coeffs[..self.coeffs.len().min(len)];
        let b = &rhs.coeffs[..rhs.coeffs.len().min(len)];
        let prod = mul_coeffs(&self.ctx, a, b);
        TruncSeries::from_coeffs(&self.ctx, start, prod, order)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for TruncSeries<F> {
            type Output = TruncSeries<F>;
            fn $m(self, rhs: TruncSeries<F>) -> TruncSeries<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{BigRational, Rationals};

    fn qs(start: i64, coeffs: &[i64], order: i64) -> TruncSeries<BigRational> {
        TruncSeries::from_coeffs(&Rationals, start, coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(), order)
    }

    #[test]
    fn invert_examples() {
        let f = qs(0, &[1, -1], 10);
        assert_eq!(f.invert(4).unwrap(), qs(0, &[1, 1, 1, 1], 4));
        assert_eq!(qs(0, &[1], 10).invert(10).unwrap(), qs(0, &[1], 10));
        let t = qs(1, &[1], 10);
        let inv = t.invert(9).unwrap();
        assert_eq!(inv.valuation(), -1);
        assert_eq!(inv.coeff(-1), Some(BigRational::from_integer(1.into())));
        assert!(matches!(qs(0, &[0, 0], 3).invert(3), Err(PolyError::InsufficientPrecision(_))));
    }

    #[test]
    fn compose_power_geometric() {
        let f = qs(0, &[1; 8], 8);
        let g = f.compose_power(2, None).unwrap();
        assert_eq!(g.order(), 16);
        for e in 0..16 {
            let expect = if e % 2 == 0 { 1 } else { 0 };
            assert_eq!(g.coeff(e), Some(BigRational::from_integer(expect.into())));
        }
        assert_eq!(f.compose_power(3, Some(10)).unwrap().order(), 10);
        assert!(f.compose_power(1, None).is_err());
    }

    #[test]
    fn order_tracking_in_products() {
        let a = qs(-2, &[1, 1], 5);
        let b = qs(1, &[3], 4);
        let c = &a * &b;
        // min(-2 + 4, 1 + 5)
        assert_eq!(c.order(), 2);
        assert_eq!(c.valuation(), -1);
        assert_eq!((&a + &b).order(), 4);
    }

    #[test]
    fn ratfun_expansion() {
        let f = RatFun::normalize(Poly::from_i64s(&Rationals, &[1]), Poly::from_i64s(&Rationals, &[0, 1, -1])).unwrap();
        // 1/(t(1-t)) = t^-1 + 1 + t + ...
        let s = TruncSeries::from_ratfun(&f, 3);
        assert_eq!(s, qs(-1, &[1, 1, 1, 1], 3));
        let g = qs(0, &[1, 2, 3], 3).mul_ratfun(&f);
        assert_eq!(g.order(), 2);
        assert_eq!(g, qs(-1, &[1, 3, 6], 2));
    }
}
