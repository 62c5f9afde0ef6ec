//! q-Mahler systems `f(z) = A(z) f(z^q)` over `Q(z)`.
//!
//! `A` is stored as `P / d` with `d` the monic lcm of the entry
//! denominators, so the system reads `d(z) f(z) = P(z) f(z^q)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::{BigRational, Field, Rationals};
use crate::linalg;
use crate::polyseries::{Poly, PolyError, RatFun, TruncSeries};

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MahlerError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("system is singular at the origin: d(0) = 0")]
    SingularAtOrigin,
    #[error("matrix is not invertible over Q(z)")]
    NotInvertible,
    #[error("initial vector is not admissible: (A(0) − I) f0 = {residual:?}")]
    NotAdmissible { residual: Vec<String> },
    #[error("point is a singularity of the system: {0:?}")]
    Singular(Box<SingularityVerdict>),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MahlerSystem {
    q: u64,
    a: Vec<Vec<RatFun<Q>>>,
    d: Poly<Q>,
    p: Vec<Vec<Poly<Q>>>,
    det_p: Poly<Q>,
}

fn poly_lcm(a: &Poly<Q>, b: &Poly<Q>) -> Poly<Q> {
    let g = a.gcd(b);
    (a * &b.div_exact(&g).expect("gcd divides")).monic()
}

/// Determinant of a polynomial matrix by fraction-free elimination.
pub fn poly_det(m: &[Vec<Poly<Q>>]) -> Poly<Q> {
    let n = m.len();
    let mut a: Vec<Vec<Poly<Q>>> = m.to_vec();
    let mut prev = Poly::one(&Rationals);
    let mut sign = false;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Poly::zero(&Rationals);
        };
        if piv != k {
            a.swap(piv, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = v.div_exact(&prev).expect("Bareiss divisions are exact");
            }
            a[i][k] = Poly::zero(&Rationals);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

impl MahlerSystem {
    pub fn new(q: u64, a: Vec<Vec<RatFun<Q>>>) -> Result<Self, MahlerError> {
        if q < 2 {
            return Err(MahlerError::Parameter(format!("q must be >= 2, got {q}")));
        }
        let n = a.len();
        if n == 0 || a.iter().any(|row| row.len() != n) {
            return Err(MahlerError::Parameter("A must be a nonempty square matrix".into()));
        }
        let d = a.iter().flatten().fold(Poly::one(&Rationals), |l, x| poly_lcm(&l, x.den()));
        let p: Vec<Vec<Poly<Q>>> = a
            .iter()
            .map(|row| row.iter().map(|x| x.num() * &d.div_exact(x.den()).expect("lcm is a multiple")).collect())
            .collect();
        let det_p = poly_det(&p);
        if det_p.is_zero() {
            return Err(MahlerError::NotInvertible);
        }
        Ok(MahlerSystem { q, a, d, p, det_p })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<RatFun<Q>>] {
        &self.a
    }

    /// Common monic denominator `d`.
    pub fn denominator(&self) -> &Poly<Q> {
        &self.d
    }

    /// Numerator matrix `P = d A`.
    pub fn numerator(&self) -> &[Vec<Poly<Q>>] {
        &self.p
    }

    pub fn det_numerator(&self) -> &Poly<Q> {
        &self.det_p
    }

    /// `A(x)` exactly; `None` at a pole.
    pub fn eval_matrix(&self, x: &Q) -> Option<Vec<Vec<Q>>> {
        let dx = self.d.evaluate(x);
        let inv = Field::inv(&dx)?;
        Some(self.p.iter().map(|row| row.iter().map(|e| e.evaluate(x) * &inv).collect()).collect())
    }
}

/// Basis of `ker(A(0) − I)`, the admissible values of `f(0)`.
pub fn admissible_initial(sys: &MahlerSystem) -> Result<Vec<Vec<Q>>, MahlerError> {
    let zero = <Q as Zero>::zero();
    let a0 = sys.eval_matrix(&zero).ok_or(MahlerError::SingularAtOrigin)?;
    let n = sys.rank();
    let m: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { &a0[i][j] - <Q as One>::one() } else { a0[i][j].clone() }).collect())
        .collect();
    Ok(linalg::nullspace_rational(&m, n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesSolution {
    pub components: Vec<TruncSeries<Q>>,
    pub order: i64,
}

impl SeriesSolution {
    /// Coefficient `m` of every component.
    pub fn coefficient(&self, m: i64) -> Vec<Q> {
        self.components.iter().map(|s| s.coeff(m).expect("below order")).collect()
    }
}

/// The unique solution with `f(0) = f0`, to order `N`.
///
/// Coefficient recursion for `m ≥ 1`:
/// `d_0 f_m = Σ_k P_k g_{m−k} − Σ_{k≥1} d_k f_{m−k}`, where `g_j = f_{j/q}`
/// when `q | j` and 0 otherwise. Every `g_j` on the right has `j ≤ m`, so it
/// refers to `f_{j/q}` with `j/q ≤ m/q < m`: the recursion only uses
/// already-computed coefficients. `d_0 ≠ 0` is the only hypothesis.
pub fn solve_series(sys: &MahlerSystem, f0: &[Q], order: usize) -> Result<SeriesSolution, MahlerError> {
    let n = sys.rank();
    if f0.len() != n {
        return Err(MahlerError::Parameter(format!("initial vector has length {}, expected {n}", f0.len())));
    }
    let zero = <Q as Zero>::zero();
    let a0 = sys.eval_matrix(&zero).ok_or(MahlerError::SingularAtOrigin)?;
    let residual: Vec<Q> =
        (0..n).map(|i| (0..n).fold(-&f0[i], |acc, j| acc + &a0[i][j] * &f0[j])).collect();
    if residual.iter().any(|r| !Zero::is_zero(r)) {
        return Err(MahlerError::NotAdmissible { residual: residual.iter().map(ToString::to_string).collect() });
    }
    let d0_inv = Field::inv(&sys.d.coeff(0)).expect("checked by eval_matrix");
    let q = sys.q as usize;
    let mut f: Vec<Vec<Q>> = Vec::with_capacity(order);
    if order > 0 {
        f.push(f0.to_vec());
    }
    for m in 1..order {
        let mut rhs = vec![zero.clone(); n];
        // Σ_k P_k g_{m−k}: only j = m − k divisible by q contributes
        for j in (0..=m).step_by(q) {
            let k = m - j;
            let gj = &f[j / q];
            for (i, row) in sys.p.iter().enumerate() {
                for (l, e) in row.iter().enumerate() {
                    if k < e.coeffs().len() && !Zero::is_zero(&gj[l]) {
                        rhs[i] += &e.coeffs()[k] * &gj[l];
                    }
                }
            }
        }
        for (k, dk) in sys.d.coeffs().iter().enumerate().skip(1).take(m) {
            if Zero::is_zero(dk) {
                continue;
            }
            for i in 0..n {
                rhs[i] -= dk * &f[m - k][i];
            }
        }
        f.push(rhs.into_iter().map(|x| x * &d0_inv).collect());
    }
    let components = (0..n)
        .map(|i| TruncSeries::from_coeffs(&Rationals, 0, f.iter().map(|c| c[i].clone()).collect(), order as i64))
        .collect();
    Ok(SeriesSolution { components, order: order as i64 })
}

/// `d(z) f(z) − P(z) f(z^q)` by independent series multiplication.
pub fn residual(sys: &MahlerSystem, sol: &SeriesSolution) -> Result<Vec<TruncSeries<Q>>, MahlerError> {
    let n = sys.rank();
    let order = sol.order;
    let d = TruncSeries::from_poly(&sys.d, order);
    let fq: Vec<TruncSeries<Q>> =
        sol.components.iter().map(|s| s.compose_power(sys.q, Some(order))).collect::<Result<_, _>>()?;
    Ok((0..n)
        .map(|i| {
            let mut acc = &d * &sol.components[i];
            for (l, e) in sys.p[i].iter().enumerate() {
                acc = &acc - &(&TruncSeries::from_poly(e, order) * &fq[l]);
            }
            acc
        })
        .collect())
}

/// Which side the orbit point is a pole of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleKind {
    /// `d(α^{q^r}) = 0`.
    APole,
    /// `det P(α^{q^r}) = 0`.
    AInversePole,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityVerdict {
    pub singular: bool,
    /// `(r, kind)` for the first orbit point that hits.
    pub witness: Option<(u64, PoleKind)>,
    /// Every nonzero root of `d` and `det P` has modulus at least this.
    pub scan_bound: Q,
    /// Orbit points tested.
    pub steps: u64,
}

/// `1 / (1 + max_i |c_i| / |c_0|)` after removing the power of `z`: a lower
/// bound on the modulus of every nonzero root. `None` for monomials.
pub fn root_modulus_lower_bound(f: &Poly<Q>) -> Option<Q> {
    let v = f.valuation()?;
    let c = &f.coeffs()[v..];
    if c.len() == 1 {
        return None;
    }
    let c0 = c[0].abs();
    let max = c[1..].iter().map(Signed::abs).max().expect("at least two terms");
    Some((<Q as One>::one() + max / c0).recip())
}

/// Scans `α, α^q, α^{q²}, …` for zeros of `d` or `det P`, stopping once the
/// orbit drops below the exact root bound (no later point can hit).
pub fn singularity_check(sys: &MahlerSystem, alpha: &Q) -> Result<SingularityVerdict, MahlerError> {
    if Zero::is_zero(alpha) || alpha.abs() >= <Q as One>::one() {
        return Err(MahlerError::Parameter(format!("need 0 < |α| < 1, got {alpha}")));
    }
    let bounds: Vec<Q> = [&sys.d, &sys.det_p].iter().filter_map(|f| root_modulus_lower_bound(f)).collect();
    let Some(bound) = bounds.into_iter().min() else {
        // both polynomials are monomials: no nonzero roots at all
        return Ok(SingularityVerdict { singular: false, witness: None, scan_bound: <Q as One>::one(), steps: 0 });
    };
    let mut x = alpha.clone();
    let mut r = 0u64;
    loop {
        if x.abs() < bound {
            return Ok(SingularityVerdict { singular: false, witness: None, scan_bound: bound, steps: r });
        }
        let hit = if Zero::is_zero(&sys.d.evaluate(&x)) {
            Some(PoleKind::APole)
        } else if Zero::is_zero(&sys.det_p.evaluate(&x)) {
            Some(PoleKind::AInversePole)
        } else {
            None
        };
        if let Some(kind) = hit {
            return Ok(SingularityVerdict { singular: true, witness: Some((r, kind)), scan_bound: bound, steps: r + 1 });
        }
        x = pow_q(&x, sys.q);
        r += 1;
    }
}

fn pow_q(x: &Q, q: u64) -> Q {
    let e = q as u32;
    Q::new_raw(x.numer().pow(e), x.denom().pow(e))
}

/// A value with a two-sided error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValue {
    pub value: f64,
    pub error: f64,
}

fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(0.0)
}

fn telescoped(sys: &MahlerSystem, sol: &SeriesSolution, alpha: &Q, steps: u32) -> Result<Vec<f64>, MahlerError> {
    let n = sys.rank();
    let mut prod: Vec<Vec<Q>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { <Q as One>::one() } else { <Q as Zero>::zero() }).collect()).collect();
    let mut x = alpha.clone();
    for _ in 0..steps {
        let a = sys.eval_matrix(&x).ok_or_else(|| PolyError::Pole(x.to_string()))?;
        prod = (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(<Q as Zero>::zero(), |acc, k| acc + &prod[i][k] * &a[k][j])).collect())
            .collect();
        x = pow_q(&x, sys.q);
    }
    let xf = to_f64(&x);
    let tail: Vec<f64> = sol
        .components
        .iter()
        .map(|s| s.coeffs().iter().rev().fold(0.0, |acc, c| acc * xf + to_f64(c)) * xf.powi(s.valuation() as i32))
        .collect();
    Ok((0..n).map(|i| (0..n).map(|j| to_f64(&prod[i][j]) * tail[j]).sum()).collect())
}

/// `f(α) = [Π_{r<R} A(α^{q^r})] f(α^{q^R})`: the product exactly, the tail
/// from the truncated series in `f64`. The error estimate is
/// `|result_R − result_{R+1}| + |α|^{q^R N} · max_{1≤k<N} |f_k| · N`.
pub fn evaluate_at_point(sys: &MahlerSystem, sol: &SeriesSolution, alpha: &Q, steps: u32) -> Result<Vec<PointValue>, MahlerError> {
    let verdict = singularity_check(sys, alpha)?;
    if verdict.singular {
        return Err(MahlerError::Singular(Box::new(verdict)));
    }
    let r0 = telescoped(sys, sol, alpha, steps)?;
    let r1 = telescoped(sys, sol, alpha, steps + 1)?;
    let n_terms = sol.order as f64;
    let a = to_f64(&alpha.abs());
    let exponent = (sys.q as f64).powi(steps as i32) * n_terms;
    let decay = a.powf(exponent);
    Ok((0..sys.rank())
        .map(|i| {
            let max = (1..sol.order)
                .map(|k| to_f64(&sol.components[i].coeff(k).expect("below order")).abs())
                .fold(0.0, f64::max);
            let tail = if max == 0.0 { 0.0 } else { decay * max * n_terms };
            PointValue { value: r0[i], error: (r0[i] - r1[i]).abs() + tail }
        })
        .collect())
}

/// Integer coefficients with the same roots (denominators cleared).
pub fn integer_coefficients(f: &Poly<Q>) -> Vec<BigInt> {
    let l = f.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    f.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect()
}
