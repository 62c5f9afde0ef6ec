//! Polynomial relations with rational coefficients among truncated power
//! series, found as the kernel of the "evaluate every monomial" map.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::{BigRational, Field, Rationals};
use crate::linalg;
use crate::par::{self, Execution};
use crate::polyseries::TruncSeries;

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("no input series")]
    Empty,
    #[error("series {index} is known only to order {have}, need {need}")]
    Precision { index: usize, have: i64, need: i64 },
    #[error("series {0} has negative valuation; relations are sought among power series")]
    Laurent(usize),
    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("orders must be increasing")]
    Orders,
}

/// A polynomial in `X_first, X_{first+1}, …` with rational coefficients.
/// `first` is 1, or 0 when `X0 = z` has been adjoined.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationPoly {
    nvars: usize,
    first: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

/// Graded-lexicographic key: total degree first, then exponents.
fn grlex_key(e: &[u32]) -> (u32, Vec<u32>) {
    (e.iter().sum(), e.to_vec())
}

impl RelationPoly {
    pub fn new(nvars: usize, first: usize, terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        let terms = terms
            .into_iter()
            .filter(|(e, c)| {
                assert_eq!(e.len(), nvars, "exponent length");
                !Zero::is_zero(c)
            })
            .collect();
        RelationPoly { nvars, first, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Terms from the largest monomial down.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|t| std::cmp::Reverse(grlex_key(t.0)));
        v
    }

    /// Exact value at a point.
    pub fn eval_exact(&self, values: &[Q]) -> Q {
        self.terms.iter().fold(<Q as Zero>::zero(), |acc, (e, c)| {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(e) {
                for _ in 0..k {
                    t *= v;
                }
            }
            acc + t
        })
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * values.iter().zip(e).map(|(v, &k)| v.powi(k as i32)).product::<f64>())
            .sum()
    }

    /// `P(f_1, …, f_n)` by expanding every monomial as a plain product of
    /// the series, independent of the cached powers used by the solver.
    pub fn eval_series(&self, series: &[TruncSeries<Q>], order: i64) -> TruncSeries<Q> {
        let mut acc = TruncSeries::zero(&Rationals, order);
        for (e, c) in &self.terms {
            let mut m = TruncSeries::one(&Rationals, order);
            for (s, &k) in series.iter().zip(e) {
                for _ in 0..k {
                    m = &m * s;
                }
            }
            acc = &acc + &m.truncate(order).scale(c);
        }
        acc
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.sorted_terms() {
            let neg = Signed::is_negative(c);
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("X{}", i + self.first) } else { format!("X{}^{k}", i + self.first) })
                .collect();
            let body = match (vars.is_empty(), Field::is_one(&mag)) {
                (true, _) => mag.to_string(),
                (false, true) => vars.join("*"),
                (false, false) => format!("{}*{}", mag, vars.join("*")),
            };
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for RelationPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationBasis {
    pub degree: u32,
    pub order: i64,
    pub monomial_count: usize,
    pub rank: usize,
    pub basis: Vec<RelationPoly>,
    /// Set when `N ≤` monomial count: kernel vectors may be truncation
    /// artifacts.
    pub warning: Option<String>,
}

impl RelationBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn under_determined(&self) -> bool {
        self.warning.is_some()
    }
}

/// All exponent vectors with total degree `≤ d`, largest first in graded
/// lexicographic order.
pub fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=budget {
            prefix.push(k);
            rec(prefix, left - 1, budget - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), nvars, d, &mut out);
    out.sort_by_key(|e| std::cmp::Reverse(grlex_key(e)));
    out
}

/// `C(n + d, d)`.
pub fn monomial_count(nvars: usize, d: u32) -> usize {
    let mut c: u128 = 1;
    for i in 1..=d as u128 {
        c = c * (nvars as u128 + i) / i;
    }
    c as usize
}

/// Prepends the series `z` (known to `order`) as variable `X0`.
pub fn with_z_variable(series: &[TruncSeries<Q>], order: i64) -> Vec<TruncSeries<Q>> {
    let mut out = vec![TruncSeries::monomial(<Q as One>::one(), 1, order)];
    out.extend_from_slice(series);
    out
}

/// Relations of total degree `≤ d` holding modulo `z^N`.
pub fn find_relations(series: &[TruncSeries<Q>], d: u32, order: i64) -> Result<RelationBasis, RelationError> {
    find_relations_with(series, d, order, false, Execution::default())
}

/// As [`find_relations`]; with `adjoin_z`, `series[0]` is taken to be `z`
/// and variables are named from `X0`.
pub fn find_relations_with(
    series: &[TruncSeries<Q>],
    d: u32,
    order: i64,
    adjoin_z: bool,
    exec: Execution,
) -> Result<RelationBasis, RelationError> {
    if series.is_empty() {
        return Err(RelationError::Empty);
    }
    for (i, s) in series.iter().enumerate() {
        if s.order() < order {
            return Err(RelationError::Precision { index: i, have: s.order(), need: order });
        }
        if s.valuation() < 0 {
            return Err(RelationError::Laurent(i));
        }
    }
    let n = series.len();
    let monos = monomials(n, d);
    let count = monos.len();

    // powers[i][k] = f_i^k mod z^N
    let powers: Vec<Vec<TruncSeries<Q>>> = series
        .iter()
        .map(|s| {
            let s = s.truncate(order);
            let mut v = vec![TruncSeries::one(&Rationals, order)];
            for k in 1..=d as usize {
                let next = &v[k - 1] * &s;
                v.push(next.truncate(order));
            }
            v
        })
        .collect();

    let columns: Vec<Vec<Q>> = par::map(exec, &monos, |e| {
        let mut m = TruncSeries::one(&Rationals, order);
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                m = (&m * &powers[i][k as usize]).truncate(order);
            }
        }
        (0..order).map(|j| m.coeff(j).unwrap_or_else(<Q as Zero>::zero)).collect()
    });
    let rows: Vec<Vec<Q>> = (0..order as usize).map(|j| columns.iter().map(|c| c[j].clone()).collect()).collect();
    let kernel = linalg::nullspace_rational(&rows, count);
    let first = if adjoin_z { 0 } else { 1 };
    let basis: Vec<RelationPoly> = kernel
        .into_iter()
        .map(|v| RelationPoly::new(n, first, monos.iter().cloned().zip(v)))
        .collect();
    let warning = (order as usize <= count).then(|| {
        format!("under-determined: order {order} does not exceed the monomial count {count}; relations may be truncation artifacts")
    });
    Ok(RelationBasis { degree: d, order, monomial_count: count, rank: count - basis.len(), basis, warning })
}

/// A value substituted for a variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Q),
    Float(f64),
}

impl Value {
    fn as_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Value::Float(x) => *x,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Residual {
    Exact(Q),
    Float(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Specialization {
    pub holds: bool,
    pub residual: Residual,
}

/// `P(values)`: exact when every value is rational (must be exactly 0),
/// otherwise in `f64` against `tol`.
pub fn specialize_check(p: &RelationPoly, values: &[Value], tol: f64) -> Result<Specialization, RelationError> {
    if values.len() != p.nvars() {
        return Err(RelationError::Arity { expected: p.nvars(), got: values.len() });
    }
    let exact: Option<Vec<Q>> = values
        .iter()
        .map(|v| match v {
            Value::Exact(q) => Some(q.clone()),
            Value::Float(_) => None,
        })
        .collect();
    Ok(match exact {
        Some(vals) => {
            let r = p.eval_exact(&vals);
            Specialization { holds: Zero::is_zero(&r), residual: Residual::Exact(r) }
        }
        None => {
            let r = p.eval_f64(&values.iter().map(Value::as_f64).collect::<Vec<_>>());
            Specialization { holds: r.abs() <= tol, residual: Residual::Float(r) }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityEntry {
    pub order: i64,
    pub dimension: usize,
    pub under_determined: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub entries: Vec<StabilityEntry>,
    /// Smallest order from which the dimension no longer changes.
    pub stabilized_at: Option<i64>,
    /// Relations at the largest order; `true` if also in the basis at the
    /// second-largest order (bases are reduced, so "up to scaling" is
    /// equality).
    pub relations: Vec<(RelationPoly, bool)>,
}

pub fn stability_scan(series: &[TruncSeries<Q>], d: u32, orders: &[i64]) -> Result<StabilityReport, RelationError> {
    if orders.is_empty() || orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(RelationError::Orders);
    }
    let bases: Vec<RelationBasis> = orders.iter().map(|&n| find_relations(series, d, n)).collect::<Result<_, _>>()?;
    let entries: Vec<StabilityEntry> = bases
        .iter()
        .map(|b| StabilityEntry { order: b.order, dimension: b.dimension(), under_determined: b.under_determined() })
        .collect();
    let last = entries.last().expect("nonempty").dimension;
    let stabilized_at = entries.iter().rev().take_while(|e| e.dimension == last).last().map(|e| e.order);
    let top = bases.last().expect("nonempty");
    let prev = bases.len().checked_sub(2).map(|i| &bases[i]);
    let relations = top.basis.iter().map(|r| (r.clone(), prev.is_some_and(|b| b.basis.contains(r)))).collect();
    Ok(StabilityReport { entries, stabilized_at, relations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyseries::{Poly, RatFun};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(v: i64) -> Q {
        Q::from_integer(v.into())
    }

    fn geometric(order: i64) -> (TruncSeries<Q>, TruncSeries<Q>) {
        let f1 = RatFun::normalize(Poly::<Q>::from_i64s(&Rationals, &[1]), Poly::from_i64s(&Rationals, &[1, -1])).unwrap();
        let f2 = f1.pow(2);
        (TruncSeries::from_ratfun(&f1, order), TruncSeries::from_ratfun(&f2, order))
    }

    #[test]
    fn square_relation() {
        let (f1, f2) = geometric(32);
        let b = find_relations(&[f1.clone(), f2.clone()], 2, 32).unwrap();
        assert_eq!(b.dimension(), 1);
        assert_eq!(b.basis[0].to_string(), "X1^2 - X2");
        assert!(b.warning.is_none());
        assert!(b.basis[0].eval_series(&[f1.clone(), f2.clone()], 32).is_zero());
        assert!(find_relations(&[f1, f2], 1, 32).unwrap().basis.is_empty());
        let zero = TruncSeries::zero(&Rationals, 8);
        let b = find_relations(&[zero], 1, 8).unwrap();
        assert_eq!(b.basis.iter().map(ToString::to_string).collect::<Vec<_>>(), vec!["X1"]);
    }

    #[test]
    fn monomial_order_and_count() {
        let m = monomials(2, 2);
        assert_eq!(m, vec![vec![2, 0], vec![1, 1], vec![0, 2], vec![1, 0], vec![0, 1], vec![0, 0]]);
        for (n, d) in [(1, 3), (2, 2), (3, 3), (4, 2)] {
            assert_eq!(monomials(n, d).len(), monomial_count(n, d));
        }
    }

    #[test]
    fn specialize() {
        let (f1, f2) = geometric(32);
        let p = find_relations(&[f1, f2], 2, 32).unwrap().basis.remove(0);
        let s = specialize_check(&p, &[Value::Exact(q(2)), Value::Exact(q(4))], 0.0).unwrap();
        assert_eq!(s, Specialization { holds: true, residual: Residual::Exact(q(0)) });
        let s = specialize_check(&p, &[Value::Float(2.0000001), Value::Float(4.0)], 1e-12).unwrap();
        assert!(!s.holds);
        let Residual::Float(r) = s.residual else { panic!() };
        assert!((r - 4e-7).abs() < 1e-9);
        let x1 = RelationPoly::new(1, 1, [(vec![1], q(1))]);
        assert!(specialize_check(&x1, &[Value::Exact(q(0))], 0.0).unwrap().holds);
        assert!(specialize_check(&x1, &[], 0.0).is_err());
    }

    #[test]
    fn stability() {
        let (f1, f2) = geometric(64);
        let r = stability_scan(&[f1, f2], 2, &[8, 16, 32]).unwrap();
        assert_eq!(r.entries.iter().map(|e| e.dimension).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert_eq!(r.stabilized_at, Some(8));
        assert!(r.relations.iter().all(|(_, s)| *s));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rand_series = |rng: &mut ChaCha8Rng| {
            TruncSeries::from_coeffs(&Rationals, 0, (0..64).map(|_| q(rng.random_range(-5..=5))).collect(), 64)
        };
        let (a, b) = (rand_series(&mut rng), rand_series(&mut rng));
        assert_eq!(find_relations(&[a, b], 2, 64).unwrap().dimension(), 0);

        let z = TruncSeries::monomial(q(1), 1, 4);
        assert!(find_relations(&[z], 3, 4).unwrap().under_determined());
    }

    #[test]
    fn z_adjunction() {
        // f = 1/(1-z) satisfies (1 - z) f - 1 = 0, i.e. X1 - X0*X1 - 1
        let (f1, _) = geometric(24);
        let s = with_z_variable(&[f1], 24);
        let b = find_relations_with(&s, 2, 24, true, Execution::Sequential).unwrap();
        assert!(b.basis.iter().any(|r| r.to_string() == "X0*X1 - X1 + 1"), "{:?}", b.basis.iter().map(|r| r.to_string()).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_laurent_and_short_series() {
        let s = TruncSeries::monomial(q(1), -1, 10);
        assert_eq!(find_relations(&[s], 1, 8), Err(RelationError::Laurent(0)));
        let s = TruncSeries::one(&Rationals, 4);
        assert!(matches!(find_relations(&[s], 1, 8), Err(RelationError::Precision { .. })));
    }

    #[test]
    fn scaling_invariance() {
        let (f1, f2) = geometric(32);
        let base = find_relations(&[f1.clone(), f2.clone()], 2, 32).unwrap();
        let (c1, c2) = (Q::new(3.into(), 2.into()), q(-5));
        let scaled = find_relations(&[f1.scale(&c1), f2.scale(&c2)], 2, 32).unwrap();
        assert_eq!(base.dimension(), scaled.dimension());
        // X1^2 - X2 becomes X1^2/c1^2 - X2/c2, normalized to leading 1
        let expect = RelationPoly::new(2, 1, [(vec![2, 0], q(1)), (vec![0, 1], -(&c1 * &c1) / &c2)]);
        assert_eq!(scaled.basis[0], expect);
    }

    #[test]
    fn deterministic_across_execution() {
        let (f1, f2) = geometric(40);
        let f3 = f1.compose_power(2, Some(40)).unwrap();
        let s = [f1, f2, f3];
        let a = find_relations_with(&s, 3, 40, false, Execution::Sequential).unwrap();
        let b = find_relations_with(&s, 3, 40, false, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        for r in &a.basis {
            assert!(r.eval_series(&s, 40).is_zero());
        }
    }

    #[test]
    fn rank_matches_plain_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=3usize {
            for d in 1..=3u32 {
                let series: Vec<TruncSeries<Q>> = (0..n)
                    .map(|_| {
                        let deg = rng.random_range(0..3);
                        TruncSeries::from_coeffs(&Rationals, 0, (0..=deg).map(|_| q(rng.random_range(-3..=3))).collect(), 30)
                    })
                    .collect();
                let b = find_relations(&series, d, 30).unwrap();
                let monos = monomials(n, d);
                let rows: Vec<Vec<Q>> = (0..30)
                    .map(|j| {
                        monos
                            .iter()
                            .map(|e| {
                                let p = RelationPoly::new(n, 1, [(e.clone(), q(1))]);
                                p.eval_series(&series, 30).coeff(j).unwrap()
                            })
                            .collect()
                    })
                    .collect();
                let rank = linalg::rank(&Rationals, &rows);
                assert_eq!(b.rank, rank);
                assert_eq!(b.dimension(), monos.len() - rank);
            }
        }
    }
}
