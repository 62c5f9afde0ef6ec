//! Hasse–Schmidt iterative derivations on `k[t]`, `k(t)` and truncated
//! `k((t))`.
//!
//! The canonical family is `∂_i(t^k) = C(k, i) t^(k-i)`, extended linearly.
//! On rational functions the unique extension is obtained by solving the
//! triangular system that Leibniz gives for `(f/g) * g = f`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactnum::{digits, Field};
use crate::par::{self, Execution};
use crate::polyseries::{Poly, PolyError, RatFun, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HasseError {
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("p-power constant mismatch for n = {n}: computed {computed}, factorial product {expected}")]
    ConstantMismatch { n: u64, computed: String, expected: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Anything the derivations act on.
pub trait HasseCarrier: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    type Scalar: Field;

    fn scalar_ctx(&self) -> <Self::Scalar as Field>::Ctx;

    /// `∂_i(self)`.
    fn hasse(&self, i: u64) -> Result<Self, HasseError>;

    /// `∂_0(self), …, ∂_imax(self)`. Carriers where the higher terms are
    /// computed recursively override this to share work.
    fn hasse_upto(&self, imax: u64) -> Result<Vec<Self>, HasseError> {
        (0..=imax).map(|i| self.hasse(i)).collect()
    }

    fn scale_by(&self, c: &Self::Scalar) -> Self;

    /// Equality in the carrier; for series, agreement up to the common order.
    fn same(&self, other: &Self) -> bool {
        self == other
    }

    fn is_zero_elem(&self) -> bool;
}

fn poly_hasse<F: Field>(f: &Poly<F>, i: u64) -> Poly<F> {
    let ctx = f.ctx();
    let i = i as usize;
    if f.coeffs().len() <= i {
        return Poly::zero(ctx);
    }
    let coeffs = f.coeffs()[i..]
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if c.is_zero() {
                F::zero(ctx)
            } else {
                c.mul(&F::binomial(ctx, (j + i) as i64, i as u64))
            }
        })
        .collect();
    Poly::from_coeffs(ctx, coeffs)
}

impl<F: Field> HasseCarrier for Poly<F> {
    type Scalar = F;

    fn scalar_ctx(&self) -> F::Ctx {
        self.ctx().clone()
    }
    fn hasse(&self, i: u64) -> Result<Self, HasseError> {
        Ok(poly_hasse(self, i))
    }
    fn scale_by(&self, c: &F) -> Self {
        self.scale(c)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

/// `∂_0 … ∂_imax` of `f/g` through the numerators `N_j` with
/// `∂_j(f/g) = N_j / g^(j+1)`:
///
/// `N_i = g^i ∂_i(f) − Σ_{j<i} N_j g^(i−1−j) ∂_{i−j}(g)`.
fn ratfun_hasse_upto<F: Field>(h: &RatFun<F>, imax: u64) -> Result<Vec<RatFun<F>>, HasseError> {
    let (f, g) = (h.num(), h.den());
    let ctx = h.ctx();
    if g.is_one() {
        return Ok((0..=imax).map(|i| RatFun::from_poly(poly_hasse(f, i))).collect());
    }
    let dg: Vec<Poly<F>> = (0..=imax).map(|i| poly_hasse(g, i)).collect();
    let mut gpow = vec![Poly::one(ctx)];
    for k in 1..=imax as usize + 1 {
        gpow.push(&gpow[k - 1] * g);
    }
    let mut nums: Vec<Poly<F>> = Vec::with_capacity(imax as usize + 1);
    let mut out = Vec::with_capacity(imax as usize + 1);
    for i in 0..=imax as usize {
        let mut n = &gpow[i] * &poly_hasse(f, i as u64);
        for (j, nj) in nums.iter().enumerate() {
            if dg[i - j].is_zero() || nj.is_zero() {
                continue;
            }
            n = &n - &(&(nj * &gpow[i - 1 - j]) * &dg[i - j]);
        }
        out.push(RatFun::normalize(n.clone(), gpow[i + 1].clone())?);
        nums.push(n);
    }
    Ok(out)
}

/// Fast path for `c t^k`-sums with a pure power denominator: termwise with
/// generalized binomials `C(e, i)`, `e < 0` allowed.
fn laurent_hasse<F: Field>(h: &RatFun<F>, i: u64) -> Option<RatFun<F>> {
    let den = h.den();
    let shift = den.degree()?;
    if den.coeffs().len() != 1 + shift || !den.coeff(shift).is_one() || den.coeffs()[..shift].iter().any(|c| !c.is_zero())
    {
        return None;
    }
    let ctx = h.ctx();
    let mut acc = RatFun::zero(ctx);
    for (k, c) in h.num().coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = k as i64 - shift as i64;
        let b = F::binomial(ctx, e, i);
        if !b.is_zero() {
            acc = &acc + &RatFun::monomial(c.mul(&b), e - i as i64);
        }
    }
    Some(acc)
}

impl<F: Field> HasseCarrier for RatFun<F> {
    type Scalar = F;

    fn scalar_ctx(&self) -> F::Ctx {
        self.ctx().clone()
    }
    fn hasse(&self, i: u64) -> Result<Self, HasseError> {
        if let Some(r) = laurent_hasse(self, i) {
            return Ok(r);
        }
        Ok(ratfun_hasse_upto(self, i)?.pop().expect("nonempty"))
    }
    fn hasse_upto(&self, imax: u64) -> Result<Vec<Self>, HasseError> {
        if laurent_hasse(self, 0).is_some() {
            return (0..=imax).map(|i| self.hasse(i)).collect();
        }
        ratfun_hasse_upto(self, imax)
    }
    fn scale_by(&self, c: &F) -> Self {
        self.scale(c)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

/// General rational functions always through the triangular system, for
/// cross-checking the Laurent fast path.
pub fn ratfun_hasse_triangular<F: Field>(h: &RatFun<F>, i: u64) -> Result<RatFun<F>, HasseError> {
    Ok(ratfun_hasse_upto(h, i)?.pop().expect("nonempty"))
}

impl<F: Field> HasseCarrier for TruncSeries<F> {
    type Scalar = F;

    fn scalar_ctx(&self) -> F::Ctx {
        self.ctx().clone()
    }
    /// Termwise; the output is known modulo `t^(N−i)`.
    fn hasse(&self, i: u64) -> Result<Self, HasseError> {
        let order = self.order();
        if i as i64 >= order {
            return Err(HasseError::InsufficientPrecision(format!("∂_{i} needs order > {i}, series known mod t^{order}")));
        }
        let ctx = self.ctx();
        let ii = i as i64;
        let start = self.valuation();
        let coeffs = self
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if c.is_zero() {
                    F::zero(ctx)
                } else {
                    c.mul(&F::binomial(ctx, start + k as i64, i))
                }
            })
            .collect();
        Ok(TruncSeries::from_coeffs(ctx, start - ii, coeffs, order - ii))
    }
    fn scale_by(&self, c: &F) -> Self {
        self.scale(c)
    }
    fn same(&self, other: &Self) -> bool {
        self.agrees_with(other)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

/// `∂_i f`.
pub fn hasse_apply<C: HasseCarrier>(i: u64, f: &C) -> Result<C, HasseError> {
    f.hasse(i)
}

/// `(∂_i(∂_j f), C(i+j, i) ∂_{i+j} f)`, computed independently.
pub fn hasse_compose<C: HasseCarrier>(i: u64, j: u64, f: &C) -> Result<(C, C), HasseError> {
    let ctx = f.scalar_ctx();
    let lhs = f.hasse(j)?.hasse(i)?;
    let b = C::Scalar::binomial(&ctx, (i + j) as i64, i);
    let rhs = f.hasse(i + j)?.scale_by(&b);
    Ok((lhs, rhs))
}

/// The composite `∂_1^{a_0} ∘ ∂_p^{a_1} ∘ … ∘ ∂_{p^m}^{a_m}` for
/// `n = Σ a_m p^m`, innermost (highest power) first.
pub fn p_power_composite<C: HasseCarrier>(n: u64, p: u64, f: &C) -> Result<C, HasseError> {
    let ds = digits(n, p);
    let mut cur = f.clone();
    for (m, &a) in ds.iter().enumerate().rev() {
        let pm = p.pow(m as u32);
        for _ in 0..a {
            cur = cur.hasse(pm)?;
        }
    }
    Ok(cur)
}

/// The scalar `c` with `composite = c ∂_n`, read off from `t^n` (where
/// `∂_n t^n = 1`), together with the factorial product `Π a_m!`.
pub fn p_power_constant<F: Field>(ctx: &F::Ctx, n: u64) -> Result<(F, F), HasseError> {
    let p = F::characteristic(ctx);
    if p == 0 {
        return Err(HasseError::Unsupported("p-power reconstruction needs characteristic p".into()));
    }
    let tn = Poly::monomial(F::one(ctx), n as usize);
    let composite = p_power_composite(n, p, &tn)?;
    let computed = if composite.is_zero() { F::zero(ctx) } else { composite.coeff(0) };
    debug_assert!(composite.degree().unwrap_or(0) == 0);
    let mut expected = F::one(ctx);
    for a in digits(n, p) {
        for k in 2..=a {
            expected = expected.mul(&F::from_i64(ctx, k as i64));
        }
    }
    Ok((computed, expected))
}

/// `∂_n f` rebuilt from the p-th power maps, divided by the computed
/// constant `c`. Errors if `c` disagrees with `Π a_m!` or is zero.
pub fn hasse_from_p_powers<C: HasseCarrier>(n: u64, p: u64, f: &C) -> Result<C, HasseError> {
    let ctx = f.scalar_ctx();
    let ch = C::Scalar::characteristic(&ctx);
    if ch == 0 {
        return Err(HasseError::Unsupported("p-power reconstruction needs characteristic p".into()));
    }
    if ch != p {
        return Err(HasseError::Unsupported(format!("carrier has characteristic {ch}, not {p}")));
    }
    let (c, expected) = p_power_constant::<C::Scalar>(&ctx, n)?;
    if c != expected || c.is_zero() {
        return Err(HasseError::ConstantMismatch { n, computed: c.to_string(), expected: expected.to_string() });
    }
    let inv = c.inv().expect("checked nonzero");
    Ok(p_power_composite(n, p, f)?.scale_by(&inv))
}

/// `∂_i f = 0` for all `1 ≤ i ≤ bound`. For truncated series this only
/// speaks about the known coefficients (indices past the order are skipped).
pub fn is_constant<C: HasseCarrier>(f: &C, bound: u64) -> bool {
    (1..=bound.max(1)).all(|i| match f.hasse(i) {
        Ok(d) => d.is_zero_elem(),
        Err(_) => true,
    })
}

/// Decidable membership in the constant field for rational functions:
/// `f` is constant iff it lies in the scalars.
pub fn is_constant_exact<F: Field>(f: &RatFun<F>) -> bool {
    f.as_constant().is_some()
}

/// A bound `B` such that `is_constant(f, B)` is exact: a nonconstant
/// polynomial has `∂_deg f` equal to its leading coefficient; for a
/// fraction, total degree of numerator and denominator.
pub fn constant_bound<F: Field>(f: &RatFun<F>) -> u64 {
    let d = f.num().degree().unwrap_or(0) + f.den().degree().unwrap_or(0);
    (d as u64).max(1)
}

/// Which identity a failure broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Identity,
    Leibniz,
    Composition,
    FractionConsistency,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axiom::Identity => "identity",
            Axiom::Leibniz => "leibniz",
            Axiom::Composition => "composition",
            Axiom::FractionConsistency => "fraction",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub sample: usize,
    pub i: u64,
    pub j: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub field: String,
    pub samples: usize,
    pub bound: u64,
    pub checks: u64,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Parameters of the randomized axiom suite.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub samples: usize,
    pub max_degree: usize,
    /// Composition is checked for `i + j ≤ bound`, Leibniz for `i ≤ bound`.
    pub bound: u64,
    /// Monomials `t^k`, `k ≤ monomial_max`, also get the composition check.
    pub monomial_max: u64,
    /// Composition on `f/g` for `i + j ≤ fraction_bound` (0 disables).
    pub fraction_bound: u64,
    /// `f` and `g` are cut to this degree before forming `f/g`; over `Q`
    /// the gcd cost of the full-degree quotients dominates everything else.
    pub fraction_degree: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { samples: 200, max_degree: 10, bound: 32, monomial_max: 50, fraction_bound: 3, fraction_degree: 3, seed: 0x1d_a16 }
    }
}

/// Random polynomial with small coefficients (rational over `Q`).
pub fn random_poly<F: Field>(ctx: &F::Ctx, rng: &mut ChaCha8Rng, max_degree: usize) -> Poly<F> {
    let deg = rng.random_range(0..=max_degree);
    let coeffs = (0..=deg)
        .map(|_| {
            let num = F::from_i64(ctx, rng.random_range(-9..=9));
            let den = F::from_i64(ctx, rng.random_range(1..=4));
            match den.inv() {
                Some(d) => num.mul(&d),
                None => num,
            }
        })
        .collect();
    Poly::from_coeffs(ctx, coeffs)
}

fn check_sample<F: Field>(ctx: &F::Ctx, cfg: &SuiteConfig, idx: usize) -> (u64, Vec<AxiomFailure>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (idx as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let f: Poly<F> = random_poly(ctx, &mut rng, cfg.max_degree);
    let g: Poly<F> = random_poly(ctx, &mut rng, cfg.max_degree);
    let mut checks = 0u64;
    let mut fails = Vec::new();
    let mut fail = |axiom, i, j, detail: String| fails.push(AxiomFailure { axiom, sample: idx, i, j, detail });

    let b = cfg.bound;
    let df: Vec<Poly<F>> = (0..=b).map(|i| poly_hasse(&f, i)).collect();
    let dg: Vec<Poly<F>> = (0..=b).map(|i| poly_hasse(&g, i)).collect();

    checks += 1;
    if df[0] != f {
        fail(Axiom::Identity, 0, 0, format!("∂_0 f = {} ≠ {}", df[0], f));
    }

    let fg = &f * &g;
    for i in 0..=b {
        checks += 1;
        let lhs = poly_hasse(&fg, i);
        let mut rhs = Poly::zero(ctx);
        for j in 0..=i {
            rhs = &rhs + &(&df[j as usize] * &dg[(i - j) as usize]);
        }
        if lhs != rhs {
            fail(Axiom::Leibniz, i, 0, format!("∂_{i}(fg) = {lhs}, convolution = {rhs}"));
        }
    }

    for i in 0..=b {
        for j in 0..=b - i {
            checks += 1;
            let lhs = poly_hasse(&df[j as usize], i);
            let rhs = df[(i + j) as usize].scale(&F::binomial(ctx, (i + j) as i64, i));
            if lhs != rhs {
                fail(Axiom::Composition, i, j, format!("∂_{i}∂_{j} f = {lhs}, C·∂_(i+j) f = {rhs}"));
            }
        }
    }

    checks += 1;
    let ff = RatFun::from_poly(f.clone());
    for i in [1u64, 2, b / 2, b] {
        checks += 1;
        match ff.hasse(i) {
            Ok(r) if r == RatFun::from_poly(df[i as usize].clone()) => {}
            other => fail(Axiom::FractionConsistency, i, 0, format!("RatFun path gave {other:?}")),
        }
    }

    let cut = |p: &Poly<F>| Poly::from_coeffs(ctx, p.coeffs().iter().take(cfg.fraction_degree + 1).cloned().collect());
    let (f, g) = (cut(&f), cut(&g));
    if cfg.fraction_bound > 0 && !g.is_zero() {
        let df: Vec<Poly<F>> = (0..=cfg.fraction_bound).map(|i| poly_hasse(&f, i)).collect();
        let dg: Vec<Poly<F>> = (0..=cfg.fraction_bound).map(|i| poly_hasse(&g, i)).collect();
        let h = RatFun::normalize(f.clone(), g.clone()).expect("nonzero denominator");
        match ratfun_hasse_upto(&h, cfg.fraction_bound) {
            Ok(dh) => {
                let fb = cfg.fraction_bound;
                for i in 0..=fb {
                    for j in 0..=fb - i {
                        checks += 1;
                        let lhs = dh[j as usize].hasse(i);
                        let rhs = dh[(i + j) as usize].scale(&F::binomial(ctx, (i + j) as i64, i));
                        if lhs.as_ref() != Ok(&rhs) {
                            fail(Axiom::Composition, i, j, format!("on f/g: {lhs:?} vs {rhs}"));
                        }
                    }
                }
                // Leibniz on (f/g) * g = f
                for i in 0..=fb {
                    checks += 1;
                    let mut s = RatFun::zero(ctx);
                    for j in 0..=i {
                        s = &s + &(&dh[j as usize] * &RatFun::from_poly(dg[(i - j) as usize].clone()));
                    }
                    if s != RatFun::from_poly(df[i as usize].clone()) {
                        fail(Axiom::Leibniz, i, 0, format!("on (f/g)·g: {s}"));
                    }
                }
            }
            Err(e) => fail(Axiom::FractionConsistency, 0, 0, e.to_string()),
        }
    }
    (checks, fails)
}

fn check_monomial<F: Field>(ctx: &F::Ctx, cfg: &SuiteConfig, k: u64) -> (u64, Vec<AxiomFailure>) {
    let t = Poly::monomial(F::one(ctx), k as usize);
    let mut checks = 0;
    let mut fails = Vec::new();
    for i in 0..=cfg.bound {
        for j in 0..=cfg.bound - i {
            checks += 1;
            let (l, r) = hasse_compose(i, j, &t).expect("polynomials never lose precision");
            if l != r {
                fails.push(AxiomFailure {
                    axiom: Axiom::Composition,
                    sample: usize::MAX - k as usize,
                    i,
                    j,
                    detail: format!("on t^{k}: {l} vs {r}"),
                });
            }
        }
    }
    (checks, fails)
}

/// Randomized check of axioms (1)–(3) plus fraction consistency over one
/// field. Samples are independent and run through [`par::map_range`].
pub fn axiom_suite<F: Field>(ctx: &F::Ctx, cfg: &SuiteConfig, exec: Execution) -> AxiomReport {
    let per_sample = par::map_range(exec, cfg.samples, |idx| check_sample::<F>(ctx, cfg, idx));
    let per_mono = par::map_range(exec, cfg.monomial_max as usize + 1, |k| check_monomial::<F>(ctx, cfg, k as u64));
    let mut checks = 0;
    let mut failures = Vec::new();
    for (c, f) in per_sample.into_iter().chain(per_mono) {
        checks += c;
        failures.extend(f);
    }
    let ch = F::characteristic(ctx);
    AxiomReport {
        field: if ch == 0 { "Q".into() } else { format!("F_{ch}") },
        samples: cfg.samples,
        bound: cfg.bound,
        checks,
        failures,
    }
}

/// Simplicity witness: `∂_deg(f) f` has constant term the leading coefficient.
pub fn simplicity_witness<F: Field>(f: &Poly<F>) -> Option<(F, F)> {
    let d = f.degree()?;
    let top = poly_hasse(f, d as u64);
    Some((top.coeff(0), f.leading().expect("nonzero").clone()))
}
