//! Iterative differential modules over `F_p(t)`.
//!
//! A module is given by the matrices `A_n` of `∇_{p^n}` on a basis
//! (`0 ≤ n ≤ m`). Writing `H_i` for the matrix of `∇_i` on the basis, the
//! connection on a vector of series is
//!
//! `∇_i(v) = Σ_{j+j'=i} H_{j'} ∂_j(v)`
//!
//! with `H_0 = I`, `H_{p^n} = A_n`, and every other `H_i` obtained from the
//! digit composite `∇_1^{a_0} ∘ … ∘ ∇_{p^m}^{a_m}` divided by the same
//! constant `c` as for scalar derivations. Whether the resulting family
//! satisfies the axioms is not assumed: [`check_iterative`] tests it.

use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactnum::{digits, Field, PrimeFieldElem, PrimeModulus};
use crate::hasse::{hasse_apply, p_power_constant, HasseCarrier, HasseError};
use crate::linalg;
use crate::par::{self, Execution};
use crate::polyseries::{Poly, PolyError, RatFun, TruncSeries};

type Fp = PrimeFieldElem;
/// Square matrix of rational functions over `F_p`.
pub type RatMatrix = Vec<Vec<RatFun<Fp>>>;
/// A vector of truncated series, one per basis element.
pub type SeriesVec = Vec<TruncSeries<Fp>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdModError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("∇_{i} is outside the representable range 0..={max}")]
    OutOfRange { i: u64, max: u64 },
    #[error("precondition violated: {0}")]
    Contract(String),
    #[error("p-power constant for {0} is zero")]
    ZeroConstant(u64),
    #[error(transparent)]
    Hasse(#[from] HasseError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A rank-`r` iterative differential module at level `m`.
pub struct IDModule {
    p: PrimeModulus,
    rank: usize,
    matrices: Vec<RatMatrix>,
    cache: Mutex<Vec<Arc<RatMatrix>>>,
}

impl Clone for IDModule {
    fn clone(&self) -> Self {
        IDModule { p: self.p, rank: self.rank, matrices: self.matrices.clone(), cache: Mutex::new(Vec::new()) }
    }
}

impl std::fmt::Debug for IDModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IDModule").field("p", &self.p).field("rank", &self.rank).field("matrices", &self.matrices).finish()
    }
}

fn identity(p: PrimeModulus, r: usize) -> RatMatrix {
    (0..r).map(|i| (0..r).map(|j| if i == j { RatFun::one(&p) } else { RatFun::zero(&p) }).collect()).collect()
}

fn mat_mul(a: &RatMatrix, b: &RatMatrix, p: PrimeModulus) -> RatMatrix {
    let r = a.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let mut acc = RatFun::zero(&p);
                    for k in 0..r {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(&a[i][k] * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn mat_add(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect()).collect()
}

fn mat_hasse(a: &RatMatrix, i: u64) -> Result<RatMatrix, HasseError> {
    a.iter().map(|row| row.iter().map(|x| x.hasse(i)).collect()).collect()
}

impl IDModule {
    /// `matrices[n]` is the matrix of `∇_{p^n}`; all square of one size.
    pub fn new(p: u64, matrices: Vec<RatMatrix>) -> Result<Self, IdModError> {
        let p = PrimeModulus::new(p).map_err(|e| IdModError::Parameter(e.to_string()))?;
        let Some(first) = matrices.first() else {
            return Err(IdModError::Parameter("need at least the matrix of ∇_1".into()));
        };
        let rank = first.len();
        if rank == 0 {
            return Err(IdModError::Parameter("rank must be positive".into()));
        }
        for (n, m) in matrices.iter().enumerate() {
            if m.len() != rank || m.iter().any(|row| row.len() != rank) {
                return Err(IdModError::Parameter(format!("matrix {n} is not {rank}×{rank}")));
            }
            if m.iter().flatten().any(|x| *x.ctx() != p) {
                return Err(IdModError::Parameter(format!("matrix {n} has entries outside F_{}", p.get())));
            }
        }
        Ok(IDModule { p, rank, matrices, cache: Mutex::new(Vec::new()) })
    }

    /// The module with all `A_n = 0`: `∇_i` acts as `∂_i` componentwise.
    pub fn trivial(p: u64, rank: usize, level: usize) -> Result<Self, IdModError> {
        let pm = PrimeModulus::new(p).map_err(|e| IdModError::Parameter(e.to_string()))?;
        let zero: RatMatrix = vec![vec![RatFun::zero(&pm); rank]; rank];
        Self::new(p, vec![zero; level + 1])
    }

    pub fn p(&self) -> u64 {
        self.p.get()
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> usize {
        self.matrices.len() - 1
    }

    pub fn matrices(&self) -> &[RatMatrix] {
        &self.matrices
    }

    /// Largest `i` for which `∇_i` is determined: `p^(m+1) − 1`.
    pub fn max_index(&self) -> u64 {
        self.p().pow(self.level() as u32 + 1) - 1
    }

    /// `H_0, …, H_upto`, built once and cached.
    pub fn connection_matrices(&self, upto: u64) -> Result<Vec<Arc<RatMatrix>>, IdModError> {
        if upto > self.max_index() {
            return Err(IdModError::OutOfRange { i: upto, max: self.max_index() });
        }
        let mut h = self.cache.lock().expect("cache lock");
        if h.is_empty() {
            h.push(Arc::new(identity(self.p, self.rank)));
        }
        let p = self.p();
        while (h.len() as u64) <= upto {
            let i = h.len() as u64;
            let ds = digits(i, p);
            let next = if ds.iter().sum::<u64>() == 1 {
                self.matrices[ds.len() - 1].clone()
            } else {
                let mut y = identity(self.p, self.rank);
                for (k, &a) in ds.iter().enumerate().rev() {
                    let pk = p.pow(k as u32);
                    for _ in 0..a {
                        y = apply_power(&h, pk, &y, self.p)?;
                    }
                }
                let (c, expected) = p_power_constant::<Fp>(&self.p, i)?;
                if c.is_zero() {
                    return Err(IdModError::ZeroConstant(i));
                }
                if c != expected {
                    return Err(HasseError::ConstantMismatch { n: i, computed: c.to_string(), expected: expected.to_string() }.into());
                }
                let inv = c.inv().expect("nonzero");
                y.iter().map(|row| row.iter().map(|x| x.scale(&inv)).collect()).collect()
            };
            h.push(Arc::new(next));
        }
        Ok(h[..=upto as usize].to_vec())
    }
}

/// Matrix of `∇_{pk} ∘ Y` on the basis: `Σ_{a+b=pk} H_b ∂_a(Y)`.
fn apply_power(h: &[Arc<RatMatrix>], pk: u64, y: &RatMatrix, p: PrimeModulus) -> Result<RatMatrix, HasseError> {
    let r = y.len();
    let mut acc: RatMatrix = vec![vec![RatFun::zero(&p); r]; r];
    for a in 0..=pk {
        let dy = mat_hasse(y, a)?;
        acc = mat_add(&acc, &mat_mul(&h[(pk - a) as usize], &dy, p));
    }
    Ok(acc)
}

fn mat_vec(m: &RatMatrix, v: &[TruncSeries<Fp>]) -> SeriesVec {
    m.iter()
        .map(|row| {
            let mut acc: Option<TruncSeries<Fp>> = None;
            for (x, s) in row.iter().zip(v) {
                let term = s.mul_ratfun(x);
                acc = Some(match acc {
                    None => term,
                    Some(a) => &a + &term,
                });
            }
            acc.expect("rank is positive")
        })
        .collect()
}

fn vec_add(a: &[TruncSeries<Fp>], b: &[TruncSeries<Fp>]) -> SeriesVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vec_same(a: &[TruncSeries<Fp>], b: &[TruncSeries<Fp>]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.agrees_with(y))
}

/// `∇_i(v) = Σ_{j+j'=i} H_{j'} ∂_j(v)`.
pub fn nabla_apply(m: &IDModule, i: u64, v: &[TruncSeries<Fp>]) -> Result<SeriesVec, IdModError> {
    let h = m.connection_matrices(i)?;
    nabla_with(&h, i, v)
}

fn nabla_with(h: &[Arc<RatMatrix>], i: u64, v: &[TruncSeries<Fp>]) -> Result<SeriesVec, IdModError> {
    let mut acc: Option<SeriesVec> = None;
    for j in 0..=i {
        let dv: SeriesVec = v.iter().map(|s| hasse_apply(j, s)).collect::<Result<_, _>>()?;
        let term = mat_vec(&h[(i - j) as usize], &dv);
        acc = Some(match acc {
            None => term,
            Some(a) => vec_add(&a, &term),
        });
    }
    Ok(acc.expect("at least the j = 0 term"))
}

/// Which axiom a check exercised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleAxiom {
    Identity,
    Leibniz,
    Composition,
}

impl std::fmt::Display for ModuleAxiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModuleAxiom::Identity => "identity",
            ModuleAxiom::Leibniz => "leibniz",
            ModuleAxiom::Composition => "composition",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleFailure {
    pub axiom: ModuleAxiom,
    pub i: u64,
    pub j: u64,
    /// Index into the test vectors: basis vectors first, then random ones.
    pub vector: usize,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterativeReport {
    pub bound: u64,
    pub precision: i64,
    pub checks: u64,
    pub first_failure: Option<ModuleFailure>,
}

impl IterativeReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

const RANDOM_VECTORS: usize = 2;
const RANDOM_DEGREE: usize = 6;

fn random_series(p: PrimeModulus, rng: &mut ChaCha8Rng, order: i64) -> TruncSeries<Fp> {
    let coeffs = (0..=RANDOM_DEGREE).map(|_| p.elem(rng.random_range(0..p.get() as i64))).collect();
    TruncSeries::from_coeffs(&p, 0, coeffs, order)
}

/// The test vectors: the basis, then a few random polynomial vectors.
pub fn test_vectors(m: &IDModule, precision: i64, seed: u64) -> Vec<SeriesVec> {
    let p = m.modulus();
    let r = m.rank();
    let mut out: Vec<SeriesVec> = (0..r)
        .map(|k| {
            (0..r)
                .map(|l| if l == k { TruncSeries::one(&p, precision) } else { TruncSeries::zero(&p, precision) })
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_VECTORS {
        out.push((0..r).map(|_| random_series(p, &mut rng, precision)).collect());
    }
    out
}

fn render_vec(v: &[TruncSeries<Fp>]) -> Vec<String> {
    v.iter().map(|s| s.render('t')).collect()
}

/// Checks `∇_0 = id`, Leibniz against scalar `∂`, and
/// `∇_i ∘ ∇_j = C(i+j, i) ∇_{i+j}` for `i + j ≤ bound` on the test vectors,
/// each comparison taken up to the smaller surviving order. Failures are
/// reported, not raised; the first one in `(vector, i, j)` order is kept.
pub fn check_iterative(m: &IDModule, bound: u64, precision: i64) -> Result<IterativeReport, IdModError> {
    if bound > m.max_index() {
        return Err(IdModError::OutOfRange { i: bound, max: m.max_index() });
    }
    let p = m.modulus();
    let h = m.connection_matrices(bound)?;
    let vectors = test_vectors(m, precision, 0x5eed ^ bound);
    let mut rng = ChaCha8Rng::seed_from_u64(0xfee1 ^ precision as u64);
    let scalar = random_series(p, &mut rng, precision);
    let ds: Vec<TruncSeries<Fp>> = (0..=bound).map(|i| hasse_apply(i, &scalar)).collect::<Result<_, _>>()?;

    let mut checks = 0u64;
    for (idx, v) in vectors.iter().enumerate() {
        let fail = |axiom, i, j, lhs: &[TruncSeries<Fp>], rhs: &[TruncSeries<Fp>]| ModuleFailure {
            axiom,
            i,
            j,
            vector: idx,
            lhs: render_vec(lhs),
            rhs: render_vec(rhs),
        };
        let nv: Vec<SeriesVec> = (0..=bound).map(|i| nabla_with(&h, i, v)).collect::<Result<_, _>>()?;

        checks += 1;
        if !vec_same(&nv[0], v) {
            return Ok(report(bound, precision, checks, Some(fail(ModuleAxiom::Identity, 0, 0, &nv[0], v))));
        }

        let rv: SeriesVec = v.iter().map(|s| s * &scalar).collect();
        for i in 0..=bound {
            checks += 1;
            let lhs = nabla_with(&h, i, &rv)?;
            let mut rhs: Option<SeriesVec> = None;
            for j in 0..=i {
                let term: SeriesVec = nv[(i - j) as usize].iter().map(|s| s * &ds[j as usize]).collect();
                rhs = Some(match rhs {
                    None => term,
                    Some(a) => vec_add(&a, &term),
                });
            }
            let rhs = rhs.expect("nonempty");
            if !vec_same(&lhs, &rhs) {
                return Ok(report(bound, precision, checks, Some(fail(ModuleAxiom::Leibniz, i, 0, &lhs, &rhs))));
            }
        }

        for i in 0..=bound {
            for j in 0..=bound - i {
                checks += 1;
                let lhs = nabla_with(&h, i, &nv[j as usize])?;
                let b = Fp::binomial(&p, (i + j) as i64, i);
                let rhs: SeriesVec = nv[(i + j) as usize].iter().map(|s| s.scale(&b)).collect();
                if !vec_same(&lhs, &rhs) {
                    return Ok(report(bound, precision, checks, Some(fail(ModuleAxiom::Composition, i, j, &lhs, &rhs))));
                }
            }
        }
    }
    Ok(report(bound, precision, checks, None))
}

fn report(bound: u64, precision: i64, checks: u64, first_failure: Option<ModuleFailure>) -> IterativeReport {
    IterativeReport { bound, precision, checks, first_failure }
}

/// Basis of the truncated solution space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionBasis {
    pub order: i64,
    pub basis: Vec<SeriesVec>,
    /// `(p^n, k)`: `∇_{p^n} v` is verified to vanish modulo `t^k`.
    pub achieved: Vec<(u64, i64)>,
}

impl SectionBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// All `v` with components `Σ_{0≤e<N} c_e t^e` and `∇_{p^n} v ≡ 0` below the
/// order each constraint is known to, for `0 ≤ n ≤ m`. Exact `F_p` nullspace;
/// the matrix columns (one per unknown coefficient) are built in parallel.
pub fn horizontal_sections(m: &IDModule, precision: i64) -> Result<SectionBasis, IdModError> {
    horizontal_sections_with(m, precision, Execution::default())
}

pub fn horizontal_sections_with(m: &IDModule, precision: i64, exec: Execution) -> Result<SectionBasis, IdModError> {
    let p = m.modulus();
    let top = p.get().pow(m.level() as u32);
    if precision <= top as i64 {
        return Err(IdModError::Parameter(format!("precision {precision} must exceed p^m = {top}")));
    }
    let r = m.rank();
    let n_unknowns = r * precision as usize;
    let h = m.connection_matrices(top)?;
    let powers: Vec<u64> = (0..=m.level()).map(|n| p.get().pow(n as u32)).collect();

    // columns[u][n] = ∇_{p^n}(t^e e_l) for unknown u = l * N + e
    let columns: Vec<Result<Vec<SeriesVec>, IdModError>> = par::map_range(exec, n_unknowns, |u| {
        let (l, e) = (u / precision as usize, (u % precision as usize) as i64);
        let v: SeriesVec = (0..r)
            .map(|k| if k == l { TruncSeries::monomial(p.elem(1), e, precision) } else { TruncSeries::zero(&p, precision) })
            .collect();
        powers.iter().map(|&pn| nabla_with(&h, pn, &v)).collect()
    });
    let columns: Vec<Vec<SeriesVec>> = columns.into_iter().collect::<Result<_, _>>()?;

    let mut rows: Vec<Vec<Fp>> = Vec::new();
    let mut achieved = Vec::new();
    for (n, &pn) in powers.iter().enumerate() {
        let hi = columns.iter().flat_map(|c| c[n].iter().map(TruncSeries::order)).min().unwrap_or(0);
        let lo = columns.iter().flat_map(|c| c[n].iter().map(TruncSeries::valuation)).min().unwrap_or(hi).min(hi);
        achieved.push((pn, hi));
        for k in 0..r {
            for e in lo..hi {
                let row: Vec<Fp> = columns.iter().map(|c| c[n][k].coeff(e).expect("below order")).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..n_unknowns).map(|u| (0..n_unknowns).map(|w| if u == w { p.elem(1) } else { p.elem(0) }).collect()).collect()
    } else {
        linalg::nullspace(&p, &rows, n_unknowns)
    };
    let basis = kernel
        .into_iter()
        .map(|vec| {
            (0..r)
                .map(|l| {
                    let seg = vec[l * precision as usize..(l + 1) * precision as usize].to_vec();
                    TruncSeries::from_coeffs(&p, 0, seg, precision)
                })
                .collect()
        })
        .collect();
    Ok(SectionBasis { order: precision, basis, achieved })
}

/// Re-applies `∇_{p^n}` to every basis vector and checks it vanishes to the
/// recorded order; independent of the elimination.
pub fn verify_sections(m: &IDModule, s: &SectionBasis) -> Result<bool, IdModError> {
    for v in &s.basis {
        for &(pn, order) in &s.achieved {
            let w = nabla_apply(m, pn, v)?;
            if w.iter().any(|c| !c.truncate(order).is_zero()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The rank-2 system with `A_n = [[0, 1], [0, a_n t^(−p^n)]]`.
pub fn example_system(p: u64, a: &[u64]) -> Result<IDModule, IdModError> {
    if p == 2 {
        return Err(IdModError::Parameter("the example needs p ≠ 2".into()));
    }
    let pm = PrimeModulus::new(p).map_err(|e| IdModError::Parameter(e.to_string()))?;
    if a.is_empty() {
        return Err(IdModError::Parameter("digit list must be nonempty".into()));
    }
    if let Some(&bad) = a.iter().find(|&&d| d == 0 || d >= p) {
        return Err(IdModError::Parameter(format!("digit {bad} not in [1, {}]", p - 1)));
    }
    let matrices = a
        .iter()
        .enumerate()
        .map(|(n, &an)| {
            let pole = -(p.pow(n as u32) as i64);
            vec![
                vec![RatFun::zero(&pm), RatFun::one(&pm)],
                vec![RatFun::zero(&pm), RatFun::monomial(pm.elem(an as i64), pole)],
            ]
        })
        .collect();
    IDModule::new(p, matrices)
}

/// A pair `(f, g)` with `b_1 = f / g`.
pub type B1Solution = (Poly<Fp>, Poly<Fp>);

/// `t ∂_1(f) g − t f ∂_1(g) − t g² + a_0 f g`, zero exactly for solutions.
pub fn b1_defect(a0: u64, f: &Poly<Fp>, g: &Poly<Fp>) -> Poly<Fp> {
    let p = *f.ctx();
    let t = Poly::x(&p);
    let df = hasse_apply(1, f).expect("polynomial");
    let dg = hasse_apply(1, g).expect("polynomial");
    let lhs = &(&(&t * &df) * g) - &(&(&t * f) * &dg);
    let rhs = &(&t * &(g * g)) - &(f * g).scale(&p.elem(a0 as i64));
    &lhs - &rhs
}

/// All coprime `(f, g)` with `g` monic, `deg f, deg g ≤ dmax`, solving
/// `t ∂_1(f) g − t f ∂_1(g) = t g² − a_0 f g`.
pub fn b1_bruteforce(p: u64, a0: u64, dmax: usize) -> Result<Vec<B1Solution>, IdModError> {
    b1_bruteforce_with(p, a0, dmax, Execution::default())
}

/// Monic polynomials of degree ≤ `dmax` in canonical order (degree, then
/// coefficients from the constant term up).
pub fn monic_polys(p: PrimeModulus, dmax: usize) -> Vec<Poly<Fp>> {
    let mut out = Vec::new();
    for d in 0..=dmax {
        let count = (p.get() as usize).pow(d as u32);
        for idx in 0..count {
            let mut x = idx;
            let mut coeffs: Vec<Fp> = (0..d)
                .map(|_| {
                    let c = x % p.get() as usize;
                    x /= p.get() as usize;
                    p.elem(c as i64)
                })
                .collect();
            coeffs.push(p.elem(1));
            out.push(Poly::from_coeffs(&p, coeffs));
        }
    }
    out
}

fn solutions_for_g(p: PrimeModulus, a0: u64, dmax: usize, g: &Poly<Fp>) -> Vec<Poly<Fp>> {
    let n = dmax + 1;
    let zero = Poly::zero(&p);
    let cols: Vec<Poly<Fp>> = (0..n).map(|k| &b1_defect(a0, &Poly::monomial(p.elem(1), k), g) - &b1_defect(a0, &zero, g)).collect();
    // defect(f) = L(f) + defect(0), with L linear
    let base = b1_defect(a0, &zero, g);
    let height = cols.iter().chain([&base]).map(|c| c.coeffs().len()).max().unwrap_or(0);
    // kernel of [L | defect(0)] with last coordinate 1 solves L f = −defect(0)
    let rows: Vec<Vec<Fp>> = (0..height)
        .map(|e| {
            let mut row: Vec<Fp> = cols.iter().map(|c| c.coeff(e)).collect();
            row.push(base.coeff(e));
            row
        })
        .collect();
    if rows.is_empty() {
        return Vec::new();
    }
    let kernel = linalg::nullspace(&p, &rows, n + 1);
    // affine solutions: kernel vectors with last coordinate 1
    let homog: Vec<&Vec<Fp>> = kernel.iter().filter(|v| v[n].is_zero()).collect();
    let Some(part) = kernel.iter().find(|v| !v[n].is_zero()) else {
        return Vec::new();
    };
    let s = part[n].inv().expect("nonzero");
    let particular: Vec<Fp> = part[..n].iter().map(|x| x.mul(&s)).collect();
    // the free column n carries a 1 in exactly one kernel vector, so the
    // homogeneous part is spanned by the others
    let dim = homog.len() as u32;
    let mut out = Vec::new();
    for idx in 0..(p.get() as usize).pow(dim) {
        let mut x = idx;
        let mut f = particular.clone();
        for hv in &homog {
            let c = p.elem((x % p.get() as usize) as i64);
            x /= p.get() as usize;
            for (fi, hi) in f.iter_mut().zip(hv.iter()) {
                *fi = fi.add(&hi.mul(&c));
            }
        }
        let f = Poly::from_coeffs(&p, f);
        if f.gcd(g).is_one() {
            debug_assert!(b1_defect(a0, &f, g).is_zero());
            out.push(f);
        }
    }
    out.sort_by_key(poly_key);
    out
}

fn poly_key(f: &Poly<Fp>) -> (usize, Vec<u64>) {
    (f.coeffs().len(), f.coeffs().iter().map(|c| c.value()).collect())
}

pub fn b1_bruteforce_with(p: u64, a0: u64, dmax: usize, exec: Execution) -> Result<Vec<B1Solution>, IdModError> {
    let pm = PrimeModulus::new(p).map_err(|e| IdModError::Parameter(e.to_string()))?;
    if a0 == 0 || a0 >= p {
        return Err(IdModError::Parameter(format!("a0 = {a0} not in [1, {}]", p - 1)));
    }
    let gs = monic_polys(pm, dmax);
    let per_g = par::map(exec, &gs, |g| solutions_for_g(pm, a0, dmax, g));
    Ok(gs.into_iter().zip(per_g).flat_map(|(g, fs)| fs.into_iter().map(move |f| (f, g.clone()))).collect())
}

/// Outcome of one proof branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchVerdict {
    Refuted,
    Inconclusive,
}

/// Both branches of the coprimality argument for `b_1`.
///
/// Branch A (`g = t ∂_1 g`) forces `a_0 = 1`; branch B (`∂_1 g = 0`) forces
/// every coefficient `c_i` of `f_1` to satisfy `i c_i (a_0 + 2 + i − 1) = 0`
/// (equivalently `i c_i (a_0 + i + 1) = 0`), then the constant term must
/// solve `(1 + a_0) u = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseAnalysis {
    pub p: u64,
    pub a0: u64,
    pub branch_a: BranchVerdict,
    pub branch_b: BranchVerdict,
    /// `(i, i (a_0 + 2 + i − 1) mod p)` for each residue `i`.
    pub factors: Vec<(u64, u64)>,
    /// Residues where a nonzero `c_i` is allowed.
    pub allowed_residues: Vec<u64>,
    /// `(2 + a_0) ∂_1(t^i) + 2t ∂_2(t^i) = i(a_0 + 2 + i − 1) t^(i−1)` held
    /// for every tested `i`.
    pub identity_verified: bool,
    /// `(1 + a_0) mod p`; zero makes `(1 + a_0) u = 1` impossible.
    pub final_coefficient: u64,
}

impl CaseAnalysis {
    pub fn both_refuted(&self) -> bool {
        self.branch_a == BranchVerdict::Refuted && self.branch_b == BranchVerdict::Refuted
    }
}

pub fn b1_case_analysis(p: u64, a0: u64) -> Result<CaseAnalysis, IdModError> {
    let pm = PrimeModulus::new(p).map_err(|e| IdModError::Parameter(e.to_string()))?;
    if a0 == 0 || a0 >= p {
        return Err(IdModError::Parameter(format!("a0 = {a0} not in [1, {}]", p - 1)));
    }
    let branch_a = if (a0 % p) == 1 { BranchVerdict::Inconclusive } else { BranchVerdict::Refuted };

    let factor = |i: u64| pm.elem(i as i64).mul(&pm.elem((a0 + 2 + i) as i64 - 1));
    let factors: Vec<(u64, u64)> = (0..p).map(|i| (i, factor(i).value())).collect();
    let allowed_residues: Vec<u64> = factors.iter().filter(|(_, v)| *v == 0).map(|(i, _)| *i).collect();

    let t = Poly::<Fp>::x(&pm);
    let identity_verified = (0..3 * p).all(|i| {
        let ti = Poly::monomial(pm.elem(1), i as usize);
        let lhs = &hasse_apply(1, &ti).unwrap().scale(&pm.elem(2 + a0 as i64))
            + &(&t * &hasse_apply(2, &ti).unwrap()).scale(&pm.elem(2));
        let rhs = if i == 0 { Poly::zero(&pm) } else { Poly::monomial(factor(i % p), i as usize - 1) };
        lhs == rhs
    });

    let final_coefficient = (1 + a0) % p;
    let branch_b = if allowed_residues == [0] && final_coefficient == 0 && identity_verified {
        BranchVerdict::Refuted
    } else {
        BranchVerdict::Inconclusive
    };
    Ok(CaseAnalysis { p, a0, branch_a, branch_b, factors, allowed_residues, identity_verified, final_coefficient })
}

/// For two vectors with equal second components, whether `∂_i(v_1 − w_1)`
/// vanishes modulo `t^(N−i)` for `1 ≤ i ≤ N/2`.
pub fn invariance_check(m: &IDModule, v: &[TruncSeries<Fp>], w: &[TruncSeries<Fp>], precision: i64) -> Result<bool, IdModError> {
    if m.rank() != 2 || v.len() != 2 || w.len() != 2 {
        return Err(IdModError::Contract("invariance check needs rank-2 vectors".into()));
    }
    if !v[1].truncate(precision).agrees_with(&w[1].truncate(precision)) {
        return Err(IdModError::Contract("second components differ".into()));
    }
    let diff = (&v[0] - &w[0]).truncate(precision);
    for i in 1..=(precision / 2) as u64 {
        let d = hasse_apply(i, &diff)?;
        if !d.truncate(precision - i as i64).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
