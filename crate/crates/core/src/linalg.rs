//! Exact elimination: nullspaces over `F_p` and fraction-free nullspaces
//! over `Q`.
//!
//! Pivot choice is always the first nonzero entry in column order, so
//! outputs are deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{BigRational, Field};

/// Row-major dense matrix.
pub type Matrix<T> = Vec<Vec<T>>;

/// Reduced row echelon form over a field, in place. Returns pivot columns.
pub fn rref<F: Field>(_ctx: &F::Ctx, m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = m[r].clone();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x = x.sub(&y.mul(&f));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel basis of `m` (as column vectors), one vector per free column,
/// with a 1 in that free column.
pub fn nullspace<F: Field>(ctx: &F::Ctx, m: &Matrix<F>, cols: usize) -> Vec<Vec<F>> {
    let mut a = m.clone();
    let pivots = rref(ctx, &mut a);
    kernel_from_rref(ctx, &a, &pivots, cols)
}

fn kernel_from_rref<F: Field>(ctx: &F::Ctx, a: &Matrix<F>, pivots: &[usize], cols: usize) -> Vec<Vec<F>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![F::zero(ctx); cols];
            v[free] = F::one(ctx);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = a[row][free].neg();
            }
            v
        })
        .collect()
}

/// Rank over a field.
pub fn rank<F: Field>(ctx: &F::Ctx, m: &Matrix<F>) -> usize {
    let mut a = m.clone();
    rref(ctx, &mut a).len()
}

/// Integer row echelon form by Bareiss fraction-free elimination.
/// Returns the pivot columns; every division performed is exact.
pub fn bareiss_echelon(m: &mut Matrix<BigInt>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let piv = m[r][c].clone();
        let pivot_row = m[r][c..].to_vec();
        for i in r + 1..rows {
            let lead = m[i][c].clone();
            for (x, y) in m[i][c..].iter_mut().zip(&pivot_row) {
                *x = (&piv * &*x - &lead * y) / &prev;
            }
            // entries left of the pivot in row i are already zero
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel of a rational matrix computed by clearing denominators per row,
/// Bareiss elimination over `Z`, then exact back substitution. The basis is
/// returned in reduced echelon form.
pub fn nullspace_rational(m: &Matrix<BigRational>, cols: usize) -> Vec<Vec<BigRational>> {
    let mut ints: Matrix<BigInt> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
            row.iter().map(|c| c.numer() * (&l / c.denom())).collect()
        })
        .collect();
    let pivots = bareiss_echelon(&mut ints);
    let rank = pivots.len();

    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![<BigRational as Zero>::zero(); cols];
        v[free] = <BigRational as One>::one();
        for row in (0..rank).rev() {
            let pc = pivots[row];
            let mut acc = <BigRational as Zero>::zero();
            for j in pc + 1..cols {
                if !Field::is_zero(&v[j]) && !ints[row][j].is_zero() {
                    acc += BigRational::from_integer(ints[row][j].clone()) * &v[j];
                }
            }
            v[pc] = -acc / BigRational::from_integer(ints[row][pc].clone());
        }
        basis.push(v);
    }
    reduce_basis(basis, cols)
}

/// Brings a list of vectors into reduced row echelon form (as rows) and
/// drops zero rows.
pub fn reduce_basis(vectors: Vec<Vec<BigRational>>, cols: usize) -> Vec<Vec<BigRational>> {
    if vectors.is_empty() {
        return vectors;
    }
    let mut m = vectors;
    let pivots = rref(&crate::exactnum::Rationals, &mut m);
    m.truncate(pivots.len());
    debug_assert!(m.iter().all(|r| r.len() == cols));
    m
}

/// Largest absolute value among a matrix's integer entries, for
/// diagnostics on coefficient growth.
pub fn max_abs(m: &Matrix<BigInt>) -> BigInt {
    m.iter().flatten().map(|x| x.abs()).max().unwrap_or_default()
}
