use crate::exactnum::Field;

/// Operand length above which multiplication switches to Karatsuba.
pub const KARATSUBA_THRESHOLD: usize = 32;

/// Product of two dense coefficient vectors (index = exponent).
///
/// The result has length `a.len() + b.len() - 1` (or 0) and may carry
/// trailing zeros; callers normalize.
pub fn mul_coeffs<F: Field>(ctx: &F::Ctx, a: &[F], b: &[F]) -> Vec<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len() <= KARATSUBA_THRESHOLD || b.len() <= KARATSUBA_THRESHOLD {
        return schoolbook(ctx, a, b);
    }
    karatsuba(ctx, a, b)
}

pub(crate) fn schoolbook<F: Field>(ctx: &F::Ctx, a: &[F], b: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    out
}

fn add_into<F: Field>(dst: &mut [F], src: &[F]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = d.add(s);
    }
}

fn sum<F: Field>(ctx: &F::Ctx, a: &[F], b: &[F]) -> Vec<F> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => F::zero(ctx),
        })
        .collect()
}

fn karatsuba<F: Field>(ctx: &F::Ctx, a: &[F], b: &[F]) -> Vec<F> {
    let half = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));

    let z0 = mul_coeffs(ctx, a0, b0);
    let z2 = mul_coeffs(ctx, a1, b1);
    let mut z1 = mul_coeffs(ctx, &sum(ctx, a0, a1), &sum(ctx, b0, b1));
    for (i, v) in z0.iter().enumerate() {
        z1[i] = z1[i].sub(v);
    }
    for (i, v) in z2.iter().enumerate() {
        z1[i] = z1[i].sub(v);
    }

    let mut out = vec![F::zero(ctx); a.len() + b.len() - 1];
    add_into(&mut out, &z0);
    add_into(&mut out[half..], &z1);
    if !z2.is_empty() {
        add_into(&mut out[2 * half..], &z2);
    }
    out
}
