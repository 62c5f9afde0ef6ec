use idalg::exactnum::{BigRational, Field, PrimeFieldElem, PrimeModulus, Rationals};
use idalg::hasse::{hasse_apply, hasse_compose, hasse_from_p_powers};
use idalg::mahler::{admissible_initial, residual, solve_series, MahlerSystem};
use idalg::polyseries::{Poly, RatFun, TruncSeries};
use idalg::relations::find_relations;
use proptest::prelude::*;

fn qpoly(c: &[(i64, i64)]) -> Poly<BigRational> {
    Poly::from_coeffs(&Rationals, c.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
}

fn fpoly(m: PrimeModulus, c: &[i64]) -> Poly<PrimeFieldElem> {
    Poly::from_coeffs(&m, c.iter().map(|&v| m.elem(v)).collect())
}

fn qcoeffs(max_len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..=20, 1i64..=6), 0..=max_len)
}

fn primes() -> impl Strategy<Value = PrimeModulus> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| PrimeModulus::new(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn poly_ring_axioms_q(a in qcoeffs(13), b in qcoeffs(13), c in qcoeffs(13)) {
        let (a, b, c) = (qpoly(&a), qpoly(&b), qpoly(&c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn poly_ring_axioms_fp(m in primes(), a in prop::collection::vec(0i64..7, 0..=13), b in prop::collection::vec(0i64..7, 0..=13)) {
        let (a, b) = (fpoly(m, &a), fpoly(m, &b));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &b, &(&a * &b) + &(&b * &b));
        if !b.is_zero() {
            let (quo, rem) = (&a * &b).div_rem(&b).unwrap();
            prop_assert_eq!(quo, a.clone());
            prop_assert!(rem.is_zero());
        }
    }

    #[test]
    fn ratfun_field_axioms(a in qcoeffs(6), b in qcoeffs(6), c in qcoeffs(6), d in qcoeffs(6)) {
        let (a, b, c, d) = (qpoly(&a), qpoly(&b), qpoly(&c), qpoly(&d));
        prop_assume!(!b.is_zero() && !d.is_zero());
        let x = RatFun::normalize(a.clone(), b).unwrap();
        let y = RatFun::normalize(c.clone(), d).unwrap();
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&x.checked_div(&y).unwrap() * &y, x.clone());
        }
        // embedding f -> f/1 is a ring map
        let (fa, fc) = (RatFun::from_poly(a.clone()), RatFun::from_poly(c.clone()));
        prop_assert_eq!(&fa * &fc, RatFun::from_poly(&a * &c));
        prop_assert_eq!(&fa + &fc, RatFun::from_poly(&a + &c));
        prop_assert!(x.den().leading().unwrap().is_one());
        prop_assert!(x.num().gcd(x.den()).is_one() || x.is_zero());
    }

    #[test]
    fn compose_power_is_homomorphism(a in qcoeffs(8), b in qcoeffs(8), q in 2u64..5) {
        let (a, b) = (qpoly(&a), qpoly(&b));
        prop_assert_eq!((&a * &b).compose_power(q).unwrap(), &a.compose_power(q).unwrap() * &b.compose_power(q).unwrap());
        let (sa, sb) = (TruncSeries::from_poly(&a, 10), TruncSeries::from_poly(&b, 10));
        let lhs = (&sa * &sb).compose_power(q, None).unwrap();
        let rhs = &sa.compose_power(q, None).unwrap() * &sb.compose_power(q, None).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn series_inverse(a in qcoeffs(10), shift in -3i64..4, n in 1usize..20) {
        let p = qpoly(&a);
        prop_assume!(!p.is_zero());
        let s = TruncSeries::from_poly(&p, 40).shift(shift);
        let inv = s.invert(n).unwrap();
        prop_assert_eq!(inv.valuation(), -s.valuation());
        let prod = &s * &inv;
        prop_assert!(prod.agrees_with(&TruncSeries::one(&Rationals, prod.order())));
        prop_assert_eq!(prod.order(), n as i64);
    }

    #[test]
    fn evaluation_multiplicative(a in qcoeffs(8), b in qcoeffs(8), xn in -9i64..=9, xd in 1i64..=9) {
        let x = BigRational::new(xn.into(), xd.into());
        let (a, b) = (qpoly(&a), qpoly(&b));
        prop_assert_eq!((&a * &b).evaluate(&x), a.evaluate(&x) * b.evaluate(&x));
    }

    #[test]
    fn leibniz_over_fp(m in primes(), a in prop::collection::vec(0i64..7, 0..=11), b in prop::collection::vec(0i64..7, 0..=11), i in 0u64..=16) {
        let (f, g) = (fpoly(m, &a), fpoly(m, &b));
        let lhs = hasse_apply(i, &(&f * &g)).unwrap();
        let mut rhs = Poly::zero(&m);
        for j in 0..=i {
            rhs = &rhs + &(&hasse_apply(j, &f).unwrap() * &hasse_apply(i - j, &g).unwrap());
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_on_fractions(m in primes(), a in prop::collection::vec(0i64..7, 0..=4), b in prop::collection::vec(0i64..7, 1..=4), i in 0u64..5, j in 0u64..5) {
        let (f, g) = (fpoly(m, &a), fpoly(m, &b));
        prop_assume!(!g.is_zero());
        let h = RatFun::normalize(f, g).unwrap();
        let (l, r) = hasse_compose(i, j, &h).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn reconstruction_on_random_polys(a in prop::collection::vec(0i64..5, 0..=30), n in 0u64..=125) {
        let m = PrimeModulus::new(5).unwrap();
        let f = fpoly(m, &a);
        prop_assert_eq!(hasse_from_p_powers(n, 5, &f).unwrap(), hasse_apply(n, &f).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn mahler_residual_and_injectivity(
        num in prop::collection::vec(-3i64..=3, 1..=3),
        den in prop::collection::vec(-3i64..=3, 1..=3),
        q in 2u64..4,
    ) {
        // scalar system normalized so A(0) = 1
        let mut num = num;
        let mut den = den;
        num[0] = 1;
        den[0] = 1;
        let a = RatFun::normalize(Poly::<BigRational>::from_i64s(&Rationals, &num), Poly::from_i64s(&Rationals, &den)).unwrap();
        prop_assume!(!a.is_zero());
        let sys = MahlerSystem::new(q, vec![vec![a]]).unwrap();
        let basis = admissible_initial(&sys).unwrap();
        prop_assert_eq!(basis.len(), 1);
        let sol = solve_series(&sys, &basis[0], 24).unwrap();
        prop_assert!(residual(&sys, &sol).unwrap().iter().all(TruncSeries::is_zero));
        prop_assert!(!sol.components[0].is_zero());
    }

    #[test]
    fn relations_are_sound(a in qcoeffs(5), b in qcoeffs(5)) {
        let f = TruncSeries::from_poly(&qpoly(&a), 24);
        let g = TruncSeries::from_poly(&qpoly(&b), 24);
        let basis = find_relations(&[f.clone(), g.clone()], 2, 24).unwrap();
        for r in &basis.basis {
            prop_assert!(r.eval_series(&[f.clone(), g.clone()], 24).is_zero());
        }
        prop_assert_eq!(basis.rank + basis.dimension(), basis.monomial_count);
    }
}

#[test]
fn field_roundtrip_of_small_integers() {
    let m = PrimeModulus::new(7).unwrap();
    for v in -20i64..20 {
        let e = PrimeFieldElem::from_i64(&m, v);
        assert_eq!(e.value() as i64, v.rem_euclid(7));
    }
}
