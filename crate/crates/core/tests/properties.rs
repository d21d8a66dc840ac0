use proptest::prelude::*;

use plusrank_core::analytic::compensated_sum;
use plusrank_core::arith::{kronecker_symbol, rational_to_f64};
use plusrank_core::halfint::{iota1, jacobi_cusp_index1};
use plusrank_core::laurent::{series_in, LaurentPoly, Monomial, RatFunc, Var};
use plusrank_core::maass::{dhat_seq, psi, verify_dd};
use plusrank_core::qexp::{qexp_mul, QExpansion};
use plusrank_core::Rational;

fn small_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..=3, -2i32..=2, -2i32..=2, 0i32..=2), 0..5).prop_map(|terms| {
        let mut p = LaurentPoly::zero();
        for (c, qe, xe, te) in terms {
            p += &LaurentPoly::monomial(c, &[(Var::Q, qe), (Var::X, xe), (Var::T, te)]);
        }
        p
    })
}

fn small_series() -> impl Strategy<Value = QExpansion> {
    prop::collection::vec(-20i64..=20, 1..12).prop_map(QExpansion::from_integers)
}

proptest! {
    #[test]
    fn laurent_ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_undoes_multiplication(a in small_poly(), e in 1i32..4) {
        let x = LaurentPoly::var(Var::X, 1);
        let divisor = &x.pow(e as u32) - &LaurentPoly::var(Var::X, -e);
        let product = &a * &divisor;
        prop_assert_eq!(product.div_exact(&divisor, Var::X).unwrap(), a);
    }

    #[test]
    fn series_times_denominator_is_numerator(a in small_poly(), c in -3i64..=3) {
        let num = a;
        let den = &LaurentPoly::one() - &LaurentPoly::monomial(c, &[(Var::T, 1), (Var::Q, 1)]);
        let order = 6;
        let coeffs = series_in(&RatFunc::new(num.clone(), den.clone()).unwrap(), Var::T, order).unwrap();
        let series = plusrank_core::laurent::from_series(&coeffs, Var::T);
        let back = plusrank_core::laurent::truncate_in(&(&series * &den), Var::T, order as i32);
        let expected = plusrank_core::laurent::truncate_in(&num, Var::T, order as i32);
        prop_assert_eq!(back, expected);
    }

    #[test]
    fn qexp_product_commutes_and_associates(a in small_series(), b in small_series(), c in small_series()) {
        prop_assert_eq!(qexp_mul(&a, &b), qexp_mul(&b, &a));
        prop_assert_eq!(qexp_mul(&qexp_mul(&a, &b), &c), qexp_mul(&a, &qexp_mul(&b, &c)));
    }

    #[test]
    fn kronecker_is_multiplicative(d in -200i64..200, m in 1u64..60, n in 1u64..60) {
        prop_assert_eq!(
            kronecker_symbol(d, m * n),
            kronecker_symbol(d, m) * kronecker_symbol(d, n)
        );
    }

    #[test]
    fn psi_is_symmetric_in_x(nu in 0u32..8, nprime in 0i64..6, chi in -1i64..=1) {
        let p = psi(nu, nprime, chi, Var::X).unwrap();
        prop_assert_eq!(p.subst_scaled(Var::X, &Monomial::var(Var::X, -1)), p.clone());
        if chi == 0 {
            prop_assert_eq!(p, psi(nu, nprime, 1, Var::X).unwrap().coeff_of(Var::Q, 0));
        }
    }

    #[test]
    fn dhat_products_expand(delta in 0usize..5, gamma in 0usize..5, k in 4i64..14) {
        let s = dhat_seq(delta + gamma, k, 2);
        let lhs = s[delta].mul(&s[gamma]).poly;
        let mut rhs = LaurentPoly::zero();
        for i in 0..=delta.min(gamma) {
            let c = LaurentPoly::monomial(1, &[(Var::Q, ((4 * k - 6) * i as i64) as i32), (Var::U, 2 * i as i32)]);
            rhs += &(&c * &s[delta + gamma - 2 * i].poly);
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compensated_sum_matches_exact(xs in prop::collection::vec(-1e6f64..1e6, 0..40)) {
        let exact = xs.iter().fold(Rational::from_integer(0.into()), |acc, &x| {
            acc + Rational::from_float(x).unwrap()
        });
        let approx = compensated_sum(xs.iter().copied());
        let scale: f64 = xs.iter().map(|x| x.abs()).sum();
        prop_assert!((approx - rational_to_f64(&exact)).abs() <= 1e-15 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn dd_holds_for_random_weights(k in 4i64..16, n in 1i64..5, chi in -1i64..=1) {
        let report = verify_dd(2, k, n, chi).unwrap();
        prop_assert!(report.passed(), "{:?}", report.first_failure);
    }

    #[test]
    fn iota_is_linear(num in -20i64..20, den in 1i64..9) {
        let phi = jacobi_cusp_index1(10, 60).unwrap();
        let c = Rational::new(num.into(), den.into());
        let scaled = iota1(&phi.scale(&c));
        let g = iota1(&phi);
        for n in 0..=60 {
            prop_assert_eq!(scaled.coeff(n), &(g.coeff(n) * &c));
        }
    }
}
