use bch_lab::exact::*;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_poly() -> impl Strategy<Value = ExactPoly> {
    prop::collection::vec((0u32..3, 0u32..3, 0u32..3, -5i64..=5), 0..5).prop_map(|terms| {
        ExactPoly::from_terms(
            terms
                .into_iter()
                .map(|(z, nu, b, c)| (Monomial::new(z, nu, b), int(c))),
        )
    })
}

fn rational_b() -> impl Strategy<Value = BigRational> {
    (1i64..200, 1i64..40).prop_filter_map("b > 1", |(n, d)| {
        let b = rat(n, d);
        (b > BigRational::one()).then_some(b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_recovers_factor(a in small_poly()) {
        let d = poly_l();
        prop_assert_eq!((&a * &d).div_exact(&d), Some(a));
    }

    #[test]
    fn l_has_no_roots_in_unit_interval(b in rational_b()) {
        let l = poly_l().subst_b(&b).to_univariate_z().unwrap();
        prop_assert_eq!(sturm_count_open(&l, &BigRational::zero(), &BigRational::one()).unwrap(), 0);
    }

    #[test]
    fn certificates_pass_for_rational_b(b in rational_b()) {
        for pair in [Pair::R, Pair::P] {
            let c = certify_no_common_roots(pair, &b).unwrap();
            prop_assert!(c.verdict.passed(), "{pair} at b={b}: {} roots", c.root_count);
        }
    }
}

#[test]
fn r_eliminant_identity() {
    let diff = &resultant_nu(&poly_r(), &poly_rp()).unwrap() - &expected_r_eliminant();
    assert!(diff.is_zero(), "{diff}");
}

#[test]
fn p_eliminant_divisible_by_z4_and_l() {
    let (e, _, cof) = p_eliminant_factors();
    assert!(e >= 4);
    assert!(cof.is_some());
}

#[test]
fn boundary_excluded_from_counts() {
    // z(z-1) has both roots on the closed interval and none on the open one
    let p = UniPoly::from_ints(&[0, -1, 1]);
    let (lo, hi) = (BigRational::zero(), BigRational::one());
    assert_eq!(sturm_count_open(&p, &lo, &hi).unwrap(), 0);
    let q = UniPoly::from_ints(&[-1, 2]);
    assert_eq!(sturm_count_open(&q, &lo, &hi).unwrap(), 1);
}
