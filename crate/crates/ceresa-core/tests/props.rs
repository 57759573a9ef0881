//! Property tests over randomly generated exact data.

use proptest::prelude::*;

use ceresa_core::exactnum::{format_rational, parse_rational, rat, Cyclo7, Rational};
use ceresa_core::forms::SymmetricForm6;
use ceresa_core::ggcomplex::split_form;
use ceresa_core::multilinear::{Mat, PivotOrder, Scalar};

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn arb_cyclo() -> impl Strategy<Value = Cyclo7> {
    proptest::array::uniform6(arb_rational()).prop_map(Cyclo7::new)
}

fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Mat<Rational>> {
    proptest::collection::vec(arb_rational(), rows * cols).prop_map(move |data| {
        let mut m = Mat::zeros(rows, cols);
        for (k, v) in data.into_iter().enumerate() {
            m.set(k / cols, k % cols, v);
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_string_roundtrip(r in arb_rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn cyclotomic_field_laws(x in arb_cyclo(), y in arb_cyclo(), z in arb_cyclo()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), Cyclo7::one());
        }
    }

    #[test]
    fn rank_is_pivot_order_independent(m in arb_matrix(5, 7)) {
        prop_assert_eq!(
            m.rank_with_order(PivotOrder::Forward),
            m.rank_with_order(PivotOrder::Reverse)
        );
    }

    #[test]
    fn rank_nullity_and_kernel_verify(m in arb_matrix(4, 6)) {
        let rank = m.rank();
        let kernel = m.kernel_basis();
        prop_assert_eq!(rank + kernel.len(), 6);
        for k in &kernel {
            prop_assert!(m.apply(k).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn split_form_projects(data in proptest::collection::vec(arb_rational(), 21)) {
        // build a random symmetric matrix from the upper triangle
        let mut m = Mat::zeros(6, 6);
        let mut it = data.into_iter();
        for i in 0..6 {
            for j in i..6 {
                let v = it.next().unwrap();
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        let form = SymmetricForm6::new(m).unwrap();
        let (q, r) = split_form(&form).unwrap();
        prop_assert_eq!(q.add(&r), form);
        prop_assert!(q.is_multiset_determined());
        let (qq, qr) = split_form(&q).unwrap();
        prop_assert_eq!(&qq, &q);
        prop_assert!(qr.is_zero());
        let (rq, rr) = split_form(&r).unwrap();
        prop_assert!(rq.is_zero());
        prop_assert_eq!(&rr, &r);
    }
}
