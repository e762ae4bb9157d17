//! Cross-module invariants checked on random periods.

use debruijn_core::egf::{corollary1_total, edge_series, expand_bivariate, seidel_ratio_holds, theorem1_f};
use debruijn_core::oracle::counts_by_last;
use debruijn_core::spectral::{discretize, find_lambda, SpectralProblem};
use debruijn_core::{build_debruijn, build_signed, normalize, Side, UpDownPeriod};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn period(max_len: usize) -> impl Strategy<Value = UpDownPeriod> {
    prop::collection::vec(0u8..=1, 2..=max_len).prop_map(|b| normalize(&b).unwrap().0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn triangle_rows_count_permutations(q in period(6), n in 1usize..=8) {
        let t = build_debruijn(&q, n).unwrap();
        let oracle: Vec<BigInt> = counts_by_last(&q, n).unwrap().into_iter().map(BigInt::from).collect();
        prop_assert_eq!(t.row(n), oracle.as_slice());
    }

    #[test]
    fn row_sums_are_totals(q in period(6)) {
        let t = build_debruijn(&q, 10).unwrap();
        let series = corollary1_total(&q, 10).unwrap();
        for n in 1..=10 {
            prop_assert_eq!(series.coeff(n), &BigRational::from_integer(t.row_sum(n)));
        }
    }

    #[test]
    fn generating_function_reproduces_signed_triangle(q in period(5)) {
        let f = theorem1_f(&q, 10).unwrap();
        let t = build_signed(&q, 11).unwrap();
        prop_assert!(t.is_seidel());
        let expected: Vec<Vec<BigRational>> = t
            .rows()
            .iter()
            .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
            .collect();
        prop_assert_eq!(expand_bivariate(&f, 11).unwrap(), expected);
    }

    #[test]
    fn signed_edges_obey_seidel_law(q in period(6)) {
        let t = build_signed(&q, 16).unwrap();
        let l = edge_series(&t, Side::Left, 15).unwrap();
        let r = edge_series(&t, Side::Right, 15).unwrap();
        prop_assert!(seidel_ratio_holds(&l, &r));
    }

    #[test]
    fn complement_mirrors_triangle(b in prop::collection::vec(0u8..=1, 2..=6)) {
        let q = UpDownPeriod::new(b).unwrap();
        let t = build_debruijn(&q, 9).unwrap();
        let c = build_debruijn(&q.complement(), 9).unwrap();
        let mirrored = t.mirror();
        prop_assert_eq!(mirrored.rows(), c.rows());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lambda_does_not_depend_on_phase(q in period(5)) {
        // periods without ascents admit only the decreasing permutation
        prop_assume!(q.zero_count() < q.len());
        let base = find_lambda(&SpectralProblem::new(&q, 0).unwrap(), 1e-12).unwrap();
        for l in 1..q.len() {
            let other = find_lambda(&SpectralProblem::new(&q, l).unwrap(), 1e-12).unwrap();
            prop_assert!((other - base).abs() < 1e-9, "l={} {} vs {}", l, other, base);
        }
    }

    #[test]
    fn operator_estimate_converges_at_first_order(q in period(5)) {
        prop_assume!(q.zero_count() < q.len());
        let lambda = find_lambda(&SpectralProblem::new(&q, 0).unwrap(), 1e-12).unwrap();
        let err = |n: usize| (discretize(&q, n).unwrap().lambda_estimate(1e-13).unwrap() - lambda).abs();
        let (coarse, fine) = (err(60), err(120));
        // the constant grows with the number of descents; 10/n covers m <= 5
        prop_assert!(fine <= 10.0 / 120.0, "{}: n*err = {}", q, 120.0 * fine);
        prop_assert!(fine <= 0.6 * coarse + 1e-9, "{}: {} then {}", q, coarse, fine);
    }
}
