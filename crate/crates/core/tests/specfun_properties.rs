use fermionflow::specfun::{bessel_j, bessel_row, discrete_bessel_kernel, DiscreteBesselKernel};
use proptest::prelude::*;

#[test]
fn normalisation_on_the_reference_grid() {
    for t in [0.5f64, 1.0, 5.0, 10.0, 50.0] {
        let n = t.ceil() as i64 + 40;
        let row = bessel_row(t, -n, n).unwrap();
        let sum: f64 = row.values().iter().map(|v| v * v).sum();
        assert!((sum - 1.0).abs() < 1e-10, "t = {t}: {sum}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn christoffel_darboux(t in 0.1f64..40.0, m in -30i64..30, n in -30i64..30, a in -25i64..25, len in 0i64..40) {
        let b = a + len;
        let row = bessel_row(t, -200, 200).unwrap();
        let lhs: f64 = (a..=b).map(|j| row.get(n - j) * row.get(m - j)).sum();
        let rhs = discrete_bessel_kernel(t, m - b, n - b).unwrap()
            - discrete_bessel_kernel(t, m - a + 1, n - a + 1).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10, "lhs {} rhs {}", lhs, rhs);
    }

    #[test]
    fn kernel_is_exactly_symmetric(t in 0.0f64..60.0, m in -50i64..50, n in -50i64..50) {
        let k = DiscreteBesselKernel::new(t, m.min(n), m.max(n)).unwrap();
        prop_assert_eq!(k.eval(m, n), k.eval(n, m));
    }

    #[test]
    fn normalisation_for_random_arguments(t in 0.0f64..80.0) {
        let n = t.ceil() as i64 + 40;
        let row = bessel_row(t, -n, n).unwrap();
        let sum: f64 = row.values().iter().map(|v| v * v).sum();
        prop_assert!((sum - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rows_agree_with_single_orders(t in 0.0f64..30.0, n in -40i64..40) {
        let row = bessel_row(t, -45, 45).unwrap();
        let single = bessel_j(n, t).unwrap();
        prop_assert!((row.get(n) - single).abs() <= 1e-13 * (1.0 + single.abs()));
    }

    #[test]
    fn three_term_recurrence(t in 0.5f64..30.0, n in -30i64..30) {
        let row = bessel_row(t, -32, 32).unwrap();
        let residual = row.get(n - 1) + row.get(n + 1) - 2.0 * n as f64 / t * row.get(n);
        prop_assert!(residual.abs() < 1e-12 * (1.0 + (n as f64 / t).abs()));
    }
}
