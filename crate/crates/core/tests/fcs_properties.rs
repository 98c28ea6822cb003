use std::f64::consts::PI;

use fermionflow::fcs::{projected_kernel, semi_discrete_factorization_check, ContinuousFcs, DiscreteFcs};
use fermionflow::lattice::BandCoefficients;
use fermionflow::specfun::bessel_row;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn characteristic_function_bounds(
        ell_c in 1usize..5,
        t in 0.5f64..12.0,
        a in 1i64..5,
        len in proptest::option::of(0i64..10),
        lambda in -10.0f64..10.0,
    ) {
        let band = BandCoefficients::correlated(1.0 / ell_c as f64, ell_c).unwrap();
        let fcs = DiscreteFcs::new(&band, t, a, len.map(|l| a + l)).unwrap();
        let f = fcs.point(lambda).unwrap().value;
        prop_assert!(f.norm() <= 1.0 + 1e-9);
        prop_assert!((fcs.point(lambda + 2.0 * PI).unwrap().value - f).norm() <= 1e-9);
        prop_assert!((fcs.point(-lambda).unwrap().value - f.conj()).norm() <= 1e-10);
        let var = fcs.variance();
        prop_assert!(var >= -1e-6);
    }

    #[test]
    fn continuous_route_matches(ell_c in 1usize..4, t in 0.5f64..10.0, a in 1i64..4, lambda in -3.0f64..3.0) {
        let band = BandCoefficients::correlated(1.0 / ell_c as f64, ell_c).unwrap();
        let d = DiscreteFcs::new(&band, t, a, None).unwrap().point(lambda).unwrap().value;
        let c = ContinuousFcs::new(&band, t, a).unwrap().point(lambda).unwrap().value;
        prop_assert!((d - c).norm() <= 1e-8, "{} vs {}", d, c);
    }

    #[test]
    fn projected_kernel_direct_sum(n in -10i64..10, m in -10i64..10, a in 1i64..6, len in 0i64..8) {
        let t = 8.0;
        let b = a + len;
        let row = bessel_row(t, -80, 80).unwrap();
        let k = projected_kernel(t, a, Some(b)).unwrap();
        let sum: f64 = (a..=b).map(|j| row.get(n - j) * row.get(m - j)).sum();
        let phase = num_complex::Complex64::new(0.0, 1.0).powi((n - m) as i32);
        prop_assert!((k.entry(n, m).unwrap() - phase * sum).norm() < 1e-10);
    }

    #[test]
    fn semi_discrete_identity(t in 0.5f64..10.0, a in 1i64..4, dn in 1i64..6, dm in 1i64..6) {
        let (lhs, rhs) = semi_discrete_factorization_check(t, a, a - dn, a - dm).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-8, "{} vs {}", lhs, rhs);
    }
}

#[test]
fn full_period_returns_to_one() {
    let band = BandCoefficients::correlated(0.5, 2).unwrap();
    let fcs = DiscreteFcs::new(&band, 10.0, 1, None).unwrap();
    assert_eq!(fcs.point(0.0).unwrap().value.re, 1.0);
    let f = fcs.point(2.0 * PI).unwrap();
    assert!((f.value - 1.0).norm() < 1e-10);
    // the continued logarithm winds by 2πi⟨N⟩-free integer multiples only
    assert!(f.log.re.abs() < 1e-10);
}
