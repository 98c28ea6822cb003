use std::f64::consts::PI;

use fermionflow::continuum::{fermi_sea_transport, WignerField, WignerProtocol};
use proptest::prelude::*;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn assert_monotone(values: &[(f64, f64)], increasing: bool, label: &str) {
    for w in values.windows(2) {
        let (dt, dc) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        if increasing {
            assert!(dt > 0.0 && dc > 0.0, "{label}: {w:?}");
        } else {
            assert!(dt < 0.0 && dc < 0.0, "{label}: {w:?}");
        }
    }
}

fn measures_along(grid: &[f64], make: impl Fn(f64) -> WignerProtocol) -> Vec<(f64, f64)> {
    grid.iter()
        .map(|&p| {
            let r = make(p).resolve().unwrap();
            (r.mu_t().unwrap(), r.mu_c().unwrap())
        })
        .collect()
}

#[test]
fn thermal_measures_fall_with_inverse_temperature() {
    let values = measures_along(&log_grid(1e-2, 30.0, 50), |b| WignerProtocol::thermal(b, 0.5).unwrap());
    assert_monotone(&values, false, "thermal");
}

#[test]
fn gaussian_measures_rise_with_alpha() {
    let values = measures_along(&log_grid(1e-2, 1e2, 50), |a| WignerProtocol::gaussian(a, 0.5).unwrap());
    assert_monotone(&values, true, "gaussian");
}

#[test]
fn dsk_measures_rise_with_gamma() {
    let values = measures_along(&log_grid(0.5, 50.0, 50), |g| {
        WignerProtocol::deformed_sine_kernel(g, 2.0, 0.5).unwrap()
    });
    assert_monotone(&values, true, "dsk");
}

#[test]
fn normalisation_holds_across_the_grids() {
    for n0 in [0.1, 0.5, 1.0] {
        let mut protocols = vec![WignerProtocol::fermi_sea(n0).unwrap()];
        for p in log_grid(1e-2, 30.0, 7) {
            protocols.push(WignerProtocol::thermal(p, n0).unwrap());
            protocols.push(WignerProtocol::gaussian(p, n0).unwrap());
        }
        for g in log_grid(0.5, 50.0, 7) {
            protocols.push(WignerProtocol::deformed_sine_kernel(g, 2.0, n0).unwrap());
        }
        for p in protocols {
            let r = p.resolve().unwrap();
            assert!((r.correlation(0.0).unwrap() - n0).abs() < 1e-9, "{p:?}");
        }
    }
}

#[test]
fn parseval_for_the_three_families() {
    for p in [
        WignerProtocol::gaussian(0.7, 0.5).unwrap(),
        WignerProtocol::deformed_sine_kernel(4.0, 2.0, 0.3).unwrap(),
        WignerProtocol::thermal(3.0, 0.5).unwrap(),
    ] {
        let (r_side, k_side) = p.resolve().unwrap().parseval_sides().unwrap();
        assert!((r_side - k_side).abs() < 1e-6, "{p:?}: {r_side} vs {k_side}");
    }
}

#[test]
fn ballistic_linearity() {
    for p in [
        WignerProtocol::thermal(0.3, 0.4).unwrap(),
        WignerProtocol::gaussian(2.0, 0.4).unwrap(),
        WignerProtocol::deformed_sine_kernel(3.0, 2.0, 0.4).unwrap(),
        WignerProtocol::fermi_sea(0.4).unwrap(),
    ] {
        let r = p.resolve().unwrap();
        let base = r.transferred_particles(1.0).unwrap();
        assert!((base - r.mu_t().unwrap()).abs() < 1e-8 * base);
        for t in [2.0, 5.0, 10.0] {
            let ratio = r.transferred_particles(t).unwrap() / t;
            assert!((ratio - base).abs() < 1e-6 * base, "{p:?} t = {t}");
        }
    }
}

#[test]
fn cold_thermal_correlations_follow_the_sine_kernel() {
    // envelope-relative error; the sine itself has zeros on [1, 10]
    let n0 = 0.5;
    let r = WignerProtocol::thermal(100.0, n0).unwrap().resolve().unwrap();
    for i in 0..=90 {
        let x = 1.0 + 0.1 * i as f64;
        let c = r.correlation(x).unwrap();
        let sine = (PI * n0 * x).sin() / (PI * x);
        assert!((c - sine).abs() * PI * x <= 0.05, "r = {x}: {c} vs {sine}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn fermi_sea_is_the_transport_minimum(family in 0usize..3, log_p in -4.0f64..3.0, n0 in 0.05f64..1.0) {
        let p = (log_p).exp();
        let protocol = match family {
            0 => WignerProtocol::thermal(p, n0).unwrap(),
            1 => WignerProtocol::gaussian(p, n0).unwrap(),
            _ => WignerProtocol::deformed_sine_kernel(p.max(0.05), 2.0, n0).unwrap(),
        };
        let resolved = protocol.resolve().unwrap();
        // the bound is about admissible states, n^eq ≤ 1
        prop_assume!(resolved.is_physical());
        let mu_t = resolved.mu_t().unwrap();
        prop_assert!(mu_t >= fermi_sea_transport(n0) - 1e-9, "{:?}: {}", protocol, mu_t);
    }

    #[test]
    fn wigner_transport_is_exact(x in -20.0f64..20.0, k in -5.0f64..5.0, t in 0.0f64..10.0) {
        let r = WignerProtocol::gaussian(1.3, 0.4).unwrap().resolve().unwrap();
        let field = WignerField::new(&r);
        let expected = r.n_eq(k) * fermionflow::continuum::heaviside(k * t - x);
        prop_assert_eq!(field.at(x, k, t), expected);
    }
}
