//! Hydrodynamic limit `t, m → ∞` at fixed `u = m/t` for one particle per cell.

use std::f64::consts::PI;

use crate::error::{Error, Result};

fn check_single_particle_cells(n0: f64, ell_c: usize) -> Result<()> {
    if ell_c == 0 {
        return Err(Error::invalid("ell_c", "coherence length must be at least 1"));
    }
    if (n0 * ell_c as f64 - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(
            "n0",
            format!("the hydrodynamic profile needs n0 = 1/ell_c, got n0 = {n0}, ell_c = {ell_c}"),
        ));
    }
    Ok(())
}

/// `cos(kπ/2)` without rounding noise.
fn cos_half_pi(k: usize) -> f64 {
    match k % 4 {
        0 => 1.0,
        2 => -1.0,
        _ => 0.0,
    }
}

/// `Φ(u) = arccos(u)/(πℓ_c) + (2/π) Σ_{k=1}^{ℓ_c} cos(kπ/2) (ℓ_c−k)/(kℓ_c²) sin(k arccos u)`.
pub fn hydro_density(u: f64, n0: f64, ell_c: usize) -> Result<f64> {
    check_single_particle_cells(n0, ell_c)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain {
            what: "ray u = m/t",
            value: u,
            domain: "[0, 1]",
        });
    }
    let theta = u.acos();
    let l = ell_c as f64;
    let mut phi = theta / (PI * l);
    for k in 1..=ell_c {
        let c = cos_half_pi(k);
        if c != 0.0 {
            let kf = k as f64;
            phi += 2.0 / PI * c * (l - kf) / (kf * l * l) * (kf * theta).sin();
        }
    }
    Ok(phi)
}

/// `α_T` with `ℓ_c α_T = 1/π − (2/(πℓ_c)) Σ_{k=2}^{ℓ_c} cos²(kπ/2) (ℓ_c−k)/(k²−1)`.
pub fn hydro_slope(ell_c: usize) -> Result<f64> {
    if ell_c == 0 {
        return Err(Error::invalid("ell_c", "coherence length must be at least 1"));
    }
    let l = ell_c as f64;
    let correction: f64 = (2..=ell_c)
        .map(|k| {
            let kf = k as f64;
            cos_half_pi(k).powi(2) * (l - kf) / (kf * kf - 1.0)
        })
        .sum();
    Ok((1.0 / PI - 2.0 / (PI * l) * correction) / l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn profile_endpoints() {
        for ell_c in 1..=8 {
            assert_abs_diff_eq!(hydro_density(1.0, 1.0 / ell_c as f64, ell_c).unwrap(), 0.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(hydro_density(0.0, 1.0, 1).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            hydro_density(0.5, 0.5, 2).unwrap(),
            0.5_f64.acos() / (2.0 * PI),
            epsilon = 1e-15
        );
    }

    #[test]
    fn profile_rejects_general_density() {
        assert!(hydro_density(0.5, 0.5, 4).is_err());
        assert!(hydro_density(1.2, 1.0, 1).is_err());
        assert!(hydro_density(-0.1, 1.0, 1).is_err());
    }

    #[test]
    fn slope_reference_values() {
        assert_abs_diff_eq!(hydro_slope(1).unwrap(), 1.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(hydro_slope(2).unwrap(), 1.0 / (2.0 * PI), epsilon = 1e-15);
        assert_abs_diff_eq!(hydro_slope(4).unwrap(), 1.0 / (6.0 * PI), epsilon = 1e-15);
    }

    #[test]
    fn slope_is_strictly_decreasing() {
        let slopes: Vec<f64> = (1..=8).map(|l| hydro_slope(l).unwrap()).collect();
        assert!(slopes.windows(2).all(|w| w[1] < w[0]), "{slopes:?}");
    }

    #[test]
    fn slope_is_the_integrated_profile() {
        // N_R/t → ∫_0^1 Φ(u) du
        for ell_c in [1, 2, 3, 4, 8] {
            let rule = crate::specfun::gauss_legendre(200, 0.0, 1.0).unwrap();
            let n0 = 1.0 / ell_c as f64;
            let integral = rule.integrate(|u| hydro_density(u, n0, ell_c).unwrap());
            assert_abs_diff_eq!(integral, hydro_slope(ell_c).unwrap(), epsilon = 1e-6);
        }
    }
}
