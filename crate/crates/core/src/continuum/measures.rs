//! Transport and correlation measures, and the real-space observables they summarise.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::continuum::protocol::{ProtocolKind, ResolvedProtocol, Tolerances, FLAT_EPSILON_MIN};
use crate::error::{Error, Result};
use crate::specfun::integrate_adaptive;

/// The three measures of one resolved protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub protocol: ProtocolKind,
    pub n0: f64,
    pub chemical_potential: Option<f64>,
    pub normalization: Option<f64>,
    pub mu_t: f64,
    pub mu_c: f64,
    pub mu_p: f64,
    pub tolerances: Tolerances,
}

impl ResolvedProtocol {
    /// `μ_T = ∫_0^∞ dk/2π k n^eq(k)`.
    pub fn mu_t(&self) -> Result<f64> {
        if let ProtocolKind::FlatLimit { epsilon } = self.kind() {
            if epsilon < FLAT_EPSILON_MIN {
                return Err(Error::Divergence {
                    what: "transport measure of the flat limit",
                    reason: format!("μ_T = πn0²/(4ε) grows without bound; ε = {epsilon} is below {FLAT_EPSILON_MIN}"),
                });
            }
        }
        // the (1/π)∫_0 form integrates over both signs of k; μ_T keeps only k > 0
        Ok(0.5 * self.momentum_integral(|k, n, _| k * n)?)
    }

    /// `μ_C = ∫ dk/2π n(1 − n)`.
    pub fn mu_c(&self) -> Result<f64> {
        self.momentum_integral(|_, n, hole| n * hole)
    }

    /// `μ_P = −∫ dk/2π ln(n² + (1 − n)²)`, written as `−ln(1 − 2n(1−n))`.
    pub fn mu_p(&self) -> Result<f64> {
        self.momentum_integral(|_, n, hole| -(-2.0 * n * hole).ln_1p())
    }

    pub fn measures(&self) -> Result<MeasureReport> {
        Ok(MeasureReport {
            protocol: self.kind(),
            n0: self.n0(),
            chemical_potential: self.chemical_potential(),
            normalization: self.normalization(),
            mu_t: self.mu_t()?,
            mu_c: self.mu_c()?,
            mu_p: self.mu_p()?,
            tolerances: self.tolerances(),
        })
    }

    /// `C^eq(r) = ∫ dk/2π n^eq(k) e^{ikr}`, real by parity.
    pub fn correlation(&self, r: f64) -> Result<f64> {
        self.momentum_integral(|k, n, _| n * (k * r).cos())
    }

    /// `ρ(x, t) = ∫_{x/t}^∞ dk/2π n^eq(k)` for `t > 0`.
    pub fn density_profile(&self, x: f64, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain {
                what: "time t",
                value: t,
                domain: "(0, ∞)",
            });
        }
        let v = x / t;
        let k_cut = self.k_cut();
        let tol = self.tolerances().adaptive();
        let n = |k: f64| self.n_eq(k);
        let bps = self.breakpoints();
        if v >= 0.0 {
            if v >= k_cut {
                return Ok(0.0);
            }
            Ok(integrate_adaptive(n, v, k_cut, &bps, tol)? / (2.0 * PI))
        } else {
            let w = (-v).min(k_cut);
            Ok(0.5 * self.n0() + integrate_adaptive(n, 0.0, w, &bps, tol)? / (2.0 * PI))
        }
    }

    /// `N_R(t) = ∫_0^∞ ρ(x, t) dx` as a genuine two-dimensional quadrature.
    pub fn transferred_particles(&self, t: f64) -> Result<f64> {
        let x_max = self.k_cut() * t;
        let bps: Vec<f64> = self.breakpoints().iter().map(|k| k * t).collect();
        let mut failure = None;
        let value = integrate_adaptive(
            |x| match self.density_profile(x, t) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            0.0,
            x_max,
            &bps,
            self.tolerances().adaptive(),
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(value),
        }
    }

    /// `(∫|C^eq(r)|² dr, ∫|n^eq(k)|² dk/2π)`, equal by Parseval.
    ///
    /// The real-space integral runs over `[0, R]` with `R` doubled until the
    /// added piece falls below `1e-10`. For the deformed sine kernel, whose
    /// correlations decay as `C(r) ≈ A sin(γr)/r` with `A = e^{−σ²}/(𝒩γ)`, the
    /// oscillation-averaged tail `A²/(2R)` is added analytically.
    pub fn parseval_sides(&self) -> Result<(f64, f64)> {
        let k_side = self.momentum_integral(|_, n, _| n * n)?;
        let tol = self.tolerances().adaptive();
        let mut failure = None;
        let mut c2 = |r: f64| match self.correlation(r) {
            Ok(c) => c * c,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        };
        // the 1/r² tail amplitude of C(r)², averaged over its oscillation
        let tail_amplitude = match (self.kind(), self.normalization()) {
            (ProtocolKind::DeformedSineKernel { gamma, sigma }, Some(norm)) => {
                let a = (-sigma * sigma).exp() / (norm * gamma);
                0.5 * a * a
            }
            _ => 0.0,
        };
        let mut reach = 4.0 * PI / self.k_cut().max(1e-3);
        let mut half_line = integrate_adaptive(&mut c2, 0.0, reach, &[], tol)?;
        let mut converged = false;
        for _ in 0..24 {
            let piece = integrate_adaptive(&mut c2, reach, 2.0 * reach, &[], tol)?;
            let tail_change = tail_amplitude / reach - tail_amplitude / (2.0 * reach);
            half_line += piece;
            reach *= 2.0;
            if (piece - tail_change).abs() < 1e-10 && piece.abs() < 1e-6 {
                converged = true;
                break;
            }
        }
        if let Some(e) = failure {
            return Err(e);
        }
        if !converged {
            return Err(Error::NonConvergence {
                what: "Parseval real-space integral",
                iterations: 24,
                residual: reach,
            });
        }
        Ok((2.0 * (half_line + tail_amplitude / reach), k_side))
    }
}

/// `μ_T` of the Fermi sea at density `n0`, the smallest among bell-shaped states.
pub fn fermi_sea_transport(n0: f64) -> f64 {
    PI * n0 * n0 / 4.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::protocol::WignerProtocol;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fermi_sea_measures() {
        let r = WignerProtocol::fermi_sea(0.37).unwrap().resolve().unwrap();
        assert_abs_diff_eq!(r.mu_t().unwrap(), fermi_sea_transport(0.37), epsilon = 1e-12);
        assert_eq!(r.mu_c().unwrap(), 0.0);
        assert_eq!(r.mu_p().unwrap(), 0.0);
    }

    #[test]
    fn gaussian_closed_forms() {
        for &(alpha, n0) in &[(0.1, 0.1), (1.0, 0.3), (10.0, 1.0), (PI, 1.0)] {
            let r = WignerProtocol::gaussian(alpha, n0).unwrap().resolve().unwrap();
            let mu_t = r.mu_t().unwrap();
            assert_abs_diff_eq!(mu_t, n0 * (alpha / PI).sqrt(), epsilon = 1e-10);
            let mu_c = n0 * (1.0 - n0 * (PI / (2.0 * alpha)).sqrt());
            assert_abs_diff_eq!(r.mu_c().unwrap(), mu_c, epsilon = 1e-10);
        }
        let r = WignerProtocol::gaussian(PI, 1.0).unwrap().resolve().unwrap();
        assert_abs_diff_eq!(r.mu_c().unwrap(), 1.0 - 0.5_f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn thermal_transport_closed_form() {
        // ∫_0^∞ k n dk / 2π = ln(1 + e^{βμ}) / (2πβ)
        for &(beta, n0) in &[(0.01, 0.1), (1.0, 0.5), (30.0, 0.1)] {
            let r = WignerProtocol::thermal(beta, n0).unwrap().resolve().unwrap();
            let mu = r.chemical_potential().unwrap();
            let exact = (beta * mu).exp().ln_1p() / (2.0 * PI * beta);
            assert_abs_diff_eq!(r.mu_t().unwrap(), exact, epsilon = 1e-12 + 1e-10 * exact);
        }
    }

    #[test]
    fn dsk_transport_closed_form() {
        let (gamma, sigma, n0) = (5.0, 2.0, 0.3);
        let r = WignerProtocol::deformed_sine_kernel(gamma, sigma, n0).unwrap().resolve().unwrap();
        let exact = gamma * n0 * (1.0 - (-sigma * sigma).exp())
            / (2.0 * sigma * PI.sqrt() * libm::erf(sigma));
        assert_abs_diff_eq!(r.mu_t().unwrap(), exact, epsilon = 1e-12);
    }

    #[test]
    fn flat_limit_measures() {
        let n0 = 0.4;
        for eps in [1.0, 0.5, 0.1, 0.01] {
            let r = WignerProtocol::flat_limit(eps, n0).unwrap().resolve().unwrap();
            assert_abs_diff_eq!(r.mu_c().unwrap(), n0 * (1.0 - eps), epsilon = 1e-12);
            assert_abs_diff_eq!(r.mu_t().unwrap(), PI * n0 * n0 / (4.0 * eps), epsilon = 1e-10);
        }
        let r = WignerProtocol::flat_limit(1e-7, n0).unwrap().resolve().unwrap();
        assert!(matches!(r.mu_t(), Err(Error::Divergence { .. })));
    }

    #[test]
    fn purity_is_positive_and_stable() {
        let r = WignerProtocol::gaussian(PI, 1.0).unwrap().resolve().unwrap();
        let coarse = r.mu_p().unwrap();
        let fine = WignerProtocol::gaussian(PI, 1.0)
            .unwrap()
            .resolve_with(Tolerances {
                abs: 1e-14,
                rel: 1e-14,
                max_depth: 50,
            })
            .unwrap()
            .mu_p()
            .unwrap();
        assert!(coarse > 0.0);
        assert_abs_diff_eq!(coarse, fine, epsilon = 1e-8);
    }

    #[test]
    fn correlations_from_occupations() {
        let g = WignerProtocol::gaussian(0.7, 0.4).unwrap().resolve().unwrap();
        for r in [0.0, 0.5, 1.3, 3.0] {
            assert_abs_diff_eq!(g.correlation(r).unwrap(), 0.4 * (-0.7 * r * r).exp(), epsilon = 1e-10);
        }
        let sea = WignerProtocol::fermi_sea(0.3).unwrap().resolve().unwrap();
        for r in [0.7, 2.0, 9.5] {
            let exact = (PI * 0.3 * r).sin() / (PI * r);
            assert_abs_diff_eq!(sea.correlation(r).unwrap(), exact, epsilon = 1e-9);
        }
        let dsk = WignerProtocol::deformed_sine_kernel(4.0, 2.0, 0.3).unwrap().resolve().unwrap();
        let norm = dsk.normalization().unwrap();
        let rule = crate::specfun::gauss_legendre(80, 0.0, 1.0).unwrap();
        for r in [0.0, 1.0, 4.0] {
            let direct = rule.integrate(|s| (4.0 * r * s).cos() * (-4.0 * s * s).exp()) / norm;
            assert_abs_diff_eq!(dsk.correlation(r).unwrap(), direct, epsilon = 1e-10);
        }
    }

    #[test]
    fn density_profile_limits() {
        let r = WignerProtocol::thermal(1.0, 0.5).unwrap().resolve().unwrap();
        assert_abs_diff_eq!(r.density_profile(0.0, 3.0).unwrap(), 0.25, epsilon = 1e-10);
        assert_abs_diff_eq!(r.density_profile(-1e6, 3.0).unwrap(), 0.5, epsilon = 1e-10);
        let sea = WignerProtocol::fermi_sea(0.5).unwrap().resolve().unwrap();
        assert_eq!(sea.density_profile(PI * 0.5 * 2.0, 2.0).unwrap(), 0.0);
        assert!(r.density_profile(1.0, 0.0).is_err());
    }

    #[test]
    fn transferred_particles_grow_linearly() {
        let r = WignerProtocol::gaussian(1.0, 0.5).unwrap().resolve().unwrap();
        let mu_t = r.mu_t().unwrap();
        for t in [1.0, 5.0] {
            let n_r = r.transferred_particles(t).unwrap();
            assert_abs_diff_eq!(n_r / t, mu_t, epsilon = 1e-6 * mu_t);
        }
    }

    #[test]
    fn parseval_gaussian() {
        let r = WignerProtocol::gaussian(1.0, 0.5).unwrap().resolve().unwrap();
        let (lhs, rhs) = r.parseval_sides().unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-6);
    }
}
