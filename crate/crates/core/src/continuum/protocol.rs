//! Equilibrium momentum occupations `n^eq(k)` of the continuum protocols.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{integrate_adaptive, AdaptiveOptions};

/// Occupations below this are treated as zero when locating the momentum cutoff.
pub const OCCUPATION_FLOOR: f64 = 1e-14;
/// Below this width the flat limit is reported as divergent.
pub const FLAT_EPSILON_MIN: f64 = 1e-6;
/// Slack allowed above `n = 1` before a state is flagged unphysical.
pub const PHYSICAL_SLACK: f64 = 1e-9;
const MAX_BISECTION: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProtocolKind {
    Thermal { beta: f64 },
    Gaussian { alpha: f64 },
    DeformedSineKernel { gamma: f64, sigma: f64 },
    FermiSea,
    FlatLimit { epsilon: f64 },
}

impl ProtocolKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProtocolKind::Thermal { .. } => "thermal",
            ProtocolKind::Gaussian { .. } => "gaussian",
            ProtocolKind::DeformedSineKernel { .. } => "dsk",
            ProtocolKind::FermiSea => "fermi-sea",
            ProtocolKind::FlatLimit { .. } => "flat",
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProtocolKind::Thermal { beta } => write!(f, "thermal(beta={beta})"),
            ProtocolKind::Gaussian { alpha } => write!(f, "gaussian(alpha={alpha})"),
            ProtocolKind::DeformedSineKernel { gamma, sigma } => {
                write!(f, "dsk(gamma={gamma}, sigma={sigma})")
            }
            ProtocolKind::FermiSea => write!(f, "fermi-sea"),
            ProtocolKind::FlatLimit { epsilon } => write!(f, "flat(epsilon={epsilon})"),
        }
    }
}

/// A protocol family with its parameters and the mean density `n0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerProtocol {
    pub kind: ProtocolKind,
    pub n0: f64,
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {value}")))
    }
}

impl WignerProtocol {
    pub fn new(kind: ProtocolKind, n0: f64) -> Result<Self> {
        positive("n0", n0)?;
        match kind {
            ProtocolKind::Thermal { beta } => positive("beta", beta)?,
            ProtocolKind::Gaussian { alpha } => positive("alpha", alpha)?,
            ProtocolKind::DeformedSineKernel { gamma, sigma } => {
                positive("gamma", gamma)?;
                positive("sigma", sigma)?;
            }
            ProtocolKind::FermiSea => {}
            ProtocolKind::FlatLimit { epsilon } => {
                if !(epsilon > 0.0 && epsilon <= 1.0) {
                    return Err(Error::Domain {
                        what: "flat-limit occupation epsilon",
                        value: epsilon,
                        domain: "(0, 1]",
                    });
                }
            }
        }
        Ok(Self { kind, n0 })
    }

    pub fn thermal(beta: f64, n0: f64) -> Result<Self> {
        Self::new(ProtocolKind::Thermal { beta }, n0)
    }

    pub fn gaussian(alpha: f64, n0: f64) -> Result<Self> {
        Self::new(ProtocolKind::Gaussian { alpha }, n0)
    }

    pub fn deformed_sine_kernel(gamma: f64, sigma: f64, n0: f64) -> Result<Self> {
        Self::new(ProtocolKind::DeformedSineKernel { gamma, sigma }, n0)
    }

    pub fn fermi_sea(n0: f64) -> Result<Self> {
        Self::new(ProtocolKind::FermiSea, n0)
    }

    pub fn flat_limit(epsilon: f64, n0: f64) -> Result<Self> {
        Self::new(ProtocolKind::FlatLimit { epsilon }, n0)
    }

    pub fn resolve(&self) -> Result<ResolvedProtocol> {
        self.resolve_with(Tolerances::default())
    }

    pub fn resolve_with(&self, tolerances: Tolerances) -> Result<ResolvedProtocol> {
        let derived = match self.kind {
            ProtocolKind::Thermal { beta } => Derived::Thermal {
                eta: solve_thermal_eta(beta, self.n0, tolerances)?,
            },
            ProtocolKind::DeformedSineKernel { sigma, .. } => Derived::Normalization {
                norm: PI.sqrt() / (2.0 * sigma * self.n0) * libm::erf(sigma),
            },
            _ => Derived::None,
        };
        let mut resolved = ResolvedProtocol {
            protocol: *self,
            derived,
            k_cut: 0.0,
            tolerances,
        };
        resolved.k_cut = resolved.find_k_cut();
        Ok(resolved)
    }
}

/// Free-standing form of [`WignerProtocol::resolve`].
pub fn resolve_protocol(p: &WignerProtocol) -> Result<ResolvedProtocol> {
    p.resolve()
}

/// Quadrature tolerances used by every integral of a resolved protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
    pub max_depth: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            abs: 1e-12,
            rel: 1e-12,
            max_depth: 40,
        }
    }
}

impl Tolerances {
    pub fn adaptive(&self) -> AdaptiveOptions {
        AdaptiveOptions {
            abs_tol: self.abs,
            rel_tol: self.rel,
            max_depth: self.max_depth,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Derived {
    None,
    /// `η = βμ`; kept instead of `μ` so extreme temperatures stay representable.
    Thermal { eta: f64 },
    Normalization { norm: f64 },
}

/// `(n, 1 − n)` of the Fermi–Dirac distribution at exponent `a = β(k²/2 − μ)`.
#[inline]
fn fermi_dirac(a: f64) -> (f64, f64) {
    if a > 0.0 {
        let e = (-a).exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    } else {
        let e = a.exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    }
}

/// Smallest `k ≥ 0` with `f(k) < OCCUPATION_FLOOR` for a decreasing `f`:
/// doubling to bracket, then bisection to a relative width of 1e-12.
fn decay_cutoff<F: Fn(f64) -> f64>(f: F, start: f64) -> f64 {
    let mut hi = start.max(1e-3);
    while f(hi) >= OCCUPATION_FLOOR {
        hi *= 2.0;
        if !hi.is_finite() {
            return f64::MAX;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) >= OCCUPATION_FLOOR {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Density `(1/π) ∫_0^∞ n(k) dk` of the Fermi–Dirac occupation at `(β, η)`.
fn thermal_density(beta: f64, eta: f64, tol: Tolerances) -> Result<f64> {
    let occupation = |k: f64| fermi_dirac(0.5 * beta * k * k - eta).0;
    let k_cut = decay_cutoff(occupation, (2.0 * eta.max(0.0) / beta).sqrt());
    let fermi = if eta > 0.0 { vec![(2.0 * eta / beta).sqrt()] } else { vec![] };
    Ok(integrate_adaptive(occupation, 0.0, k_cut, &fermi, tol.adaptive())? / PI)
}

/// Bisection for `η = βμ` such that the Fermi–Dirac density equals `n0`.
fn solve_thermal_eta(beta: f64, n0: f64, tol: Tolerances) -> Result<f64> {
    let g = |eta: f64| thermal_density(beta, eta, tol).map(|d| d - n0);
    // the Boltzmann density bounds the Fermi–Dirac one from above
    let mut lo = (n0 * (2.0 * PI * beta).sqrt()).ln();
    // half filling inside |k| < sqrt(2μ) bounds it from below
    let mut hi = (2.0 * PI * PI * n0 * n0 * beta).max(lo + 1.0).max(1.0);
    let mut steps = 0;
    while g(lo)? > 0.0 {
        lo -= lo.abs() + 1.0;
        steps += 1;
        if steps > MAX_BISECTION {
            return Err(Error::NonConvergence {
                what: "chemical potential bracket",
                iterations: steps,
                residual: lo,
            });
        }
    }
    while g(hi)? < 0.0 {
        hi += hi.abs() + 1.0;
        steps += 1;
        if steps > MAX_BISECTION {
            return Err(Error::NonConvergence {
                what: "chemical potential bracket",
                iterations: steps,
                residual: hi,
            });
        }
    }
    for _ in 0..MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        let r = g(mid)?;
        if r == 0.0 || hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1.0) {
            return Ok(mid);
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    let residual = g(mid)?.abs();
    if residual <= 1e-12 * n0 {
        return Ok(mid);
    }
    Err(Error::NonConvergence {
        what: "chemical potential bisection",
        iterations: MAX_BISECTION,
        residual,
    })
}

/// A protocol with its derived constants (`μ` or `𝒩`) and momentum cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedProtocol {
    protocol: WignerProtocol,
    derived: Derived,
    k_cut: f64,
    tolerances: Tolerances,
}

impl ResolvedProtocol {
    pub fn protocol(&self) -> &WignerProtocol {
        &self.protocol
    }

    pub fn kind(&self) -> ProtocolKind {
        self.protocol.kind
    }

    pub fn n0(&self) -> f64 {
        self.protocol.n0
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances
    }

    /// Chemical potential of the thermal protocol.
    pub fn chemical_potential(&self) -> Option<f64> {
        match (self.derived, self.protocol.kind) {
            (Derived::Thermal { eta }, ProtocolKind::Thermal { beta }) => Some(eta / beta),
            _ => None,
        }
    }

    /// Normalisation `𝒩` of the deformed sine kernel.
    pub fn normalization(&self) -> Option<f64> {
        match self.derived {
            Derived::Normalization { norm } => Some(norm),
            _ => None,
        }
    }

    /// `(n^eq(k), 1 − n^eq(k))`, the second computed without cancellation.
    pub fn occupation(&self, k: f64) -> (f64, f64) {
        let k = k.abs();
        let n0 = self.protocol.n0;
        let n = match (self.protocol.kind, self.derived) {
            (ProtocolKind::Thermal { beta }, Derived::Thermal { eta }) => {
                return fermi_dirac(0.5 * beta * k * k - eta);
            }
            (ProtocolKind::Gaussian { alpha }, _) => {
                (PI / alpha).sqrt() * n0 * (-k * k / (4.0 * alpha)).exp()
            }
            (ProtocolKind::DeformedSineKernel { gamma, sigma }, Derived::Normalization { norm }) => {
                if k < gamma {
                    PI / (norm * gamma) * (-(sigma * k / gamma).powi(2)).exp()
                } else {
                    0.0
                }
            }
            (ProtocolKind::FermiSea, _) => {
                if k < PI * n0 {
                    1.0
                } else {
                    0.0
                }
            }
            (ProtocolKind::FlatLimit { epsilon }, _) => {
                if k < PI * n0 / epsilon {
                    epsilon
                } else {
                    0.0
                }
            }
            _ => unreachable!("derived constants always match the protocol kind"),
        };
        (n, 1.0 - n)
    }

    /// `n^eq(k)`.
    pub fn n_eq(&self, k: f64) -> f64 {
        self.occupation(k).0
    }

    /// Largest occupation, reached at `k = 0` for these even, bell-shaped families.
    pub fn max_occupation(&self) -> f64 {
        self.n_eq(0.0)
    }

    /// Whether `0 ≤ n^eq ≤ 1` holds (up to [`PHYSICAL_SLACK`]).
    pub fn is_physical(&self) -> bool {
        self.max_occupation() <= 1.0 + PHYSICAL_SLACK
    }

    /// Momentum beyond which `n^eq` vanishes or stays below [`OCCUPATION_FLOOR`].
    pub fn k_cut(&self) -> f64 {
        self.k_cut
    }

    fn find_k_cut(&self) -> f64 {
        let n0 = self.protocol.n0;
        match self.protocol.kind {
            ProtocolKind::DeformedSineKernel { gamma, .. } => gamma,
            ProtocolKind::FermiSea => PI * n0,
            ProtocolKind::FlatLimit { epsilon } => PI * n0 / epsilon,
            ProtocolKind::Thermal { .. } => {
                let start = self.fermi_momentum().unwrap_or(1.0);
                decay_cutoff(|k| self.n_eq(k), start)
            }
            ProtocolKind::Gaussian { alpha } => decay_cutoff(|k| self.n_eq(k), alpha.sqrt()),
        }
    }

    /// `sqrt(2μ)` for a thermal state with `μ > 0`.
    fn fermi_momentum(&self) -> Option<f64> {
        self.chemical_potential()
            .filter(|mu| *mu > 0.0)
            .map(|mu| (2.0 * mu).sqrt())
    }

    /// Interior momenta where `n^eq` changes fastest or is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.fermi_momentum()
            .filter(|kf| *kf < self.k_cut)
            .into_iter()
            .collect()
    }

    /// `(1/π) ∫_0^{k_cut} f(k, n, 1−n) dk`, the `dk/2π` integral of an even integrand.
    pub(crate) fn momentum_integral<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(f64, f64, f64) -> f64,
    {
        let v = integrate_adaptive(
            |k| {
                let (n, hole) = self.occupation(k);
                f(k, n, hole)
            },
            0.0,
            self.k_cut,
            &self.breakpoints(),
            self.tolerances.adaptive(),
        )?;
        Ok(v / PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn density(p: &ResolvedProtocol) -> f64 {
        p.momentum_integral(|_, n, _| n).unwrap()
    }

    #[test]
    fn every_protocol_is_normalised() {
        let n0 = 0.3;
        let protocols = [
            WignerProtocol::thermal(0.01, n0),
            WignerProtocol::thermal(1.0, n0),
            WignerProtocol::thermal(300.0, n0),
            WignerProtocol::gaussian(0.5, n0),
            WignerProtocol::gaussian(20.0, n0),
            WignerProtocol::deformed_sine_kernel(3.0, 2.0, n0),
            WignerProtocol::deformed_sine_kernel(8.0, 0.5, n0),
            WignerProtocol::fermi_sea(n0),
            WignerProtocol::flat_limit(0.25, n0),
        ];
        for p in protocols {
            let r = p.unwrap().resolve().unwrap();
            assert_abs_diff_eq!(density(&r), n0, epsilon = 1e-9);
        }
    }

    #[test]
    fn thermal_unit_density() {
        let r = WignerProtocol::thermal(1.0, 1.0).unwrap().resolve().unwrap();
        let mu = r.chemical_potential().unwrap();
        assert_abs_diff_eq!(density(&r), 1.0, epsilon = 1e-9);
        // degenerate regime: μ close to (π n0)²/2 = 4.93
        assert!(mu > 4.0 && mu < 5.5, "{mu}");
    }

    #[test]
    fn named_occupations() {
        let sea = WignerProtocol::fermi_sea(0.5).unwrap().resolve().unwrap();
        assert_eq!(sea.n_eq(1.5), 1.0);
        assert_eq!(sea.n_eq(1.6), 0.0);
        let flat = WignerProtocol::flat_limit(0.1, 0.5).unwrap().resolve().unwrap();
        assert_eq!(flat.n_eq(15.0), 0.1);
        assert_eq!(flat.n_eq(16.0), 0.0);
        let g = WignerProtocol::gaussian(2.0, 0.4).unwrap().resolve().unwrap();
        assert_abs_diff_eq!(g.n_eq(0.0), (PI / 2.0).sqrt() * 0.4, epsilon = 1e-15);
        let dsk = WignerProtocol::deformed_sine_kernel(3.0, 2.0, 0.2).unwrap().resolve().unwrap();
        assert_eq!(dsk.n_eq(3.0), 0.0);
        assert_eq!(dsk.n_eq(-3.5), 0.0);
        assert!(dsk.n_eq(2.9) > 0.0);
        assert_abs_diff_eq!(
            dsk.normalization().unwrap(),
            PI.sqrt() / 0.8 * libm::erf(2.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn thermal_tail_beats_gaussian_bound() {
        let beta = 2.0;
        let r = WignerProtocol::thermal(beta, 0.5).unwrap().resolve().unwrap();
        let mu = r.chemical_potential().unwrap();
        for k in [5.0, 10.0, 20.0] {
            let n = r.n_eq(k);
            assert!(n <= (-beta * k * k / 4.0).exp() * (beta * mu).exp().max(1.0));
        }
        assert!(r.n_eq(r.k_cut()) < OCCUPATION_FLOOR);
        assert!(r.n_eq(0.999 * r.k_cut()) >= OCCUPATION_FLOOR);
    }

    #[test]
    fn occupations_are_even_and_bounded() {
        let protocols = [
            WignerProtocol::thermal(0.7, 0.2).unwrap(),
            WignerProtocol::gaussian(1.0, 0.5).unwrap(),
            WignerProtocol::deformed_sine_kernel(6.0, 2.0, 0.5).unwrap(),
        ];
        for p in protocols {
            let r = p.resolve().unwrap();
            assert!(r.is_physical());
            for i in 0..200 {
                let k = 0.05 * i as f64;
                assert_eq!(r.n_eq(k), r.n_eq(-k));
                let (n, hole) = r.occupation(k);
                assert!((0.0..=1.0 + 1e-12).contains(&n));
                assert_abs_diff_eq!(n + hole, 1.0, epsilon = 1e-15);
            }
        }
        let dense = WignerProtocol::gaussian(0.1, 1.0).unwrap().resolve().unwrap();
        assert!(!dense.is_physical());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(WignerProtocol::thermal(0.0, 0.5).is_err());
        assert!(WignerProtocol::gaussian(-1.0, 0.5).is_err());
        assert!(WignerProtocol::deformed_sine_kernel(1.0, 0.0, 0.5).is_err());
        assert!(WignerProtocol::flat_limit(1.5, 0.5).is_err());
        assert!(WignerProtocol::flat_limit(0.0, 0.5).is_err());
        assert!(WignerProtocol::fermi_sea(0.0).is_err());
    }
}
