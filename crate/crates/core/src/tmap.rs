//! Transition maps between the transport measure and the correlation measures.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continuum::{fermi_sea_transport, ProtocolKind, ResolvedProtocol, WignerProtocol};
use crate::error::{Error, Result};
use crate::specfun::{integrate_adaptive, AdaptiveOptions};

/// Width of the deformed sine kernel used for the transition map.
pub const DSK_SIGMA: f64 = 2.0;
const MAX_DOUBLINGS: usize = 100;
const MAX_BISECTION: usize = 200;

/// The one-parameter families spanning the transition map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Parameter `β`.
    Thermal,
    /// Parameter `α`.
    Gaussian,
    /// Parameter `γ`, with `σ = DSK_SIGMA`.
    DeformedSineKernel,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Thermal, Family::Gaussian, Family::DeformedSineKernel];

    pub fn protocol(self, parameter: f64, n0: f64) -> Result<WignerProtocol> {
        match self {
            Family::Thermal => WignerProtocol::thermal(parameter, n0),
            Family::Gaussian => WignerProtocol::gaussian(parameter, n0),
            Family::DeformedSineKernel => WignerProtocol::deformed_sine_kernel(parameter, DSK_SIGMA, n0),
        }
    }

    /// `μ_T` increases with the parameter except for the thermal family.
    fn increasing(self) -> bool {
        !matches!(self, Family::Thermal)
    }

    pub fn parameter_name(self) -> &'static str {
        match self {
            Family::Thermal => "beta",
            Family::Gaussian => "alpha",
            Family::DeformedSineKernel => "gamma",
        }
    }
}

/// The correlation measure placed on the other side of the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetMeasure {
    Correlation,
    Purity,
}

impl TargetMeasure {
    pub fn evaluate(self, p: &ResolvedProtocol) -> Result<f64> {
        match self {
            TargetMeasure::Correlation => p.mu_c(),
            TargetMeasure::Purity => p.mu_p(),
        }
    }
}

fn mu_t_of(family: Family, parameter: f64, n0: f64) -> Result<f64> {
    family.protocol(parameter, n0)?.resolve()?.mu_t()
}

/// The parameter of `family` whose state has `μ_T = x`.
///
/// Bisection in the logarithm of the parameter, after a doubling search for
/// a bracket. Failures are wrapped with the offending `x`.
pub fn invert_mu_t(family: Family, x: f64, n0: f64) -> Result<f64> {
    invert_mu_t_inner(family, x, n0).map_err(|e| match e {
        Error::Inversion { .. } => e,
        other => Error::Inversion {
            x,
            source: Box::new(other),
        },
    })
}

fn invert_mu_t_inner(family: Family, x: f64, n0: f64) -> Result<f64> {
    if !(n0 > 0.0 && n0.is_finite()) {
        return Err(Error::invalid("n0", format!("must be positive, got {n0}")));
    }
    let floor = match family {
        Family::Gaussian => 0.0,
        Family::Thermal | Family::DeformedSineKernel => fermi_sea_transport(n0),
    };
    if !(x > floor && x.is_finite()) {
        return Err(Error::Domain {
            what: "target transport measure x",
            value: x,
            domain: match family {
                Family::Gaussian => "(0, ∞)",
                _ => "(πn0²/4, ∞)",
            },
        });
    }
    // signed residual that increases with ln(parameter)
    let residual = |ln_p: f64| -> Result<f64> {
        let r = mu_t_of(family, ln_p.exp(), n0)? - x;
        Ok(if family.increasing() { r } else { -r })
    };
    let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
    let mut expansions = 0;
    while residual(lo)? > 0.0 {
        lo -= std::f64::consts::LN_2;
        expansions += 1;
        if expansions > MAX_DOUBLINGS {
            return Err(Error::NonConvergence {
                what: "transport inversion bracket",
                iterations: expansions,
                residual: lo.exp(),
            });
        }
    }
    while residual(hi)? < 0.0 {
        hi += std::f64::consts::LN_2;
        expansions += 1;
        if expansions > MAX_DOUBLINGS {
            return Err(Error::NonConvergence {
                what: "transport inversion bracket",
                iterations: expansions,
                residual: hi.exp(),
            });
        }
    }
    for _ in 0..MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        let r = residual(mid)?;
        if r == 0.0 || hi - lo < 1e-14 {
            break;
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let parameter = (0.5 * (lo + hi)).exp();
    let miss = (mu_t_of(family, parameter, n0)? - x).abs();
    if miss > 1e-8 * x.max(1e-2) {
        return Err(Error::NonConvergence {
            what: "transport inversion",
            iterations: MAX_BISECTION,
            residual: miss,
        });
    }
    Ok(parameter)
}

/// Images of one `x` under `target ∘ μ_T⁻¹` for the three families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionSample {
    pub x: f64,
    pub n0: f64,
    pub beta: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Chemical potential of the thermal state.
    pub mu: f64,
    /// Normalisation of the deformed sine kernel.
    pub normalization: f64,
    /// Images ordered thermal, Gaussian, deformed sine kernel.
    pub images: [f64; 3],
    pub centroid: f64,
}

impl TransitionSample {
    /// `Σ_i |y_i − ȳ| / (3ȳ)`, the summand of the dispersion.
    pub fn mean_distance(&self) -> f64 {
        mean_distance(&self.images)
    }

    /// `max_i |y_i − ȳ| / ȳ`.
    pub fn spread(&self) -> f64 {
        self.images
            .iter()
            .map(|y| (y - self.centroid).abs())
            .fold(0.0, f64::max)
            / self.centroid
    }
}

fn mean_distance(images: &[f64; 3]) -> f64 {
    let centroid = images.iter().sum::<f64>() / 3.0;
    images.iter().map(|y| (y - centroid).abs()).sum::<f64>() / (3.0 * centroid)
}

pub fn transition_sample(x: f64, n0: f64, target: TargetMeasure) -> Result<TransitionSample> {
    let beta = invert_mu_t(Family::Thermal, x, n0)?;
    let alpha = invert_mu_t(Family::Gaussian, x, n0)?;
    let gamma = invert_mu_t(Family::DeformedSineKernel, x, n0)?;
    let wrap = |e: Error| Error::Inversion {
        x,
        source: Box::new(e),
    };
    let thermal = Family::Thermal.protocol(beta, n0)?.resolve().map_err(wrap)?;
    let gaussian = Family::Gaussian.protocol(alpha, n0)?.resolve().map_err(wrap)?;
    let dsk = Family::DeformedSineKernel.protocol(gamma, n0)?.resolve().map_err(wrap)?;
    let images = [
        target.evaluate(&thermal).map_err(wrap)?,
        target.evaluate(&gaussian).map_err(wrap)?,
        target.evaluate(&dsk).map_err(wrap)?,
    ];
    Ok(TransitionSample {
        x,
        n0,
        beta,
        alpha,
        gamma,
        mu: thermal.chemical_potential().unwrap_or(f64::NAN),
        normalization: dsk.normalization().unwrap_or(f64::NAN),
        images,
        centroid: images.iter().sum::<f64>() / 3.0,
    })
}

/// `δ = |(1/N) Σ_j Σ_i |y_i(x_j) − ȳ(x_j)| / (3ȳ(x_j))|` over image triples.
pub fn dispersion_of(images: &[[f64; 3]]) -> f64 {
    if images.is_empty() {
        return 0.0;
    }
    // sequential sum in grid order so the result does not depend on scheduling
    let total: f64 = images.iter().map(mean_distance).sum();
    (total / images.len() as f64).abs()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dispersion {
    pub target: TargetMeasure,
    pub n0: f64,
    pub delta: f64,
    pub samples: Vec<TransitionSample>,
}

/// Dispersion of `target ∘ μ_T⁻¹` over the grid, grid points evaluated in parallel.
pub fn dispersion(target: TargetMeasure, grid: &[f64], n0: f64) -> Result<Dispersion> {
    if grid.is_empty() {
        return Err(Error::invalid("x grid", "must contain at least one point"));
    }
    let samples = grid
        .par_iter()
        .map(|&x| transition_sample(x, n0, target))
        .collect::<Result<Vec<_>>>()?;
    let images: Vec<[f64; 3]> = samples.iter().map(|s| s.images).collect();
    Ok(Dispersion {
        target,
        n0,
        delta: dispersion_of(&images),
        samples,
    })
}

/// `x_j = 0.01 j` for `j = 1..=40`.
pub fn standard_grid() -> Vec<f64> {
    (1..=40).map(|j| j as f64 / 100.0).collect()
}

/// Density at which the default grid is attainable by every family with
/// `1e-2 ≲ β ≲ 30` on the thermal side.
pub const DEFAULT_TRANSITION_N0: f64 = 0.1;

/// `μ_C(μ_T⁻¹(x)) = n0 (1 − n0²/(√2 x))` from the Gaussian family.
pub fn gaussian_transition_map(x: f64, n0: f64) -> Result<f64> {
    let lower = gaussian_map_zero(n0);
    if !(x >= lower) {
        return Err(Error::Domain {
            what: "transport measure x",
            value: x,
            domain: "[n0²/√2, ∞)",
        });
    }
    Ok(n0 * (1.0 - n0 * n0 / (SQRT_2 * x)))
}

/// Where the Gaussian transition map vanishes.
pub fn gaussian_map_zero(n0: f64) -> f64 {
    n0 * n0 / SQRT_2
}

/// `∫ dk/2π ln(1 − 2a e_k (1 − a e_k))` with `a = n0²/x`, `e_k = exp(−n0²k²/(4πx²))`.
///
/// This is `−μ_P` of the Gaussian state with `μ_T = x`: the integrand is the
/// logarithm of `n² + (1−n)² ≤ 1`, so the value is never positive. Its
/// magnitude grows to `2 n0` as `x → ∞`.
pub fn purity_transition_map(x: f64, n0: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) || !(n0 > 0.0) {
        return Err(Error::Domain {
            what: "transport measure x",
            value: x,
            domain: "(0, ∞)",
        });
    }
    let a = n0 * n0 / x;
    let scale = n0 * n0 / (4.0 * PI * x * x);
    // e_k < 1e-17 beyond this momentum
    let k_cut = (40.0 / scale).sqrt();
    let mut violation = None;
    let value = integrate_adaptive(
        |k| {
            let e = a * (-scale * k * k).exp();
            let arg = 1.0 - 2.0 * e * (1.0 - e);
            if arg <= 0.0 {
                violation.get_or_insert(k);
                return 0.0;
            }
            (-2.0 * e * (1.0 - e)).ln_1p()
        },
        0.0,
        k_cut,
        &[],
        AdaptiveOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_depth: 40,
        },
    )?;
    if let Some(k) = violation {
        return Err(Error::Domain {
            what: "purity integrand logarithm argument at momentum k",
            value: k,
            domain: "positive argument",
        });
    }
    Ok(value / PI)
}

/// Parameter of a protocol kind in the family parametrisation, if it belongs to one.
pub fn family_parameter(kind: ProtocolKind) -> Option<(Family, f64)> {
    match kind {
        ProtocolKind::Thermal { beta } => Some((Family::Thermal, beta)),
        ProtocolKind::Gaussian { alpha } => Some((Family::Gaussian, alpha)),
        ProtocolKind::DeformedSineKernel { gamma, sigma } if sigma == DSK_SIGMA => {
            Some((Family::DeformedSineKernel, gamma))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gaussian_inversion_matches_closed_form() {
        for &(x, n0) in &[(0.01, 0.1), (0.2, 0.1), (0.8, 1.0), (2.0, 1.0)] {
            let alpha = invert_mu_t(Family::Gaussian, x, n0).unwrap();
            let exact = PI * x * x / (n0 * n0);
            assert_abs_diff_eq!(alpha, exact, epsilon = 1e-8 * exact);
        }
    }

    #[test]
    fn dsk_round_trip() {
        let n0 = 0.1;
        for x in [0.05, 0.2, 0.4] {
            let gamma = invert_mu_t(Family::DeformedSineKernel, x, n0).unwrap();
            assert_abs_diff_eq!(mu_t_of(Family::DeformedSineKernel, gamma, n0).unwrap(), x, epsilon = 1e-8);
        }
    }

    #[test]
    fn thermal_inversion_near_the_fermi_sea() {
        let n0 = 0.1;
        let floor = fermi_sea_transport(n0);
        let cold = invert_mu_t(Family::Thermal, floor * 1.001, n0).unwrap();
        let warm = invert_mu_t(Family::Thermal, floor * 1.1, n0).unwrap();
        assert!(cold > warm && cold > 100.0, "{cold} {warm}");
        assert!(matches!(
            invert_mu_t(Family::Thermal, floor, n0),
            Err(Error::Inversion { .. })
        ));
    }

    #[test]
    fn degenerate_images_have_no_dispersion() {
        assert_eq!(dispersion_of(&[[0.3, 0.3, 0.3], [1.0, 1.0, 1.0]]), 0.0);
        assert_abs_diff_eq!(dispersion_of(&[[1.0, 2.0, 3.0]]), (1.0 + 0.0 + 1.0) / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn gaussian_map_shape() {
        let n0 = 0.7;
        assert_eq!(gaussian_transition_map(gaussian_map_zero(n0), n0).unwrap(), 0.0);
        assert!(gaussian_transition_map(0.9 * gaussian_map_zero(n0), n0).is_err());
        assert_abs_diff_eq!(gaussian_transition_map(1e12, n0).unwrap(), n0, epsilon = 1e-9);
        let xs: Vec<f64> = (0..50).map(|i| gaussian_map_zero(n0) * (1.0 + 0.1 * i as f64)).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| gaussian_transition_map(x, n0).unwrap()).collect();
        assert!(ys.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn gaussian_chain_matches_map() {
        for x in [0.8, 1.0, 2.0] {
            let alpha = invert_mu_t(Family::Gaussian, x, 1.0).unwrap();
            let p = WignerProtocol::gaussian(alpha, 1.0).unwrap().resolve().unwrap();
            assert_abs_diff_eq!(p.mu_c().unwrap(), gaussian_transition_map(x, 1.0).unwrap(), epsilon = 1e-10);
        }
    }

    #[test]
    fn purity_map_is_minus_gaussian_purity() {
        for x in [1.0, 2.0] {
            let value = purity_transition_map(x, 1.0).unwrap();
            let p = WignerProtocol::gaussian(PI * x * x, 1.0).unwrap().resolve().unwrap();
            assert!(value < 0.0);
            assert_abs_diff_eq!(value.abs(), p.mu_p().unwrap(), epsilon = 1e-8);
        }
    }

    #[test]
    fn purity_map_limit_and_monotonicity() {
        let n0 = 1.0;
        // below x ≈ 0.62 the Gaussian occupation exceeds one and the integral turns
        // positive, so monotonicity is a statement about μ_P = −value, not |value|
        let xs: Vec<f64> = (0..=45).map(|i| 0.5 + 0.1 * i as f64).collect();
        let mu_p: Vec<f64> = xs.iter().map(|&x| -purity_transition_map(x, n0).unwrap()).collect();
        assert!(mu_p.windows(2).all(|w| w[1] > w[0]));
        assert!(mu_p[0] < 0.0);
        let far = purity_transition_map(1e6, n0).unwrap();
        assert_abs_diff_eq!(far, -2.0 * n0, epsilon = 1e-5);
    }

    #[test]
    fn endpoint_constants() {
        let n0: f64 = 0.4;
        let gap = fermi_sea_transport(n0) - gaussian_map_zero(n0);
        assert_abs_diff_eq!(gap / (n0 * n0), PI / 4.0 - 1.0 / SQRT_2, epsilon = 1e-15);
    }
}
