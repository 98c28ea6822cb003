//! Exact free evolution `Ĉ(t) = Ĵ(t)† Ĉ₀ Ĵ(t)` with `Ĵ_{mn}(t) = i^{m−n} J_{m−n}(t)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::quench::{domain_wall_matrix, BandCoefficients, CorrelationMatrix, LatticeQuench};
use crate::specfun::{bessel_row, DiscreteBesselKernel};

/// Sites the light cone must stay away from the window edges.
pub const LIGHT_CONE_MARGIN: i64 = 20;

/// `i^k` for integer `k`.
#[inline]
pub(crate) fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            what: "time t",
            value: t,
            domain: "[0, ∞)",
        });
    }
    Ok(())
}

/// On-site densities `C_{mm}(t)` on a window of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub t: f64,
    lo: i64,
    values: Vec<f64>,
}

impl DensityProfile {
    pub fn new(t: f64, lo: i64, values: Vec<f64>) -> Self {
        Self { t, lo, values }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.values.len() as i64 - 1)
    }

    pub fn sites(&self) -> std::ops::RangeInclusive<i64> {
        let (lo, hi) = self.window();
        lo..=hi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Density at site `m`; panics outside the window.
    pub fn get(&self, m: i64) -> f64 {
        self.values[(m - self.lo) as usize]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// `C_{mm}(t) = n0 B_t(m,m) + 2 Σ_{k=1}^{ℓ_c} cos(kπ/2) C_k B_t(m+k, m)` on every
/// site of the window of `q`.
pub fn evolve_density(q: &LatticeQuench, band: &BandCoefficients, t: f64) -> Result<DensityProfile> {
    check_time(t)?;
    q.check_light_cone(t, LIGHT_CONE_MARGIN)?;
    let (lo, hi) = q.window();
    let w = band.bandwidth() as i64;
    let kernel = DiscreteBesselKernel::new(t, lo, hi + w)?;
    // cos(kπ/2) kills odd k and alternates the sign of even k
    let weights: Vec<(i64, f64)> = (1..=w)
        .filter(|k| k % 2 == 0)
        .map(|k| (k, if k % 4 == 0 { 2.0 } else { -2.0 } * band.get(k)))
        .filter(|(_, c)| *c != 0.0)
        .collect();
    let values = (lo..=hi)
        .into_par_iter()
        .map(|m| {
            let mut rho = band.n0() * kernel.eval(m, m);
            for &(k, c) in &weights {
                rho += c * kernel.eval(m + k, m);
            }
            rho
        })
        .collect();
    Ok(DensityProfile::new(t, lo, values))
}

/// Full `Ĉ(t)` for a Toeplitz-band domain wall through the kernel expansion
/// `C_{mn}(t) = i^{n−m} Σ_d i^d C_{|d|} B_t(m − min(0,d), n + max(0,d))`.
pub fn evolve_domain_wall(q: &LatticeQuench, band: &BandCoefficients, t: f64) -> Result<CorrelationMatrix> {
    check_time(t)?;
    q.check_light_cone(t, LIGHT_CONE_MARGIN)?;
    let (lo, hi) = q.window();
    let w = band.bandwidth() as i64;
    let kernel = DiscreteBesselKernel::new(t, lo, hi + w)?;
    let terms: Vec<(i64, Complex64)> = (-w..=w)
        .filter(|d| band.get(*d) != 0.0)
        .map(|d| (d, i_pow(d) * band.get(d)))
        .collect();
    let n = q.width();
    let columns: Vec<Vec<Complex64>> = (lo..=hi)
        .into_par_iter()
        .map(|col| {
            (lo..=hi)
                .map(|row| {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for &(d, c) in &terms {
                        sum += c * kernel.eval(row - d.min(0), col + d.max(0));
                    }
                    i_pow(col - row) * sum
                })
                .collect()
        })
        .collect();
    let entries = DMatrix::from_fn(n, n, |i, j| columns[j][i]);
    CorrelationMatrix::new(lo, entries)
}

/// The propagator `Ĵ(t)` truncated to `lo..=hi`.
pub fn propagator(t: f64, lo: i64, hi: i64) -> Result<DMatrix<Complex64>> {
    check_time(t)?;
    let span = hi - lo;
    let row = bessel_row(t, -span, span)?;
    let n = (span + 1) as usize;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        let d = i as i64 - j as i64;
        i_pow(d) * row.get(d)
    }))
}

/// Dense `Ĵ† Ĉ₀ Ĵ` on the window of `c0`; the reference route for arbitrary initial matrices.
pub fn evolve_full_dense(c0: &CorrelationMatrix, t: f64) -> Result<CorrelationMatrix> {
    let (lo, hi) = c0.window();
    let j = propagator(t, lo, hi)?;
    let evolved = j.adjoint() * c0.matrix() * &j;
    CorrelationMatrix::new(lo, evolved)
}

/// `Ĉ(t)` for the quench `q` started from `c0`.
///
/// When `c0` is the domain-wall matrix of some band, the kernel expansion is
/// used (cost `W²·ℓ_c`); otherwise the dense product.
pub fn evolve_full(q: &LatticeQuench, c0: &CorrelationMatrix, t: f64) -> Result<CorrelationMatrix> {
    check_time(t)?;
    if c0.window() != q.window() {
        return Err(Error::invalid(
            "initial correlations",
            format!("window {:?} differs from the quench window {:?}", c0.window(), q.window()),
        ));
    }
    q.check_light_cone(t, LIGHT_CONE_MARGIN)?;
    match extract_band(q, c0) {
        Some(band) => evolve_domain_wall(q, &band, t),
        None => evolve_full_dense(c0, t),
    }
}

/// The Toeplitz band of `c0` if it is exactly a domain wall on `q`'s window.
fn extract_band(q: &LatticeQuench, c0: &CorrelationMatrix) -> Option<BandCoefficients> {
    let w = c0.bandwidth();
    let coefficients: Vec<f64> = (0..=w as i64).map(|k| c0.get(0, -k).re).collect();
    let band = BandCoefficients::from_coefficients(coefficients).ok()?;
    if domain_wall_matrix(q, &band) == *c0 {
        Some(band)
    } else {
        None
    }
}

/// `N_R = Σ_{m ≥ 1} C_{mm}(t)`.
pub fn particle_number_right(profile: &DensityProfile) -> f64 {
    profile
        .sites()
        .zip(profile.values())
        .filter(|(m, _)| *m >= 1)
        .map(|(_, v)| v)
        .sum()
}

/// Number of particles on sites `≥ 1` at each of `times`.
pub fn transferred_particles(
    q: &LatticeQuench,
    band: &BandCoefficients,
    times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    times
        .iter()
        .map(|&t| Ok((t, particle_number_right(&evolve_density(q, band, t)?))))
        .collect()
}

/// Least-squares slope of `y` against `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::invalid("fit", "needs at least two points"));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("fit", "abscissae are all equal"));
    }
    Ok(sxy / sxx)
}

/// Times `200, 210, …, 300` used for the transport slope.
pub fn slope_fit_times() -> Vec<f64> {
    (0..=10).map(|i| 200.0 + 10.0 * i as f64).collect()
}

/// Transport slope `α_T` of the correlated wall with one particle per cell,
/// fitted over [`slope_fit_times`].
pub fn fitted_slope(ell_c: usize) -> Result<f64> {
    let times = slope_fit_times();
    let n0 = 1.0 / ell_c as f64;
    let q = LatticeQuench::for_time(n0, ell_c, *times.last().unwrap())?;
    let band = BandCoefficients::correlated(n0, ell_c)?;
    least_squares_slope(&transferred_particles(&q, &band, &times)?)
}
