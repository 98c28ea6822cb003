use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::dicke::DickeCell;

/// Sites kept beyond the light cone when a window is sized from a time horizon.
pub const WINDOW_MARGIN: i64 = 40;

/// Correlated domain wall on the window `[-l_left, l_right]`: sites `≤ 0`
/// filled at density `n0` in cells of `ell_c` sites, sites `≥ 1` empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeQuench {
    n0: f64,
    ell_c: usize,
    l_left: i64,
    l_right: i64,
}

impl LatticeQuench {
    pub fn new(n0: f64, ell_c: usize, l_left: i64, l_right: i64) -> Result<Self> {
        if !(n0 > 0.0 && n0 <= 1.0) {
            return Err(Error::Domain {
                what: "density n0",
                value: n0,
                domain: "(0, 1]",
            });
        }
        if ell_c == 0 {
            return Err(Error::invalid("ell_c", "coherence length must be at least 1"));
        }
        let per_cell = n0 * ell_c as f64;
        // a one-site cell is the uncorrelated wall n0·δ_{mn}, valid at any density
        if ell_c > 1 && (per_cell - per_cell.round()).abs() > 1e-9 {
            return Err(Error::invalid(
                "n0",
                format!("n0·ell_c = {per_cell} is not an integer number of particles per cell"),
            ));
        }
        if l_left <= 0 || l_right <= 0 {
            return Err(Error::invalid(
                "window",
                format!("both sides must be positive, got [-{l_left}, {l_right}]"),
            ));
        }
        if ell_c > 1 {
            DickeCell::new(ell_c, per_cell.round() as usize)?;
        }
        Ok(Self {
            n0,
            ell_c,
            l_left,
            l_right,
        })
    }

    /// A symmetric window wide enough for every time up to `t_max`.
    pub fn for_time(n0: f64, ell_c: usize, t_max: f64) -> Result<Self> {
        if !(t_max >= 0.0) || !t_max.is_finite() {
            return Err(Error::Domain {
                what: "time horizon",
                value: t_max,
                domain: "[0, ∞)",
            });
        }
        let half = t_max.ceil() as i64 + ell_c as i64 + WINDOW_MARGIN;
        Self::new(n0, ell_c, half, half)
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn ell_c(&self) -> usize {
        self.ell_c
    }

    /// `n0·ℓ_c`; fractional only for one-site cells.
    pub fn particles_per_cell(&self) -> f64 {
        self.n0 * self.ell_c as f64
    }

    /// `(lo, hi)`, inclusive.
    pub fn window(&self) -> (i64, i64) {
        (-self.l_left, self.l_right)
    }

    pub fn width(&self) -> usize {
        (self.l_left + self.l_right + 1) as usize
    }

    /// Fails when the light cone of `t`, widened by the band and `margin`, reaches an edge.
    pub(crate) fn check_light_cone(&self, t: f64, margin: i64) -> Result<()> {
        let required = t.ceil() as i64 + self.ell_c as i64 + margin;
        let available = self.l_left.min(self.l_right);
        if required > available {
            return Err(Error::WindowTooSmall {
                required,
                available,
            });
        }
        Ok(())
    }
}

/// Toeplitz band `C_k = ⟨c†_m c_{m+k}⟩` of the filled half, `k = 0..=ell_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandCoefficients {
    coefficients: Vec<f64>,
}

impl BandCoefficients {
    /// Band of the correlated domain wall built from Dicke cells.
    pub fn correlated(n0: f64, ell_c: usize) -> Result<Self> {
        let q = LatticeQuench::new(n0, ell_c, 1, 1)?;
        if ell_c == 1 {
            return Ok(Self {
                coefficients: vec![n0, 0.0],
            });
        }
        let cell = DickeCell::new(ell_c, q.particles_per_cell().round() as usize)?;
        let l = ell_c as f64;
        let mut coefficients = vec![n0; ell_c + 1];
        for (k, c) in coefficients.iter_mut().enumerate().skip(1) {
            *c = if k < ell_c {
                (l - k as f64) / l * cell.correlation_at(k)
            } else {
                0.0
            };
        }
        Ok(Self { coefficients })
    }

    /// The uncorrelated wall: only `C_0 = n0`.
    pub fn diagonal(n0: f64) -> Self {
        Self {
            coefficients: vec![n0],
        }
    }

    pub fn from_coefficients(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid("band", "needs at least C_0"));
        }
        Ok(Self { coefficients })
    }

    pub fn n0(&self) -> f64 {
        self.coefficients[0]
    }

    /// Largest `k` carried (including trailing zeros).
    pub fn bandwidth(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `C_{|k|}`, zero beyond the band.
    #[inline]
    pub fn get(&self, k: i64) -> f64 {
        self.coefficients
            .get(k.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coefficients
    }
}

/// Hermitian matrix `C_{mn} = ⟨c†_m c_n⟩` on the sites `lo..=hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    lo: i64,
    entries: DMatrix<Complex64>,
}

impl CorrelationMatrix {
    pub fn new(lo: i64, entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::invalid(
                "correlation matrix",
                format!("must be square and non-empty, got {}×{}", entries.nrows(), entries.ncols()),
            ));
        }
        Ok(Self { lo, entries })
    }

    pub fn zeros(lo: i64, hi: i64) -> Self {
        let n = (hi - lo + 1) as usize;
        Self {
            lo,
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.entries.nrows() as i64 - 1)
    }

    pub fn sites(&self) -> std::ops::RangeInclusive<i64> {
        let (lo, hi) = self.window();
        lo..=hi
    }

    pub fn contains(&self, m: i64) -> bool {
        let (lo, hi) = self.window();
        m >= lo && m <= hi
    }

    pub fn get(&self, m: i64, n: i64) -> Complex64 {
        self.entries[((m - self.lo) as usize, (n - self.lo) as usize)]
    }

    pub fn set(&mut self, m: i64, n: i64, value: Complex64) {
        self.entries[((m - self.lo) as usize, (n - self.lo) as usize)] = value;
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.entries.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// `max |C_{mn} − conj(C_{nm})|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.entries.nrows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        // nalgebra's symmetric QR iteration returns NaN on some near-projector
        // spectra. Shifting by s ≥ ‖H‖ makes H + s positive semidefinite, so its
        // singular values are exactly the shifted eigenvalues.
        let n = self.entries.nrows();
        let h = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        let shift = h.norm() + 1.0;
        let mut shifted = h;
        for i in 0..n {
            shifted[(i, i)] += shift;
        }
        let mut values: Vec<f64> = shifted
            .singular_values()
            .iter()
            .map(|s| s - shift)
            .collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// Largest `|m − n|` with a non-zero entry.
    pub fn bandwidth(&self) -> usize {
        let n = self.entries.nrows();
        let mut width = 0;
        for i in 0..n {
            for j in 0..n {
                if self.entries[(i, j)] != Complex64::new(0.0, 0.0) {
                    width = width.max(i.abs_diff(j));
                }
            }
        }
        width
    }
}

/// Initial correlations of the correlated domain wall on the window of `q`.
pub fn correlated_domain_wall(q: &LatticeQuench) -> Result<(BandCoefficients, CorrelationMatrix)> {
    let band = BandCoefficients::correlated(q.n0(), q.ell_c())?;
    let matrix = domain_wall_matrix(q, &band);
    Ok((band, matrix))
}

/// Places a Toeplitz band on the filled half of the window of `q`.
pub fn domain_wall_matrix(q: &LatticeQuench, band: &BandCoefficients) -> CorrelationMatrix {
    let (lo, hi) = q.window();
    let mut matrix = CorrelationMatrix::zeros(lo, hi);
    let w = band.bandwidth() as i64;
    for m in lo..=0 {
        for n in (m - w).max(lo)..=(m + w).min(0) {
            matrix.set(m, n, Complex64::new(band.get(m - n), 0.0));
        }
    }
    matrix
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uncorrelated_wall_is_diagonal() {
        let q = LatticeQuench::new(0.5, 1, 6, 6).unwrap();
        let (band, c) = correlated_domain_wall(&q).unwrap();
        assert_eq!(band.as_slice(), &[0.5, 0.0]);
        for m in c.sites() {
            for n in c.sites() {
                let expected = if m == n && m <= 0 { 0.5 } else { 0.0 };
                assert_eq!(c.get(m, n).re, expected);
            }
        }
    }

    #[test]
    fn band_for_two_site_cells() {
        let band = BandCoefficients::correlated(0.5, 2).unwrap();
        assert_abs_diff_eq!(band.get(0), 0.5);
        assert_abs_diff_eq!(band.get(1), 0.25);
        assert_abs_diff_eq!(band.get(-1), 0.25);
        assert_eq!(band.get(2), 0.0);
        assert_eq!(band.get(7), 0.0);
    }

    #[test]
    fn trace_counts_left_particles() {
        let q = LatticeQuench::new(0.25, 4, 30, 10).unwrap();
        let (_, c) = correlated_domain_wall(&q).unwrap();
        assert_abs_diff_eq!(c.trace(), 0.25 * 31.0, epsilon = 1e-12);
        assert_eq!(c.hermiticity_error(), 0.0);
        assert_eq!(c.bandwidth(), 3);
    }

    #[test]
    fn initial_spectrum_is_physical() {
        for &(n0, ell_c) in &[(1.0, 1), (0.5, 2), (0.25, 4), (0.5, 4), (0.125, 8), (0.375, 8)] {
            let q = LatticeQuench::new(n0, ell_c, 60, 5).unwrap();
            let (_, c) = correlated_domain_wall(&q).unwrap();
            let ev = c.eigenvalues();
            assert!(ev[0] >= -1e-9, "n0 = {n0}, ell_c = {ell_c}: {}", ev[0]);
            assert!(*ev.last().unwrap() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn rejects_fractional_cells() {
        assert!(LatticeQuench::new(0.3, 2, 5, 5).is_err());
        assert!(LatticeQuench::new(0.3, 1, 5, 5).is_ok());
        assert!(LatticeQuench::new(0.5, 0, 5, 5).is_err());
        assert!(LatticeQuench::new(1.5, 1, 5, 5).is_err());
        assert!(LatticeQuench::new(0.5, 2, 0, 5).is_err());
        let q = LatticeQuench::for_time(0.5, 2, 10.0).unwrap();
        assert_eq!(q.window(), (-52, 52));
        assert!(q.check_light_cone(10.0, 40).is_ok());
        assert!(q.check_light_cone(11.0, 40).is_err());
    }
}
