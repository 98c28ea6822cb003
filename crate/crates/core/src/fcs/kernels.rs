//! Kernels entering the counting statistics of particles on `S = [a, b]`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::evolve::i_pow;
use crate::specfun::{bessel_row, integrate_adaptive, AdaptiveOptions, DiscreteBesselKernel};

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

/// `Ĵ P_S Ĵ†` for `S = [a, b]` (`b = None` for `[a, ∞)`).
///
/// Entries are `i^{n−m} Σ_{j∈S} J_{n−j}(t) J_{m−j}(t)`, which the
/// Christoffel–Darboux identity turns into
/// `i^{n−m} (B_t(m−b, n−b) − B_t(m−a+1, n−a+1))`. For `b = ∞` the first
/// kernel tends to `δ_{mn}` (the full sum over `j` is unitarity of `Ĵ`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedKernel {
    t: f64,
    a: i64,
    b: Option<i64>,
}

impl ProjectedKernel {
    pub fn new(t: f64, a: i64, b: Option<i64>) -> Result<Self> {
        check_time(t)?;
        if a < 1 {
            return Err(Error::invalid("a", format!("interval must start at a ≥ 1, got {a}")));
        }
        if let Some(b) = b {
            if b < a {
                return Err(Error::invalid("b", format!("b = {b} is below a = {a}")));
            }
        }
        Ok(Self { t, a, b })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> Option<i64> {
        self.b
    }

    /// The kernel restricted to rows and columns `lo..=hi`.
    pub fn matrix(&self, lo: i64, hi: i64) -> Result<DMatrix<Complex64>> {
        if lo > hi {
            return Err(Error::invalid("window", format!("lo = {lo} exceeds hi = {hi}")));
        }
        let a = self.a;
        let upper = DiscreteBesselKernel::new(self.t, lo - a + 1, hi - a + 1)?;
        let lower = match self.b {
            Some(b) => Some(DiscreteBesselKernel::new(self.t, lo - b, hi - b)?),
            None => None,
        };
        let n = (hi - lo + 1) as usize;
        Ok(DMatrix::from_fn(n, n, |i, j| {
            let (row, col) = (lo + i as i64, lo + j as i64);
            let first = match (&lower, self.b) {
                (Some(k), Some(b)) => k.eval(col - b, row - b),
                _ => {
                    if row == col {
                        1.0
                    } else {
                        0.0
                    }
                }
            };
            i_pow(row - col) * (first - upper.eval(col - a + 1, row - a + 1))
        }))
    }

    /// A single entry `(n, m)`.
    pub fn entry(&self, n: i64, m: i64) -> Result<Complex64> {
        let lo = n.min(m);
        let hi = n.max(m);
        let mat = self.matrix(lo, hi)?;
        Ok(mat[((n - lo) as usize, (m - lo) as usize)])
    }
}

/// Shorthand for [`ProjectedKernel::new`].
pub fn projected_kernel(t: f64, a: i64, b: Option<i64>) -> Result<ProjectedKernel> {
    ProjectedKernel::new(t, a, b)
}

/// Initial correlations supported on sites `≤ 0`.
pub trait LeftCorrelations: Sync {
    /// `⟨c†_j c_k⟩` for `j, k ≤ 0`.
    fn entry(&self, j: i64, k: i64) -> Complex64;
    /// Lowest occupied site, `None` for a half-infinite state.
    fn lowest_site(&self) -> Option<i64>;
    /// Largest `|j − k|` with a non-zero entry.
    fn bandwidth(&self) -> usize;
    /// Checks that nothing lives on sites `≥ 1`.
    fn validate(&self) -> Result<()> {
        Ok(())
    }
}

impl LeftCorrelations for crate::lattice::BandCoefficients {
    fn entry(&self, j: i64, k: i64) -> Complex64 {
        Complex64::new(self.get(j - k), 0.0)
    }

    fn lowest_site(&self) -> Option<i64> {
        None
    }

    fn bandwidth(&self) -> usize {
        crate::lattice::BandCoefficients::bandwidth(self)
    }
}

impl LeftCorrelations for crate::lattice::CorrelationMatrix {
    fn entry(&self, j: i64, k: i64) -> Complex64 {
        if self.contains(j) && self.contains(k) {
            self.get(j, k)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    fn lowest_site(&self) -> Option<i64> {
        Some(self.window().0)
    }

    fn bandwidth(&self) -> usize {
        crate::lattice::CorrelationMatrix::bandwidth(self)
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.window();
        if lo > 0 {
            return Err(Error::invalid("initial correlations", "no site ≤ 0 in the window"));
        }
        for m in 1..=hi {
            for n in lo..=hi {
                if self.get(m, n).norm() != 0.0 || self.get(n, m).norm() != 0.0 {
                    return Err(Error::invalid(
                        "initial correlations",
                        format!("entry ({m}, {n}) touches the right half; the state must live on sites ≤ 0"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The continuous Bessel kernel on `(0, t²]²`,
///
/// `𝒦(t1, t2) = (t2/t1)^{a/2} √t1 (√t2 J_{a−1}(√t1) J′_{a−1}(√t2) − √t1 J′_{a−1}(√t1) J_{a−1}(√t2)) / (t1 − t2)`,
///
/// normalised so that `𝒦 = −J̃₂ P_{≤0} J̃₁`: it agrees with the series
/// `−Σ_{k≤0} (t2/t1)^{(a−k)/2} J_{k−a}(√t1) J_{k−a+1}(√t2)`. On the diagonal
/// the limit is `(x/2)(J′_ν(x)² + (1 − ν²/x²) J_ν(x)²)` with `x = √t1`, `ν = a − 1`.
pub fn continuous_bessel_kernel(t1: f64, t2: f64, a: i64) -> Result<f64> {
    if !(t1 > 0.0 && t2 > 0.0 && t1.is_finite() && t2.is_finite()) {
        return Err(Error::Domain {
            what: "continuous kernel argument",
            value: if t1 > 0.0 { t2 } else { t1 },
            domain: "(0, ∞)",
        });
    }
    if a < 1 {
        return Err(Error::invalid("a", format!("must be at least 1, got {a}")));
    }
    let nu = a - 1;
    let (x, y) = (t1.sqrt(), t2.sqrt());
    let rx = bessel_row(x, nu - 1, nu + 1)?;
    let jx = rx.get(nu);
    let dx = rx.derivative(nu);
    if x == y {
        let nuf = nu as f64;
        return Ok(0.5 * x * (dx * dx + (1.0 - nuf * nuf / (x * x)) * jx * jx));
    }
    // the closed form cancels badly for nearby arguments
    if (x - y).abs() <= 1e-6 * x.max(y) {
        return series_kernel(t1, t2, a);
    }
    let ry = bessel_row(y, nu - 1, nu + 1)?;
    let jy = ry.get(nu);
    let dy = ry.derivative(nu);
    let scale = (t2 / t1).powf(0.5 * a as f64) * x;
    Ok(scale * (y * jx * dy - x * dx * jy) / (t1 - t2))
}

/// `−Σ_{k≤0} (t2/t1)^{(a−k)/2} J_{k−a}(√t1) J_{k−a+1}(√t2)`, summed in log space.
pub fn series_kernel(t1: f64, t2: f64, a: i64) -> Result<f64> {
    let (x, y) = (t1.sqrt(), t2.sqrt());
    let depth = (1.5 * x.max(y)).ceil() as i64 + 60;
    let rx = bessel_row(x, -depth - a, -a)?;
    let ry = bessel_row(y, -depth - a + 1, 1 - a)?;
    let ln_ratio = (y / x).ln();
    let mut sum = 0.0;
    for k in -depth..=0 {
        let (lx, sx) = rx.log_abs_sign(k - a);
        let (ly, sy) = ry.log_abs_sign(k - a + 1);
        if sx == 0.0 || sy == 0.0 {
            continue;
        }
        sum += sx * sy * ((a - k) as f64 * ln_ratio + lx + ly).exp();
    }
    Ok(-sum)
}

/// Both sides of `(Ĵ P_{[a,∞)} Ĵ†)_{nm} = −∫_0^t ds J̃₁(n, s) J̃₂(s, m)` for `n, m < a`,
/// with `J̃₁(n, s) = (it/s)^{n−a} J_{n−a+1}(s)`, `J̃₂(s, m) = (it/s)^{a−m} J_{m−a}(s)`.
///
/// The substitution `τ = s²` turns `(1/2) ∫_0^{t²} dτ/√τ` into `∫_0^t ds`.
/// Returns `(direct sum, quadrature)`.
pub fn semi_discrete_factorization_check(t: f64, a: i64, n: i64, m: i64) -> Result<(Complex64, Complex64)> {
    check_time(t)?;
    if a < 1 {
        return Err(Error::invalid("a", format!("must be at least 1, got {a}")));
    }
    if n >= a || m >= a {
        return Err(Error::invalid(
            "indices",
            format!("the factorisation holds for n, m < a; got n = {n}, m = {m}, a = {a}"),
        ));
    }
    let phase = i_pow(n - m);
    let reach = n.max(m) + t.ceil() as i64 + 60;
    let row = bessel_row(t, n.min(m) - reach, n.max(m) - a)?;
    let mut direct = 0.0;
    for j in a..=reach {
        direct += row.get(n - j) * row.get(m - j);
    }
    if t == 0.0 {
        return Ok((phase * direct, Complex64::new(0.0, 0.0)));
    }
    let p = n - m;
    let mut failure = None;
    let integral = integrate_adaptive(
        |s| {
            if s == 0.0 {
                return 0.0;
            }
            let r = match bessel_row(s, (n - a + 1).min(m - a), (n - a + 1).max(m - a)) {
                Ok(r) => r,
                Err(e) => {
                    failure.get_or_insert(e);
                    return 0.0;
                }
            };
            let (l1, s1) = r.log_abs_sign(n - a + 1);
            let (l2, s2) = r.log_abs_sign(m - a);
            if s1 == 0.0 || s2 == 0.0 {
                return 0.0;
            }
            s1 * s2 * (p as f64 * (t / s).ln() + l1 + l2).exp()
        },
        0.0,
        t,
        &[],
        AdaptiveOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_depth: 40,
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((phase * direct, -phase * integral))
}
