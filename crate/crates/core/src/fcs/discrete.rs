//! The lattice determinant `det(I + (e^{iλ} − 1) C₀ Ĵ P_S Ĵ†)`.
//!
//! `C₀` lives on sites `≤ 0`, so only that block of the product matters. It
//! is truncated to `[lo, 0]` and `lo` is pushed left until `ln F` settles.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_lambda, check_setup, CountingDeterminant, FcsCurve, FcsPoint, LeftCorrelations, ProjectedKernel};
use crate::error::{Error, Result};

/// Change of `ln F` under window growth below which the window is accepted.
pub const DISCRETE_TOLERANCE: f64 = 1e-9;
const INITIAL_MARGIN: i64 = 40;
const GROWTH: i64 = 20;
const MAX_GROWTHS: usize = 5;

/// A converged truncation of the lattice determinant.
#[derive(Debug, Clone)]
pub struct DiscreteFcs {
    t: f64,
    a: i64,
    b: Option<i64>,
    lo: i64,
    det: CountingDeterminant,
}

fn block<C: LeftCorrelations + ?Sized>(c0: &C, kernel: &ProjectedKernel, lo: i64) -> Result<CountingDeterminant> {
    let n = (1 - lo) as usize;
    let c = DMatrix::from_fn(n, n, |i, j| c0.entry(lo + i as i64, lo + j as i64));
    let q = kernel.matrix(lo, 0)?;
    Ok(CountingDeterminant::new(c * q, 1.0))
}

impl DiscreteFcs {
    pub fn new<C: LeftCorrelations + ?Sized>(c0: &C, t: f64, a: i64, b: Option<i64>) -> Result<Self> {
        check_setup(t, a)?;
        c0.validate()?;
        let kernel = ProjectedKernel::new(t, a, b)?;
        let floor = c0.lowest_site();
        let clamp = |lo: i64| floor.map_or(lo, |f| lo.max(f)).min(0);
        let mut lo = clamp((a - t.ceil() as i64 - INITIAL_MARGIN).min(-INITIAL_MARGIN / 2 - c0.bandwidth() as i64));
        let mut current = block(c0, &kernel, lo)?;
        let mut change = f64::INFINITY;
        for _ in 0..MAX_GROWTHS {
            let next_lo = clamp(lo - GROWTH);
            if next_lo == lo {
                change = 0.0;
                break;
            }
            let next = block(c0, &kernel, next_lo)?;
            change = next.distance(&current);
            lo = next_lo;
            current = next;
            if change < DISCRETE_TOLERANCE {
                break;
            }
        }
        if !(change < DISCRETE_TOLERANCE) {
            return Err(Error::NonConvergence {
                what: "discrete counting determinant (window growth)",
                iterations: MAX_GROWTHS,
                residual: change,
            });
        }
        Ok(Self { t, a, b, lo, det: current })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Sites `[lo, 0]` kept in the determinant.
    pub fn window(&self) -> (i64, i64) {
        (self.lo, 0)
    }

    pub fn determinant(&self) -> &CountingDeterminant {
        &self.det
    }

    pub fn point(&self, lambda: f64) -> Result<FcsPoint> {
        check_lambda(lambda)?;
        Ok(self.det.point(lambda))
    }

    pub fn curve(&self, lambdas: &[f64]) -> Result<FcsCurve> {
        for &l in lambdas {
            check_lambda(l)?;
        }
        Ok(FcsCurve {
            t: self.t,
            a: self.a,
            b: self.b,
            points: self.det.points(lambdas),
        })
    }

    pub fn mean(&self) -> f64 {
        self.det.mean()
    }

    pub fn variance(&self) -> f64 {
        self.det.variance()
    }
}

/// `F(λ)` for particles in `[a, b]` (`b = None` for `[a, ∞)`) at time `t`.
pub fn fcs_discrete<C: LeftCorrelations + ?Sized>(
    c0: &C,
    t: f64,
    a: i64,
    b: Option<i64>,
    lambda: f64,
) -> Result<Complex64> {
    check_lambda(lambda)?;
    Ok(DiscreteFcs::new(c0, t, a, b)?.point(lambda)?.value)
}
