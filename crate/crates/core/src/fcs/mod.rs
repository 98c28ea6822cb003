//! Full counting statistics of the particles found in `[a, b]` after the quench.

pub mod det;
pub mod discrete;
pub mod kernels;
pub mod nystrom;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub use det::{align_branch, continue_log, counting_factor, log_det, CONTINUATION_STEP};
pub use discrete::{fcs_discrete, DiscreteFcs, DISCRETE_TOLERANCE};
pub use kernels::{
    continuous_bessel_kernel, projected_kernel, semi_discrete_factorization_check, series_kernel, LeftCorrelations,
    ProjectedKernel,
};
pub use nystrom::{fcs_continuous, ContinuousFcs, NystromKernel, NYSTROM_TOLERANCE};

/// Counting fields at which window and node convergence is judged.
pub(crate) const PROBE_FIELDS: [f64; 2] = [std::f64::consts::FRAC_PI_2, 3.0];

/// Step for the first cumulant (central difference of `ln F`).
const MEAN_STEP: f64 = 1e-5;
/// Step for the second cumulant.
const VARIANCE_STEP: f64 = 1e-3;

/// `F(λ)` together with its continued logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcsPoint {
    pub lambda: f64,
    pub value: Complex64,
    pub log: Complex64,
}

/// `F` sampled on a list of counting fields.
#[derive(Debug, Clone, PartialEq)]
pub struct FcsCurve {
    pub t: f64,
    pub a: i64,
    pub b: Option<i64>,
    pub points: Vec<FcsPoint>,
}

/// `F(λ) = det(I + s (e^{iλ} − 1) M)` for a fixed finite matrix `M` and sign `s`.
#[derive(Debug, Clone)]
pub struct CountingDeterminant {
    matrix: DMatrix<Complex64>,
    sign: f64,
}

impl CountingDeterminant {
    pub(crate) fn new(matrix: DMatrix<Complex64>, sign: f64) -> Self {
        Self { matrix, sign }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// `ln F(λ)` on whatever branch the LU factors land on.
    pub fn raw_log(&self, lambda: f64) -> Complex64 {
        let z = counting_factor(lambda) * self.sign;
        let mut m = &self.matrix * z;
        for i in 0..m.nrows() {
            m[(i, i)] += 1.0;
        }
        log_det(m)
    }

    /// `ln F(λ)`, continued from `λ = 0`.
    pub fn log(&self, lambda: f64) -> Complex64 {
        continue_log(lambda, |mu| self.raw_log(mu))
    }

    pub fn point(&self, lambda: f64) -> FcsPoint {
        let log = self.log(lambda);
        FcsPoint {
            lambda,
            value: log.exp(),
            log,
        }
    }

    pub fn points(&self, lambdas: &[f64]) -> Vec<FcsPoint> {
        lambdas.par_iter().map(|&l| self.point(l)).collect()
    }

    /// `⟨N⟩ = −i ∂_λ ln F |_0`.
    pub fn mean(&self) -> f64 {
        let h = MEAN_STEP;
        let d = (self.raw_log(h) - align_branch(self.raw_log(-h), self.raw_log(h))) / (2.0 * h);
        (d * Complex64::new(0.0, -1.0)).re
    }

    /// `⟨N²⟩ − ⟨N⟩² = −∂²_λ ln F |_0`.
    pub fn variance(&self) -> f64 {
        let h = VARIANCE_STEP;
        let plus = align_branch(self.raw_log(h), Complex64::new(0.0, 0.0));
        let minus = align_branch(self.raw_log(-h), Complex64::new(0.0, 0.0));
        -(plus + minus).re / (h * h)
    }

    /// Largest change of `ln F` at the probe fields relative to `other`.
    pub(crate) fn distance(&self, other: &CountingDeterminant) -> f64 {
        PROBE_FIELDS
            .iter()
            .map(|&l| {
                let old = other.raw_log(l);
                (align_branch(self.raw_log(l), old) - old).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub(crate) fn check_setup(t: f64, a: i64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            what: "time t",
            value: t,
            domain: "[0, ∞)",
        });
    }
    if a < 1 {
        return Err(Error::invalid("a", format!("counting interval must start at a ≥ 1, got {a}")));
    }
    Ok(())
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() {
        return Err(Error::Domain {
            what: "counting field λ",
            value: lambda,
            domain: "finite reals",
        });
    }
    Ok(())
}
