//! The same determinant rewritten as a Fredholm determinant on `s ∈ (0, t)`.
//!
//! With `J̃₁(n, s) = (it/s)^{n−a} J_{n−a+1}(s)` and `J̃₂(s, m) = (it/s)^{a−m} J_{m−a}(s)`,
//! `F(λ) = det(I − (e^{iλ} − 1) K)` where `K(s, s') = Σ_{j,k≤0} J̃₂(s, j) C₀(j, k) J̃₁(k, s')`.
//! Gauss–Legendre nodes discretise `K`, doubling until `ln F` settles.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_lambda, check_setup, CountingDeterminant, FcsCurve, FcsPoint, LeftCorrelations};
use crate::error::{Error, Result};
use crate::lattice::evolve::i_pow;
use crate::specfun::{bessel_row, gauss_legendre};

/// Relative change of `ln F` under node doubling below which the rule is accepted.
pub const NYSTROM_TOLERANCE: f64 = 1e-9;
const FIRST_NODES: usize = 32;
const MAX_NODES: usize = 256;

/// `K` sampled on a Gauss–Legendre rule, stored as `√w_p K(s_p, s_q) √w_q`.
#[derive(Debug, Clone)]
pub struct NystromKernel {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub matrix: DMatrix<Complex64>,
}

impl NystromKernel {
    pub fn new<C: LeftCorrelations + ?Sized>(c0: &C, t: f64, a: i64, nodes: usize) -> Result<Self> {
        check_setup(t, a)?;
        if t == 0.0 {
            return Err(Error::invalid("t", "the Nyström kernel needs t > 0"));
        }
        let rule = gauss_legendre(nodes, 0.0, t)?;
        let depth = (1.5 * t).ceil() as i64 + 40 + a;
        let lo = c0.lowest_site().map_or(-depth, |f| f.max(-depth)).min(0);
        let sites = (1 - lo) as usize;
        let n = rule.len();

        // left factor A (nodes × sites) and right factor B (sites × nodes)
        let mut left = DMatrix::<Complex64>::zeros(n, sites);
        let mut right = DMatrix::<Complex64>::zeros(sites, n);
        for (p, (&s, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let row = bessel_row(s, lo - a, 1 - a)?;
            let ln_ratio = (t / s).ln();
            let sw = w.sqrt();
            for (col, j) in (lo..=0).enumerate() {
                let (l2, s2) = row.log_abs_sign(j - a);
                if s2 != 0.0 {
                    let mag = ((a - j) as f64 * ln_ratio + l2).exp();
                    left[(p, col)] = i_pow(a - j) * (sw * s2 * mag);
                }
                let (l1, s1) = row.log_abs_sign(j - a + 1);
                if s1 != 0.0 {
                    let mag = ((j - a) as f64 * ln_ratio + l1).exp();
                    right[(col, p)] = i_pow(j - a) * (sw * s1 * mag);
                }
            }
        }
        let c = DMatrix::from_fn(sites, sites, |i, j| c0.entry(lo + i as i64, lo + j as i64));
        let matrix = left * (c * right);
        Ok(Self {
            nodes: rule.nodes.clone(),
            weights: rule.weights.clone(),
            matrix,
        })
    }

    /// `K(s_p, s_q)` without the quadrature weights.
    pub fn raw(&self, p: usize, q: usize) -> Complex64 {
        self.matrix[(p, q)] / (self.weights[p] * self.weights[q]).sqrt()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// A node-converged Fredholm determinant for particles in `[a, ∞)`.
#[derive(Debug, Clone)]
pub struct ContinuousFcs {
    t: f64,
    a: i64,
    nodes: usize,
    det: CountingDeterminant,
}

impl ContinuousFcs {
    pub fn new<C: LeftCorrelations + ?Sized>(c0: &C, t: f64, a: i64) -> Result<Self> {
        check_setup(t, a)?;
        c0.validate()?;
        if t == 0.0 {
            return Ok(Self {
                t,
                a,
                nodes: 0,
                det: CountingDeterminant::new(DMatrix::zeros(0, 0), -1.0),
            });
        }
        let build = |n| NystromKernel::new(c0, t, a, n).map(|k| CountingDeterminant::new(k.matrix, -1.0));
        let mut nodes = FIRST_NODES;
        let mut current = build(nodes)?;
        let mut change = f64::INFINITY;
        let mut doublings = 0;
        while nodes < MAX_NODES {
            nodes *= 2;
            doublings += 1;
            let next = build(nodes)?;
            let scale = super::PROBE_FIELDS
                .iter()
                .map(|&l| current.raw_log(l).norm())
                .fold(1.0, f64::max);
            change = next.distance(&current) / scale;
            current = next;
            if change < NYSTROM_TOLERANCE {
                break;
            }
        }
        if !(change < NYSTROM_TOLERANCE) {
            return Err(Error::NonConvergence {
                what: "Nyström counting determinant (node doubling)",
                iterations: doublings,
                residual: change,
            });
        }
        Ok(Self {
            t,
            a,
            nodes,
            det: current,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
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
            b: None,
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

/// `F(λ)` for particles in `[a, ∞)` from the Fredholm form.
pub fn fcs_continuous<C: LeftCorrelations + ?Sized>(c0: &C, t: f64, a: i64, lambda: f64) -> Result<Complex64> {
    check_lambda(lambda)?;
    Ok(ContinuousFcs::new(c0, t, a)?.point(lambda)?.value)
}
