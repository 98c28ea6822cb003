//! The discrete Bessel kernel
//! `B_t(m, n) = t/(2(m-n)) (J_{m-1}(t) J_n(t) - J_m(t) J_{n-1}(t))`,
//! equal to `Σ_{j≥0} J_{m+j}(t) J_{n+j}(t)`.

use crate::error::{Error, Result};
use crate::specfun::bessel::{bessel_row, BesselRow};

/// Summation stops once a diagonal term drops below this, past the turning point.
const DIAGONAL_TERM_CUTOFF: f64 = 1e-16;

/// Kernel evaluator for all index pairs inside `[lo, hi]`.
///
/// One Bessel row serves every entry: off-diagonal entries use the two-term
/// closed form, diagonal entries `B_t(n, n) = Σ_{p≥n} J_p(t)²` come from tail
/// sums accumulated from the top of the row downwards.
#[derive(Debug, Clone)]
pub struct DiscreteBesselKernel {
    lo: i64,
    hi: i64,
    row: BesselRow,
    tail: Vec<f64>,
}

impl DiscreteBesselKernel {
    pub fn new(t: f64, lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(
                "kernel range",
                format!("lo = {lo} exceeds hi = {hi}"),
            ));
        }
        // the row must reach far enough above the turning point for the tail sums
        let top = hi.max(t.ceil() as i64) + (10.0 * t.cbrt()).ceil().max(20.0) as i64 + 20;
        let row = bessel_row(t, lo - 1, top)?;
        let len = (top - (lo - 1) + 1) as usize;
        let mut tail = vec![0.0; len + 1];
        for i in (0..len).rev() {
            let v = row.values()[i];
            tail[i] = tail[i + 1] + v * v;
        }
        Ok(Self { lo, hi, row, tail })
    }

    pub fn argument(&self) -> f64 {
        self.row.argument()
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn bessel(&self) -> &BesselRow {
        &self.row
    }

    /// `B_t(m, n)`. Panics when an index falls outside the range given at construction.
    #[inline]
    pub fn eval(&self, m: i64, n: i64) -> f64 {
        assert!(
            m >= self.lo && m <= self.hi && n >= self.lo && n <= self.hi,
            "kernel index ({m}, {n}) outside [{}, {}]",
            self.lo,
            self.hi
        );
        if m == n {
            return self.tail[(n - self.row.n_min()) as usize];
        }
        let t = self.row.argument();
        if t == 0.0 {
            return 0.0;
        }
        let j = |k: i64| self.row.get(k);
        t / (2.0 * (m - n) as f64) * (j(m - 1) * j(n) - j(m) * j(n - 1))
    }
}

/// `B_t(m, n)` for a single pair.
///
/// The diagonal is the series `Σ_{j≥0} J_{n+j}(t)²`, truncated once terms
/// fall below `1e-16` beyond the turning point `n + j > t`.
pub fn discrete_bessel_kernel(t: f64, m: i64, n: i64) -> Result<f64> {
    if m != n {
        let lo = m.min(n);
        let hi = m.max(n);
        let row = bessel_row(t, lo - 1, hi)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let j = |k: i64| row.get(k);
        return Ok(t / (2.0 * (m - n) as f64) * (j(m - 1) * j(n) - j(m) * j(n - 1)));
    }
    let top = n.max(t.ceil() as i64) + (10.0 * t.cbrt()).ceil().max(20.0) as i64 + 20;
    let row = bessel_row(t, n, top)?;
    let mut sum = 0.0;
    for p in n..=top {
        let v = row.get(p);
        let term = v * v;
        sum += term;
        if (p as f64) > t && term < DIAGONAL_TERM_CUTOFF * DIAGONAL_TERM_CUTOFF.max(sum) {
            break;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn no_propagation_at_zero_time() {
        assert_eq!(discrete_bessel_kernel(0.0, 3, 3).unwrap(), 0.0);
        assert_eq!(discrete_bessel_kernel(0.0, 0, 0).unwrap(), 1.0);
        assert_eq!(discrete_bessel_kernel(0.0, -4, -4).unwrap(), 1.0);
        assert_eq!(discrete_bessel_kernel(0.0, -4, 2).unwrap(), 0.0);
    }

    #[test]
    fn table_agrees_with_single_evaluations() {
        let t = 12.5;
        let kernel = DiscreteBesselKernel::new(t, -30, 40).unwrap();
        for &(m, n) in &[(0, 0), (5, 5), (-30, -30), (3, -7), (-12, 40), (17, 16)] {
            let single = discrete_bessel_kernel(t, m, n).unwrap();
            assert_abs_diff_eq!(kernel.eval(m, n), single, epsilon = 1e-13);
        }
    }

    #[test]
    fn symmetric_by_construction() {
        let kernel = DiscreteBesselKernel::new(9.0, -20, 20).unwrap();
        for m in -20..=20 {
            for n in -20..=20 {
                assert_eq!(kernel.eval(m, n), kernel.eval(n, m));
            }
        }
    }

    #[test]
    fn deep_left_diagonal_is_one() {
        let kernel = DiscreteBesselKernel::new(30.0, -200, 0).unwrap();
        assert_abs_diff_eq!(kernel.eval(-200, -200), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(kernel.eval(-200, -199), 0.0, epsilon = 1e-13);
    }
}
