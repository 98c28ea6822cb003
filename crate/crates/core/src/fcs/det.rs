//! Complex log-determinants with a continuous branch of the logarithm.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// `ln det M` via LU with partial pivoting, imaginary part in an arbitrary branch.
///
/// Returns `-∞` (real part) for a singular matrix.
pub fn log_det(mut m: DMatrix<Complex64>) -> Complex64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "log_det needs a square matrix");
    let mut log = Complex64::new(0.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[(a, col)].norm().total_cmp(&m[(b, col)].norm()))
            .unwrap();
        if m[(pivot, col)].norm() == 0.0 {
            return Complex64::new(f64::NEG_INFINITY, 0.0);
        }
        if pivot != col {
            m.swap_rows(pivot, col);
            log += Complex64::new(0.0, PI);
        }
        let p = m[(col, col)];
        log += p.ln();
        for row in (col + 1)..n {
            let factor = m[(row, col)] / p;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in (col + 1)..n {
                let v = m[(col, c)];
                m[(row, c)] -= factor * v;
            }
        }
    }
    log
}

/// Shifts the imaginary part of `value` by a multiple of `2π` to land closest to `reference`.
pub fn align_branch(value: Complex64, reference: Complex64) -> Complex64 {
    let turns = ((reference.im - value.im) / (2.0 * PI)).round();
    Complex64::new(value.re, value.im + 2.0 * PI * turns)
}

/// Largest counting-field step taken along a continuation path.
pub const CONTINUATION_STEP: f64 = 0.2;

/// `ln F(λ)` continued from `ln F(0) = 0` along `0 → λ`, where `raw(μ)` gives
/// `ln F(μ)` on an arbitrary branch.
pub fn continue_log<F: FnMut(f64) -> Complex64>(lambda: f64, mut raw: F) -> Complex64 {
    let steps = ((lambda.abs() / CONTINUATION_STEP).ceil() as usize).max(1);
    let mut current = Complex64::new(0.0, 0.0);
    for i in 1..=steps {
        let mu = lambda * i as f64 / steps as f64;
        current = align_branch(raw(mu), current);
    }
    current
}

/// `z = e^{iλ} − 1`.
pub fn counting_factor(lambda: f64) -> Complex64 {
    Complex64::new(0.0, lambda).exp() - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn matches_eigenvalue_product() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                Complex64::new(0.0, 1.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(3.0, -1.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(1.0, 1.0),
                Complex64::new(-2.0, 0.0),
            ],
        );
        let det = m.clone().determinant();
        let log = log_det(m);
        assert_abs_diff_eq!((log.exp() - det).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn singular_matrix() {
        let m = DMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        assert_eq!(log_det(m).re, f64::NEG_INFINITY);
    }

    #[test]
    fn continuation_unwraps_the_phase() {
        // F(λ) = e^{3iλ}: the continued log is 3iλ, far outside the principal branch
        let log = continue_log(5.0, |mu| Complex64::new(0.0, 3.0 * mu).exp().ln());
        assert_abs_diff_eq!(log.im, 15.0, epsilon = 1e-12);
        assert_eq!(counting_factor(0.0), Complex64::new(0.0, 0.0));
    }
}
