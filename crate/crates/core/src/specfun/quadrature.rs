//! Gauss–Legendre rules and an adaptive integrator built on them.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Nodes and weights on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

type Reference = Arc<(Vec<f64>, Vec<f64>)>;

fn reference_cache() -> &'static Mutex<HashMap<usize, Reference>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Reference>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `n`-point rule on `[-1, 1]`, nodes ascending.
fn reference_rule(n: usize) -> Reference {
    if let Some(rule) = reference_cache().lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi's initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let rule = Arc::new((nodes, weights));
    reference_cache()
        .lock()
        .unwrap()
        .insert(n, Arc::clone(&rule));
    rule
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `n`-point Gauss–Legendre rule mapped onto `[lo, hi]`.
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::invalid("quadrature order", "must be at least 1"));
    }
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::invalid(
            "quadrature interval",
            format!("[{lo}, {hi}] is not a finite non-empty interval"),
        ));
    }
    let reference = reference_rule(n);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    Ok(QuadratureRule {
        nodes: reference.0.iter().map(|x| mid + half * x).collect(),
        weights: reference.1.iter().map(|w| half * w).collect(),
        lo,
        hi,
    })
}

/// Order of the panel rule used by [`integrate_adaptive`].
const PANEL_ORDER: usize = 20;

/// Settings for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 40,
        }
    }
}

fn panel<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> f64 {
    let reference = reference_rule(PANEL_ORDER);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    reference
        .0
        .iter()
        .zip(&reference.1)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Adaptive bisection of `∫_lo^hi f`, split first at the interior `breakpoints`.
///
/// Each panel compares its rule against the sum over its two halves and is
/// bisected until they agree to `max(abs_tol, rel_tol·|I|)`, scaled by the
/// panel's share of the interval.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    options: AdaptiveOptions,
) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::invalid(
            "integration interval",
            format!("[{lo}, {hi}] is not a finite interval"),
        ));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let mut cuts = vec![lo];
    let mut interior: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|b| *b > lo && *b < hi)
        .collect();
    interior.sort_by(f64::total_cmp);
    interior.dedup();
    cuts.extend(interior);
    cuts.push(hi);

    let width = hi - lo;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let whole = panel(&mut f, a, b);
        let mut stack = vec![(a, b, whole, 0usize)];
        while let Some((a, b, estimate, depth)) = stack.pop() {
            let m = 0.5 * (a + b);
            let left = panel(&mut f, a, m);
            let right = panel(&mut f, m, b);
            let refined = left + right;
            let change = (refined - estimate).abs();
            let share = (b - a) / width;
            let tol = options.abs_tol.max(options.rel_tol * refined.abs()) * share.max(1e-3);
            if change <= tol || (b - a) <= 1e-14 * width.max(1.0) {
                total += refined;
            } else if depth >= options.max_depth {
                return Err(Error::NonConvergence {
                    what: "adaptive quadrature",
                    iterations: depth,
                    residual: change,
                });
            } else {
                stack.push((a, m, left, depth + 1));
                stack.push((m, b, right, depth + 1));
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_for_polynomials_of_degree_below_2n() {
        let rule = gauss_legendre(6, -1.0, 2.0).unwrap();
        let exact = (2.0_f64.powi(12) - 1.0) / 12.0;
        assert_abs_diff_eq!(rule.integrate(|x| x.powi(11)), exact, epsilon = 1e-10);
        assert_abs_diff_eq!(rule.weights.iter().sum::<f64>(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn large_rules_are_accurate() {
        let rule = gauss_legendre(256, 0.0, PI).unwrap();
        assert_abs_diff_eq!(rule.integrate(f64::sin), 2.0, epsilon = 1e-13);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn adaptive_handles_kinks_at_breakpoints() {
        let f = |x: f64| (x - 0.3).abs();
        let v = integrate_adaptive(f, 0.0, 1.0, &[0.3], AdaptiveOptions::default()).unwrap();
        assert_abs_diff_eq!(v, 0.045 + 0.245, epsilon = 1e-13);
        let v = integrate_adaptive(f, 0.0, 1.0, &[], AdaptiveOptions::default()).unwrap();
        assert_abs_diff_eq!(v, 0.29, epsilon = 1e-9);
    }

    #[test]
    fn adaptive_integrates_peaked_functions() {
        let f = |x: f64| 1.0 / (1e-4 + x * x);
        let v = integrate_adaptive(f, -1.0, 1.0, &[], AdaptiveOptions::default()).unwrap();
        let exact = 2.0 * (1.0 / 1e-2_f64).atan() / 1e-2;
        assert_abs_diff_eq!(v, exact, epsilon = 1e-8 * exact);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(gauss_legendre(0, 0.0, 1.0).is_err());
        assert!(gauss_legendre(4, 1.0, 1.0).is_err());
        assert!(integrate_adaptive(|x| x, 0.0, f64::INFINITY, &[], AdaptiveOptions::default()).is_err());
    }
}
