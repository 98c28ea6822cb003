//! Integer-order Bessel functions of the first kind.
//!
//! Rows `J_n(t)` for a contiguous range of orders are produced with Miller's
//! downward recurrence, normalised through `J_0 + 2 Σ_k J_{2k} = 1`. The
//! recurrence is started above both the largest requested order and the
//! argument, so every order in the row is computed on the stable side.

use std::f64::consts::{LN_10, PI};

use crate::error::{Error, Result};

const RESCALE: f64 = 1e250;
const RESCALE_EXP: f64 = 250.0 * LN_10;

/// `J_n(t)` for every order `n` in `[n_min, n_max]`.
///
/// Alongside the values the row keeps `ln|J_n(t)|`, which stays finite where
/// the value itself underflows. Callers multiplying by large powers (the
/// semi-discrete kernels) need it.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselRow {
    t: f64,
    n_min: i64,
    values: Vec<f64>,
    log_abs: Vec<f64>,
}

impl BesselRow {
    pub fn argument(&self) -> f64 {
        self.t
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.n_min && n <= self.n_max()
    }

    /// `J_n(t)`; zero for orders outside the row.
    #[inline]
    pub fn get(&self, n: i64) -> f64 {
        if self.contains(n) {
            self.values[(n - self.n_min) as usize]
        } else {
            0.0
        }
    }

    /// `(ln|J_n(t)|, sign)`. The sign is `0.0` where the value vanishes exactly.
    #[inline]
    pub fn log_abs_sign(&self, n: i64) -> (f64, f64) {
        if !self.contains(n) {
            return (f64::NEG_INFINITY, 0.0);
        }
        let i = (n - self.n_min) as usize;
        let v = self.values[i];
        let la = self.log_abs[i];
        // underflowed entries are signed zeros, so `signum` still works
        let sign = if la == f64::NEG_INFINITY { 0.0 } else { v.signum() };
        (la, sign)
    }

    /// `dJ_n/dt = (J_{n-1} - J_{n+1}) / 2`. Needs `n ± 1` inside the row.
    pub fn derivative(&self, n: i64) -> f64 {
        0.5 * (self.get(n - 1) - self.get(n + 1))
    }
}

/// Order at which the downward recurrence is seeded.
fn start_order(n_top: i64, t: f64) -> i64 {
    let margin = (10.0 * t.cbrt()).ceil().max(20.0) as i64;
    n_top.max(t.ceil() as i64) + margin
}

/// Non-negative orders `0..=n_top`, as `(value, ln|value|)` pairs.
fn miller_nonnegative(t: f64, n_top: usize) -> (Vec<f64>, Vec<f64>) {
    let start = start_order(n_top as i64, t) as usize;
    let mut raw = vec![0.0; n_top + 1];
    let mut epoch = vec![0u32; n_top + 1];
    let mut rescales = 0u32;

    let mut above = 0.0_f64; // j_{p+1}
    let mut cur = 1e-30_f64; // j_p
    let mut even_sum = if start.is_multiple_of(2) { cur } else { 0.0 };
    if start <= n_top {
        raw[start] = cur;
    }
    for p in (1..=start).rev() {
        let mut below = (2.0 * p as f64 / t) * cur - above;
        if below.abs() > RESCALE {
            below /= RESCALE;
            cur /= RESCALE;
            even_sum /= RESCALE;
            rescales += 1;
        }
        let q = p - 1;
        if q <= n_top {
            raw[q] = below;
            epoch[q] = rescales;
        }
        if q % 2 == 0 {
            even_sum += if q == 0 { below } else { 2.0 * below };
        }
        above = cur;
        cur = below;
    }
    let norm = even_sum;
    let ln_norm = norm.abs().ln();
    let mut values = Vec::with_capacity(n_top + 1);
    let mut log_abs = Vec::with_capacity(n_top + 1);
    for (v, e) in raw.iter().zip(&epoch) {
        let shift = (rescales - e) as f64 * RESCALE_EXP;
        if *v == 0.0 {
            values.push(0.0);
            log_abs.push(f64::NEG_INFINITY);
            continue;
        }
        let la = v.abs().ln() - shift - ln_norm;
        let sign = v.signum() * norm.signum();
        log_abs.push(la);
        values.push(if shift == 0.0 { v / norm } else { sign * la.exp() });
    }
    (values, log_abs)
}

/// `J_n(t)` for `n_min ≤ n ≤ n_max`.
pub fn bessel_row(t: f64, n_min: i64, n_max: i64) -> Result<BesselRow> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            what: "Bessel argument t",
            value: t,
            domain: "[0, ∞)",
        });
    }
    if n_min > n_max {
        return Err(Error::invalid(
            "orders",
            format!("n_min = {n_min} exceeds n_max = {n_max}"),
        ));
    }
    let len = (n_max - n_min + 1) as usize;
    if t == 0.0 {
        let values: Vec<f64> = (n_min..=n_max)
            .map(|n| if n == 0 { 1.0 } else { 0.0 })
            .collect();
        let log_abs = values
            .iter()
            .map(|v| if *v == 0.0 { f64::NEG_INFINITY } else { 0.0 })
            .collect();
        return Ok(BesselRow {
            t,
            n_min,
            values,
            log_abs,
        });
    }

    let n_top = n_min.abs().max(n_max.abs()) as usize;
    let (pos, pos_log) = miller_nonnegative(t, n_top);
    let mut values = Vec::with_capacity(len);
    let mut log_abs = Vec::with_capacity(len);
    for n in n_min..=n_max {
        let k = n.unsigned_abs() as usize;
        let odd_negative = n < 0 && k % 2 == 1;
        values.push(if odd_negative { -pos[k] } else { pos[k] });
        log_abs.push(pos_log[k]);
    }
    Ok(BesselRow {
        t,
        n_min,
        values,
        log_abs,
    })
}

/// Single value `J_n(t)`.
pub fn bessel_j(n: i64, t: f64) -> Result<f64> {
    Ok(bessel_row(t, n, n)?.get(n))
}

/// Leading uniform approximation of `J_{ut}(t)` for `0 < u < 1`:
/// `sqrt(2 / (π t sqrt(1-u²))) cos(t (sqrt(1-u²) - u arccos u) - π/4)`.
pub fn bessel_uniform_asymptotic(u: f64, t: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain {
            what: "order ratio u",
            value: u,
            domain: "(0, 1)",
        });
    }
    if !(t > 0.0) {
        return Err(Error::Domain {
            what: "Bessel argument t",
            value: t,
            domain: "(0, ∞)",
        });
    }
    let s = (1.0 - u * u).sqrt();
    let amplitude = (2.0 / (PI * t * s)).sqrt();
    let phase = t * (s - u * u.acos()) - PI / 4.0;
    Ok(amplitude * phase.cos())
}
