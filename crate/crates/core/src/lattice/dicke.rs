//! Two-point function of a fermionic Dicke state: `d` particles spread
//! symmetrically over `D` contiguous sites.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest cell handled with exact integer binomials.
pub const MAX_CELL: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DickeCell {
    sites: usize,
    particles: usize,
}

impl DickeCell {
    pub fn new(sites: usize, particles: usize) -> Result<Self> {
        if particles < 1 || particles > sites {
            return Err(Error::invalid(
                "Dicke cell",
                format!("need 1 ≤ d ≤ D, got D = {sites}, d = {particles}"),
            ));
        }
        if sites > MAX_CELL {
            return Err(Error::invalid(
                "Dicke cell",
                format!("D = {sites} exceeds the supported maximum {MAX_CELL}"),
            ));
        }
        Ok(Self { sites, particles })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    /// `c_{j,j+s}` for separation `0 ≤ s < D`; the matrix is Toeplitz.
    pub fn correlation_at(&self, s: usize) -> f64 {
        let (big_d, d) = (self.sites as i64, self.particles as i64);
        if s == 0 {
            return d as f64 / big_d as f64;
        }
        let s = s as i64;
        assert!(s < big_d, "separation {s} outside a cell of {big_d} sites");
        // sites outside [j, k] and strictly between them
        let outside = big_d - (s + 1);
        let between = s - 1;
        let upper = between.min(d - 1);
        let lower = if outside >= d - 1 { 0 } else { d - 1 - outside };
        let mut signed: i128 = 0;
        for m in lower..=upper {
            let term = binomial(outside, d - m - 1) * binomial(between, m);
            if m % 2 == 0 {
                signed += term;
            } else {
                signed -= term;
            }
        }
        signed as f64 / binomial(big_d, d) as f64
    }
}

/// Exact `C(n, k)`, zero outside `0 ≤ k ≤ n`. Exact for `n ≤ 64` in `i128`.
pub(crate) fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        // acc · (n − i) is divisible by (i + 1) after the multiplication
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// The `D × D` matrix `c^{(D,d)}_{jk} = ⟨c†_j c_k⟩`.
pub fn dicke_correlations(cell: DickeCell) -> DMatrix<f64> {
    let n = cell.sites();
    let row: Vec<f64> = (0..n).map(|s| cell.correlation_at(s)).collect();
    DMatrix::from_fn(n, n, |j, k| row[j.abs_diff(k)])
}
