//! Command-line flags and the grids they describe.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    LatticeDensity,
    LatticeFlow,
    Dicke,
    ContinuumProfile,
    MeasuresSweep,
    TransitionMap,
    Dispersion,
    Fcs,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::LatticeDensity => "lattice-density",
            Command::LatticeFlow => "lattice-flow",
            Command::Dicke => "dicke",
            Command::ContinuumProfile => "continuum-profile",
            Command::MeasuresSweep => "measures-sweep",
            Command::TransitionMap => "transition-map",
            Command::Dispersion => "dispersion",
            Command::Fcs => "fcs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolName {
    Thermal,
    Gaussian,
    Dsk,
    FermiSea,
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    Correlation,
    Purity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Discrete,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Momentum,
    Correlation,
    Density,
}

/// Deterministic CSV/JSON artifacts for free-fermion transport.
///
/// Grids are written `start:stop:count` (linear), `start:stop:count:log`
/// (logarithmic) or as a comma-separated list.
#[derive(Debug, Parser)]
#[command(name = "fermionflow", version)]
pub struct Cli {
    /// What to compute.
    #[arg(long, value_enum)]
    pub command: Command,

    /// Time (final time for lattice-flow).
    #[arg(long)]
    pub t: Option<f64>,

    /// Time step for lattice-flow.
    #[arg(long)]
    pub t_step: Option<f64>,

    /// Coherence length(s) ℓ_c; comma-separated where a list is accepted.
    #[arg(long, value_delimiter = ',')]
    pub ellc: Vec<usize>,

    /// Mean density.
    #[arg(long)]
    pub n0: Option<f64>,

    /// Particles per Dicke cell.
    #[arg(long)]
    pub particles: Option<usize>,

    #[arg(long, value_enum)]
    pub protocol: Option<ProtocolName>,

    #[arg(long)]
    pub beta: Option<f64>,

    #[arg(long)]
    pub alpha: Option<f64>,

    #[arg(long)]
    pub gamma: Option<f64>,

    #[arg(long)]
    pub sigma: Option<f64>,

    /// Width of the flat-limit protocol.
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Left end of the counting interval.
    #[arg(long)]
    pub a: Option<i64>,

    /// Right end of the counting interval (omit for [a, ∞)).
    #[arg(long)]
    pub b: Option<i64>,

    /// Counting fields for fcs.
    #[arg(long)]
    pub lambda_grid: Option<String>,

    /// μ_T values for transition-map and dispersion; coordinates for continuum-profile.
    #[arg(long)]
    pub x_grid: Option<String>,

    /// Protocol parameters for measures-sweep.
    #[arg(long)]
    pub param_grid: Option<String>,

    /// Correlation measure on the far side of the transition map.
    #[arg(long, value_enum)]
    pub measure: Option<Measure>,

    /// Determinant route for fcs.
    #[arg(long, value_enum)]
    pub route: Option<Route>,

    /// Which continuum profile to tabulate.
    #[arg(long, value_enum)]
    pub table: Option<Table>,

    /// Output CSV; a JSON sidecar is written next to it. Standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Quadrature tolerance overrides, `abs=…`, `rel=…` or `max_depth=…`.
    #[arg(long)]
    pub tol_override: Vec<String>,
}

/// Parses `start:stop:count[:log]` or `v1,v2,…`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Config(format!("grid '{spec}': {why}"));
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("'{s}' is not a number")));
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad("expected start:stop:count or start:stop:count:log"));
        }
        let (start, stop) = (number(parts[0])?, number(parts[1])?);
        let count: usize = parts[2].trim().parse().map_err(|_| bad("count must be a positive integer"))?;
        if count == 0 {
            return Err(bad("count must be a positive integer"));
        }
        let log = match parts.get(3).map(|s| s.trim()) {
            None | Some("lin") => false,
            Some("log") => true,
            Some(other) => return Err(bad(&format!("unknown spacing '{other}'"))),
        };
        if log && !(start > 0.0 && stop > 0.0) {
            return Err(bad("logarithmic grids need positive ends"));
        }
        let step = |i: usize| if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
        (0..count)
            .map(|i| {
                if log {
                    (start.ln() + (stop / start).ln() * step(i)).exp()
                } else {
                    start + (stop - start) * step(i)
                }
            })
            .collect::<Vec<_>>()
    } else {
        spec.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad("values must be finite and the grid non-empty"));
    }
    Ok(values)
}
