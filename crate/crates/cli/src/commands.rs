//! One function per command: validate everything, then compute the table.

use std::f64::consts::PI;

use fermionflow::continuum::{ProtocolKind, ResolvedProtocol, Tolerances, WignerProtocol};
use fermionflow::fcs::{ContinuousFcs, DiscreteFcs, FcsCurve};
use fermionflow::lattice::{
    evolve_density, hydro_density, hydro_slope, least_squares_slope, transferred_particles, BandCoefficients,
    DickeCell, LatticeQuench,
};
use fermionflow::tmap::{
    dispersion, gaussian_transition_map, standard_grid, purity_transition_map, Dispersion, TargetMeasure,
    DEFAULT_TRANSITION_N0,
};

use crate::args::{parse_grid, Cli, Command, Measure, ProtocolName, Route, Table};
use crate::error::CliError;
use crate::output::{format_float, Artifact, Cell, RunConfig};

type Outcome = Result<Artifact, CliError>;

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Flags that were given on the command line.
fn given_flags(cli: &Cli) -> Vec<&'static str> {
    let mut flags = Vec::new();
    let mut check = |set: bool, name: &'static str| {
        if set {
            flags.push(name);
        }
    };
    check(cli.t.is_some(), "t");
    check(cli.t_step.is_some(), "t-step");
    check(!cli.ellc.is_empty(), "ellc");
    check(cli.n0.is_some(), "n0");
    check(cli.particles.is_some(), "particles");
    check(cli.protocol.is_some(), "protocol");
    check(cli.beta.is_some(), "beta");
    check(cli.alpha.is_some(), "alpha");
    check(cli.gamma.is_some(), "gamma");
    check(cli.sigma.is_some(), "sigma");
    check(cli.epsilon.is_some(), "epsilon");
    check(cli.a.is_some(), "a");
    check(cli.b.is_some(), "b");
    check(cli.lambda_grid.is_some(), "lambda-grid");
    check(cli.x_grid.is_some(), "x-grid");
    check(cli.param_grid.is_some(), "param-grid");
    check(cli.measure.is_some(), "measure");
    check(cli.route.is_some(), "route");
    check(cli.table.is_some(), "table");
    check(!cli.tol_override.is_empty(), "tol-override");
    flags
}

fn accepted_flags(command: Command) -> &'static [&'static str] {
    match command {
        Command::LatticeDensity => &["t", "ellc", "n0"],
        Command::LatticeFlow => &["t", "t-step", "ellc", "n0"],
        Command::Dicke => &["ellc", "particles"],
        Command::ContinuumProfile => &[
            "t", "n0", "protocol", "beta", "alpha", "gamma", "sigma", "epsilon", "x-grid", "table", "tol-override",
        ],
        Command::MeasuresSweep => &["n0", "protocol", "sigma", "param-grid", "tol-override"],
        Command::TransitionMap => &["n0", "x-grid", "measure"],
        Command::Dispersion => &["n0", "x-grid"],
        Command::Fcs => &["t", "ellc", "n0", "a", "b", "lambda-grid", "route"],
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let accepted = accepted_flags(cli.command);
    let stray: Vec<String> = given_flags(cli)
        .into_iter()
        .filter(|f| !accepted.contains(f))
        .map(|f| format!("--{f}"))
        .collect();
    if !stray.is_empty() {
        return Err(config_error(format!(
            "{} does not take {}",
            cli.command.name(),
            stray.join(", ")
        )));
    }
    match cli.command {
        Command::LatticeDensity => lattice_density(cli),
        Command::LatticeFlow => lattice_flow(cli),
        Command::Dicke => dicke(cli),
        Command::ContinuumProfile => continuum_profile(cli),
        Command::MeasuresSweep => measures_sweep(cli),
        Command::TransitionMap => transition_map(cli),
        Command::Dispersion => dispersion_command(cli),
        Command::Fcs => fcs(cli),
    }
}

fn time(cli: &Cli, default: f64) -> Result<f64, CliError> {
    let t = cli.t.unwrap_or(default);
    if !(t >= 0.0 && t.is_finite()) {
        return Err(config_error(format!("--t must be finite and non-negative, got {t}")));
    }
    Ok(t)
}

fn cells(cli: &Cli, default: &[usize]) -> Vec<usize> {
    if cli.ellc.is_empty() {
        default.to_vec()
    } else {
        cli.ellc.clone()
    }
}

fn single_cell(cli: &Cli, default: usize) -> Result<usize, CliError> {
    match cli.ellc.as_slice() {
        [] => Ok(default),
        [one] => Ok(*one),
        _ => Err(config_error(format!("{} takes a single --ellc", cli.command.name()))),
    }
}

/// `n0` defaults to one particle per cell.
fn lattice_density_of(cli: &Cli, ell_c: usize) -> f64 {
    cli.n0.unwrap_or(1.0 / ell_c.max(1) as f64)
}

fn one_particle_per_cell(n0: f64, ell_c: usize) -> bool {
    (n0 * ell_c as f64 - 1.0).abs() < 1e-12
}

/// `Φ(u)` extended to all `u` by `ρ(−u) = n0 − ρ(u)` and saturation outside the light cone.
fn hydro_extended(u: f64, n0: f64, ell_c: usize) -> Result<f64, CliError> {
    Ok(if u >= 1.0 {
        0.0
    } else if u >= 0.0 {
        hydro_density(u, n0, ell_c)?
    } else if u > -1.0 {
        n0 - hydro_density(-u, n0, ell_c)?
    } else {
        n0
    })
}

fn lattice_density(cli: &Cli) -> Outcome {
    let t = time(cli, 300.0)?;
    let cells = cells(cli, &[1]);
    let mut setups = Vec::new();
    for &ell_c in &cells {
        let n0 = lattice_density_of(cli, ell_c);
        let q = LatticeQuench::for_time(n0, ell_c, t)?;
        let band = BandCoefficients::correlated(n0, ell_c)?;
        setups.push((ell_c, n0, q, band));
    }
    let mut config = RunConfig::new(Command::LatticeDensity);
    config.set("t", t);
    config.set("ellc", &cells);
    config.set("n0", setups.iter().map(|s| s.1).collect::<Vec<_>>());
    let mut art = Artifact::new(
        config,
        vec!["ell_c", "m", "u", "density", "density_rescaled", "hydro", "hydro_rescaled"],
    );
    for (ell_c, n0, q, band) in &setups {
        let (lo, hi) = q.window();
        art.resolved(&format!("window_ellc_{ell_c}"), format!("[{lo}, {hi}]"));
        let profile = evolve_density(q, band, t)?;
        let with_hydro = one_particle_per_cell(*n0, *ell_c) && t > 0.0;
        let scale = *ell_c as f64;
        for m in profile.sites() {
            let rho = profile.get(m);
            let u = if t > 0.0 { m as f64 / t } else { f64::NAN };
            let hydro = if with_hydro { hydro_extended(u, *n0, *ell_c)? } else { f64::NAN };
            art.push(vec![
                Cell::from(*ell_c),
                Cell::from(m),
                u.into(),
                rho.into(),
                (scale * rho).into(),
                hydro.into(),
                (scale * hydro).into(),
            ]);
        }
    }
    Ok(art)
}

fn lattice_flow(cli: &Cli) -> Outcome {
    let t_max = time(cli, 300.0)?;
    let step = cli.t_step.unwrap_or(10.0);
    if !(step > 0.0 && step.is_finite()) {
        return Err(config_error(format!("--t-step must be positive, got {step}")));
    }
    let count = (t_max / step + 1e-9).floor() as usize;
    let times: Vec<f64> = (0..=count).map(|i| i as f64 * step).collect();
    let cells = cells(cli, &[1, 2, 3, 4]);
    let mut setups = Vec::new();
    for &ell_c in &cells {
        let n0 = lattice_density_of(cli, ell_c);
        let q = LatticeQuench::for_time(n0, ell_c, t_max)?;
        let band = BandCoefficients::correlated(n0, ell_c)?;
        setups.push((ell_c, n0, q, band));
    }
    let mut config = RunConfig::new(Command::LatticeFlow);
    config.set("t", t_max);
    config.set("t_step", step);
    config.set("ellc", &cells);
    config.set("n0", setups.iter().map(|s| s.1).collect::<Vec<_>>());
    let mut art = Artifact::new(config, vec!["ell_c", "t", "n_r", "n_r_rescaled"]);
    for (ell_c, n0, q, band) in &setups {
        let points = transferred_particles(q, band, &times)?;
        for &(t, n) in &points {
            art.push(vec![Cell::from(*ell_c), t.into(), n.into(), (*ell_c as f64 * n).into()]);
        }
        // fit over the last third of the run, where transport is linear
        let tail: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0 >= 2.0 * t_max / 3.0).collect();
        if tail.len() >= 2 {
            let slope = least_squares_slope(&tail)?;
            art.summarise(&format!("slope_ellc_{ell_c}"), slope);
            if one_particle_per_cell(*n0, *ell_c) {
                art.summarise(&format!("hydro_slope_ellc_{ell_c}"), hydro_slope(*ell_c)?);
            }
        }
    }
    Ok(art)
}

fn dicke(cli: &Cli) -> Outcome {
    let sites = single_cell(cli, 4)?;
    let particles = cli.particles.unwrap_or(1);
    let cell = DickeCell::new(sites, particles)?;
    let mut config = RunConfig::new(Command::Dicke);
    config.set("ellc", sites);
    config.set("particles", particles);
    let mut art = Artifact::new(config, vec!["s", "correlation"]);
    for s in 0..sites {
        art.push(vec![Cell::from(s), cell.correlation_at(s).into()]);
    }
    Ok(art)
}

fn tolerances(cli: &Cli) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    for item in &cli.tol_override {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| config_error(format!("--tol-override '{item}' is not key=value")))?;
        let bad = || config_error(format!("--tol-override {key}: cannot use '{value}'"));
        match key.trim() {
            "abs" | "rel" => {
                let v: f64 = value.trim().parse().map_err(|_| bad())?;
                if !(v > 0.0 && v < 1.0) {
                    return Err(bad());
                }
                if key.trim() == "abs" {
                    tol.abs = v;
                } else {
                    tol.rel = v;
                }
            }
            "max_depth" => {
                let v: usize = value.trim().parse().map_err(|_| bad())?;
                if !(1..=60).contains(&v) {
                    return Err(bad());
                }
                tol.max_depth = v;
            }
            other => {
                return Err(config_error(format!(
                    "unknown tolerance '{other}' (expected abs, rel or max_depth)"
                )))
            }
        }
    }
    Ok(tol)
}

fn protocol_kind(cli: &Cli) -> Result<ProtocolKind, CliError> {
    let need = |v: Option<f64>, flag: &str, name: &str| {
        v.ok_or_else(|| config_error(format!("--protocol {name} needs --{flag}")))
    };
    let protocol = cli
        .protocol
        .ok_or_else(|| config_error(format!("{} needs --protocol", cli.command.name())))?;
    let unused = |flags: &[(&str, bool)]| -> Result<(), CliError> {
        for (flag, set) in flags {
            if *set {
                return Err(config_error(format!("--{flag} does not apply to this protocol")));
            }
        }
        Ok(())
    };
    let (b, a, g, s, e) = (
        cli.beta.is_some(),
        cli.alpha.is_some(),
        cli.gamma.is_some(),
        cli.sigma.is_some(),
        cli.epsilon.is_some(),
    );
    Ok(match protocol {
        ProtocolName::Thermal => {
            unused(&[("alpha", a), ("gamma", g), ("sigma", s), ("epsilon", e)])?;
            ProtocolKind::Thermal {
                beta: need(cli.beta, "beta", "thermal")?,
            }
        }
        ProtocolName::Gaussian => {
            unused(&[("beta", b), ("gamma", g), ("sigma", s), ("epsilon", e)])?;
            ProtocolKind::Gaussian {
                alpha: need(cli.alpha, "alpha", "gaussian")?,
            }
        }
        ProtocolName::Dsk => {
            unused(&[("beta", b), ("alpha", a), ("epsilon", e)])?;
            ProtocolKind::DeformedSineKernel {
                gamma: need(cli.gamma, "gamma", "dsk")?,
                sigma: cli.sigma.unwrap_or(fermionflow::tmap::DSK_SIGMA),
            }
        }
        ProtocolName::FermiSea => {
            unused(&[("beta", b), ("alpha", a), ("gamma", g), ("sigma", s), ("epsilon", e)])?;
            ProtocolKind::FermiSea
        }
        ProtocolName::Flat => {
            unused(&[("beta", b), ("alpha", a), ("gamma", g), ("sigma", s)])?;
            ProtocolKind::FlatLimit {
                epsilon: need(cli.epsilon, "epsilon", "flat")?,
            }
        }
    })
}

fn echo_protocol(art: &mut Artifact, r: &ResolvedProtocol) {
    if let Some(mu) = r.chemical_potential() {
        art.resolved_float("chemical_potential", mu);
    }
    if let Some(norm) = r.normalization() {
        art.resolved_float("normalization", norm);
    }
    art.resolved_float("k_cut", r.k_cut());
    art.resolved_float("max_occupation", r.max_occupation());
    art.resolved("physical", r.is_physical());
}

fn continuum_profile(cli: &Cli) -> Outcome {
    let kind = protocol_kind(cli)?;
    let n0 = cli.n0.unwrap_or(0.5);
    let tol = tolerances(cli)?;
    let table = cli.table.unwrap_or(Table::Momentum);
    let resolved = WignerProtocol::new(kind, n0)?.resolve_with(tol)?;
    let t = match table {
        Table::Density => Some(time(cli, 1.0)?),
        _ if cli.t.is_some() => return Err(config_error("--t only applies to --table density")),
        _ => None,
    };
    let grid = match &cli.x_grid {
        Some(spec) => parse_grid(spec)?,
        None => {
            let k_cut = resolved.k_cut();
            let spec = match table {
                Table::Momentum => format!("0:{k_cut}:201"),
                Table::Correlation => "0:20:401".to_string(),
                Table::Density => {
                    let reach = k_cut * t.unwrap_or(1.0);
                    format!("{}:{reach}:401", -reach)
                }
            };
            parse_grid(&spec)?
        }
    };
    if table == Table::Correlation && grid.iter().any(|&r| r < 0.0) {
        return Err(config_error("correlation distances must be non-negative"));
    }
    let mut config = RunConfig::new(Command::ContinuumProfile);
    config.set("protocol", kind);
    config.set("n0", n0);
    config.set("table", format!("{table:?}").to_lowercase());
    config.set("grid", &grid);
    config.set("tolerances", tol);
    if let Some(t) = t {
        config.set("t", t);
    }
    let columns = match table {
        Table::Momentum => vec!["k", "n_eq"],
        Table::Correlation => vec!["r", "c_eq"],
        Table::Density => vec!["x", "density"],
    };
    let mut art = Artifact::new(config, columns);
    echo_protocol(&mut art, &resolved);
    for &v in &grid {
        let value = match table {
            Table::Momentum => resolved.n_eq(v),
            Table::Correlation => resolved.correlation(v)?,
            Table::Density => resolved.density_profile(v, t.unwrap_or(1.0))?,
        };
        art.push(vec![v.into(), value.into()]);
    }
    Ok(art)
}

fn measures_sweep(cli: &Cli) -> Outcome {
    let protocol = cli
        .protocol
        .ok_or_else(|| config_error("measures-sweep needs --protocol"))?;
    let n0 = cli.n0.unwrap_or(0.5);
    let tol = tolerances(cli)?;
    let sigma = cli.sigma.unwrap_or(fermionflow::tmap::DSK_SIGMA);
    if cli.sigma.is_some() && protocol != ProtocolName::Dsk {
        return Err(config_error("--sigma only applies to --protocol dsk"));
    }
    let (name, default_grid): (&str, &str) = match protocol {
        ProtocolName::Thermal => ("beta", "0.01:30:50:log"),
        ProtocolName::Gaussian => ("alpha", "0.01:100:50:log"),
        ProtocolName::Dsk => ("gamma", "0.5:50:50:log"),
        ProtocolName::Flat => ("epsilon", "0.01:1:20:log"),
        ProtocolName::FermiSea => ("none", "0"),
    };
    let grid = match &cli.param_grid {
        Some(spec) if protocol == ProtocolName::FermiSea => {
            return Err(config_error(format!("the Fermi sea has no parameter to sweep (got --param-grid {spec})")))
        }
        Some(spec) => parse_grid(spec)?,
        None => parse_grid(default_grid)?,
    };
    let kinds = grid
        .iter()
        .map(|&p| match protocol {
            ProtocolName::Thermal => ProtocolKind::Thermal { beta: p },
            ProtocolName::Gaussian => ProtocolKind::Gaussian { alpha: p },
            ProtocolName::Dsk => ProtocolKind::DeformedSineKernel { gamma: p, sigma },
            ProtocolName::Flat => ProtocolKind::FlatLimit { epsilon: p },
            ProtocolName::FermiSea => ProtocolKind::FermiSea,
        })
        .collect::<Vec<_>>();
    let protocols = kinds
        .iter()
        .map(|&k| WignerProtocol::new(k, n0))
        .collect::<fermionflow::Result<Vec<_>>>()?;
    let mut config = RunConfig::new(Command::MeasuresSweep);
    config.set("protocol", name_of(protocol));
    config.set("n0", n0);
    config.set("parameter", name);
    config.set("grid", &grid);
    if protocol == ProtocolName::Dsk {
        config.set("sigma", sigma);
    }
    config.set("tolerances", tol);
    let mut art = Artifact::new(
        config,
        vec![
            "parameter",
            "mu_t",
            "mu_c",
            "mu_p",
            "chemical_potential",
            "normalization",
            "max_occupation",
            "physical",
        ],
    );
    use rayon::prelude::*;
    let rows = grid
        .par_iter()
        .zip(protocols.par_iter())
        .map(|(&p, w)| -> Result<Vec<Cell>, CliError> {
            let r = w.resolve_with(tol)?;
            let m = r.measures()?;
            Ok(vec![
                p.into(),
                m.mu_t.into(),
                m.mu_c.into(),
                m.mu_p.into(),
                r.chemical_potential().unwrap_or(f64::NAN).into(),
                r.normalization().unwrap_or(f64::NAN).into(),
                r.max_occupation().into(),
                Cell::from(if r.is_physical() { "true" } else { "false" }),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    for row in rows {
        art.push(row);
    }
    Ok(art)
}

fn name_of(p: ProtocolName) -> &'static str {
    match p {
        ProtocolName::Thermal => "thermal",
        ProtocolName::Gaussian => "gaussian",
        ProtocolName::Dsk => "dsk",
        ProtocolName::FermiSea => "fermi-sea",
        ProtocolName::Flat => "flat",
    }
}

fn transition_grid(cli: &Cli) -> Result<(f64, Vec<f64>), CliError> {
    let n0 = cli.n0.unwrap_or(DEFAULT_TRANSITION_N0);
    if !(n0 > 0.0 && n0.is_finite()) {
        return Err(config_error(format!("--n0 must be positive, got {n0}")));
    }
    let grid = match &cli.x_grid {
        Some(spec) => parse_grid(spec)?,
        None => standard_grid(),
    };
    if let Some(&x) = grid.iter().find(|&&x| !(x > 0.0)) {
        return Err(config_error(format!("μ_T values must be positive, got {x}")));
    }
    Ok((n0, grid))
}

fn transition_rows(art: &mut Artifact, d: &Dispersion, with_target: bool) -> Result<(), CliError> {
    let target_name = match d.target {
        TargetMeasure::Correlation => "correlation",
        TargetMeasure::Purity => "purity",
    };
    for s in &d.samples {
        let gaussian = match d.target {
            TargetMeasure::Correlation => gaussian_transition_map(s.x, d.n0)?,
            // the closed-form integral is −μ_P
            TargetMeasure::Purity => -purity_transition_map(s.x, d.n0)?,
        };
        let mut row = Vec::new();
        if with_target {
            row.push(Cell::from(target_name));
        }
        row.extend([
            s.x.into(),
            s.beta.into(),
            s.alpha.into(),
            s.gamma.into(),
            s.images[0].into(),
            s.images[1].into(),
            s.images[2].into(),
            s.centroid.into(),
            s.spread().into(),
            gaussian.into(),
            s.mu.into(),
            s.normalization.into(),
        ]);
        art.push(row);
    }
    Ok(())
}

const TRANSITION_COLUMNS: [&str; 12] = [
    "x",
    "beta",
    "alpha",
    "gamma",
    "y_thermal",
    "y_gaussian",
    "y_dsk",
    "y_mean",
    "spread",
    "y_gaussian_closed_form",
    "thermal_chemical_potential",
    "dsk_normalization",
];

fn transition_map(cli: &Cli) -> Outcome {
    let (n0, grid) = transition_grid(cli)?;
    let target = match cli.measure.unwrap_or(Measure::Correlation) {
        Measure::Correlation => TargetMeasure::Correlation,
        Measure::Purity => TargetMeasure::Purity,
    };
    let mut config = RunConfig::new(Command::TransitionMap);
    config.set("n0", n0);
    config.set("x_grid", &grid);
    config.set("measure", target);
    config.set("dsk_sigma", fermionflow::tmap::DSK_SIGMA);
    let d = dispersion(target, &grid, n0)?;
    let mut art = Artifact::new(config, TRANSITION_COLUMNS.to_vec());
    transition_rows(&mut art, &d, false)?;
    art.summarise("delta", d.delta);
    art.summarise("fermi_sea_bound", PI * n0 * n0 / 4.0);
    art.summarise("gaussian_map_zero", fermionflow::tmap::gaussian_map_zero(n0));
    Ok(art)
}

fn dispersion_command(cli: &Cli) -> Outcome {
    let (n0, grid) = transition_grid(cli)?;
    let mut config = RunConfig::new(Command::Dispersion);
    config.set("n0", n0);
    config.set("x_grid", &grid);
    config.set("dsk_sigma", fermionflow::tmap::DSK_SIGMA);
    let correlation = dispersion(TargetMeasure::Correlation, &grid, n0)?;
    let purity = dispersion(TargetMeasure::Purity, &grid, n0)?;
    let mut columns = vec!["target"];
    columns.extend(TRANSITION_COLUMNS);
    let mut art = Artifact::new(config, columns);
    transition_rows(&mut art, &correlation, true)?;
    transition_rows(&mut art, &purity, true)?;
    art.summarise("delta_correlation", correlation.delta);
    art.summarise("delta_purity", purity.delta);
    let max_spread = |d: &Dispersion| d.samples.iter().map(|s| s.spread()).fold(0.0, f64::max);
    art.summarise("max_spread_correlation", max_spread(&correlation));
    art.summarise("max_spread_purity", max_spread(&purity));
    Ok(art)
}

fn fcs(cli: &Cli) -> Outcome {
    let t = time(cli, 10.0)?;
    let ell_c = single_cell(cli, 1)?;
    let n0 = lattice_density_of(cli, ell_c);
    let a = cli.a.unwrap_or(1);
    let route = cli.route.unwrap_or(Route::Discrete);
    if route == Route::Continuous && cli.b.is_some() {
        return Err(config_error("the continuous route counts on [a, ∞); drop --b or use --route discrete"));
    }
    let lambdas = match &cli.lambda_grid {
        Some(spec) => parse_grid(spec)?,
        None => parse_grid(&format!("0:{}:65", 2.0 * PI))?,
    };
    let band = BandCoefficients::correlated(n0, ell_c)?;
    let mut config = RunConfig::new(Command::Fcs);
    config.set("t", t);
    config.set("ellc", ell_c);
    config.set("n0", n0);
    config.set("a", a);
    config.set("b", cli.b);
    config.set("route", format!("{route:?}").to_lowercase());
    config.set("lambda_grid", &lambdas);
    let mut art = Artifact::new(config, vec!["lambda", "re_fcs", "im_fcs", "re_log_fcs", "im_log_fcs"]);
    let (curve, mean, variance): (FcsCurve, f64, f64) = match route {
        Route::Discrete => {
            let f = DiscreteFcs::new(&band, t, a, cli.b)?;
            let (lo, hi) = f.window();
            art.resolved("window", format!("[{lo}, {hi}]"));
            art.resolved("matrix_dimension", f.determinant().dimension());
            (f.curve(&lambdas)?, f.mean(), f.variance())
        }
        Route::Continuous => {
            let f = ContinuousFcs::new(&band, t, a)?;
            art.resolved("nodes", f.nodes());
            (f.curve(&lambdas)?, f.mean(), f.variance())
        }
    };
    art.resolved("mean", format_float(mean));
    art.resolved("variance", format_float(variance));
    for p in curve.points {
        art.push(vec![
            p.lambda.into(),
            p.value.re.into(),
            p.value.im.into(),
            p.log.re.into(),
            p.log.im.into(),
        ]);
    }
    Ok(art)
}
