// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! The five scenarios. Each one converts the absolute inputs to units of
//! ω, runs the simulation and returns a [`Table`] in the requested output
//! units.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use qdbell_core::decoherence::{integrate_master, perturbative_hierarchy, post_selected_output, DensityMatrix, MasterEquation};
use qdbell_core::dynamics::{exciton_population, max_sampling_step, psi_components, uniform_grid};
use qdbell_core::measurement::{bell_decompose, post_select, solve_pulse_length};
use qdbell_core::model::{dressed_block, energies};
use qdbell_core::{ModelParams, Space};

use crate::config::{EnergyMode, RunConfig, Scenario, Units};
use crate::error::CliError;

/// One CSV cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Int(usize),
    Real(f64),
}

impl Cell {
    pub fn as_f64(self) -> f64 {
        match self {
            Cell::Int(k) => k as f64,
            Cell::Real(x) => x,
        }
    }
}

/// Scenario output: column names, resolved settings and data rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    /// The settings actually used, with scenario defaults filled in.
    pub settings: RunConfig,
    pub rows: Vec<Vec<Cell>>,
    /// Non-fatal diagnostics for standard error.
    pub warnings: Vec<String>,
}

impl Table {
    /// Header line, `#` lines with the resolved settings, then data. Reals
    /// are written with 17 significant digits in scientific notation.
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        let shown = RunConfig { out: None, ..self.settings.clone() };
        for line in shown.to_string().lines() {
            let _ = writeln!(s, "# {line}");
        }
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(k) => k.to_string(),
                    Cell::Real(x) => format!("{x:.16e}"),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[k].as_f64()).collect())
    }
}

/// Conversion between the user's units and units of ω.
struct Scale {
    omega: f64,
    units: Units,
}

impl Scale {
    /// Internal time → output time.
    fn time_out(&self, t: f64) -> f64 {
        match self.units {
            Units::Absolute => t / self.omega,
            Units::Omega => t,
        }
    }

    /// User time (tmax) → internal time.
    fn time_in(&self, t: f64) -> f64 {
        match self.units {
            Units::Absolute => t * self.omega,
            Units::Omega => t,
        }
    }

    fn energy_out(&self, e: f64) -> f64 {
        match self.units {
            Units::Absolute => e * self.omega,
            Units::Omega => e,
        }
    }
}

/// Model parameters in units of ω.
pub fn model_params(cfg: &RunConfig) -> ModelParams {
    let s = 1.0 / cfg.omega;
    let mut p = ModelParams {
        e: cfg.e * s,
        w: cfg.w * s,
        omega: 1.0,
        a: cfg.a * s,
        gamma: cfg.gamma.unwrap_or(0.0) * s,
        alpha: cfg.alpha,
        n_max: cfg.nmax,
        energy_override: None,
    };
    match cfg.energies {
        EnergyMode::Resonant => {
            let e = p.w - p.e + 0.5;
            p = p.with_energies(e, e, e);
        }
        EnergyMode::Bandgap => {}
        EnergyMode::Explicit => {
            let [e0, e1, e2] = cfg.explicit.expect("resolved explicit energies");
            p = p.with_energies(e0 * s, e1 * s, e2 * s);
        }
    }
    p
}

/// Same dynamics with energies measured from E0. Observables depend only on
/// energy differences; this keeps phases small when the bare energies are
/// large compared with the splittings.
fn relative(p: &ModelParams) -> ModelParams {
    let (e0, e1, e2) = energies(p);
    p.with_energies(0.0, e1 - e0, e2 - e0)
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Run the configured scenario.
pub fn run(cfg: &RunConfig) -> Result<Table, CliError> {
    let p = model_params(cfg);
    p.validate()?;
    let scale = Scale { omega: cfg.omega, units: cfg.units };
    match cfg.scenario {
        Scenario::Dressed => dressed(cfg, &p, &scale),
        Scenario::Rabi => rabi(cfg, &relative(&p), &scale),
        Scenario::Bell => bell(cfg, &relative(&p), &scale),
        Scenario::Pulse => pulse(cfg, &p, &scale),
        Scenario::Decohere => decohere(cfg, &relative(&p), &scale),
    }
}

fn settled(cfg: &RunConfig, scale: &Scale, t_max: f64, steps: Option<usize>) -> RunConfig {
    RunConfig { tmax: Some(scale.time_out(t_max)), steps, ..cfg.clone() }
}

fn dressed(cfg: &RunConfig, p: &ModelParams, scale: &Scale) -> Result<Table, CliError> {
    let mut rows = Vec::with_capacity(cfg.nmax);
    for n in 0..cfg.nmax {
        let b = dressed_block(p, n)?;
        rows.push(vec![
            Cell::Int(n),
            Cell::Real(b.theta),
            Cell::Real(scale.energy_out(b.omega)),
            Cell::Real(scale.energy_out(b.e_d)),
            Cell::Real(scale.energy_out(b.e_plus)),
            Cell::Real(scale.energy_out(b.e_minus)),
        ]);
    }
    Ok(Table { columns: vec!["n", "theta", "Omega", "E_d", "E_plus", "E_minus"], settings: cfg.clone(), rows, warnings: vec![] })
}

/// Default rabi horizon: 1.5 × the revival time π·α/A.
fn rabi_horizon(p: &ModelParams) -> Result<f64, CliError> {
    if !(p.a > 0.0) {
        return Err(config_error("rabi needs a > 0 or an explicit tmax"));
    }
    Ok(1.5 * PI * p.alpha / p.a)
}

fn rabi(cfg: &RunConfig, p: &ModelParams, scale: &Scale) -> Result<Table, CliError> {
    if !(cfg.alpha > 0.0) {
        return Err(config_error("rabi needs alpha > 0"));
    }
    let t_max = match cfg.tmax {
        Some(t) => scale.time_in(t),
        None => rabi_horizon(p)?,
    };
    let steps = match cfg.steps {
        Some(s) => s,
        None if p.a > 0.0 => ((t_max / max_sampling_step(p)?).ceil() as usize).max(1),
        None => 1000,
    };
    let series = exciton_population(p, &uniform_grid(t_max, steps))?;
    let mut warnings = vec![];
    if series.tail_warning() {
        warnings.push(format!("Poisson mass beyond nmax = {} is {:.3e}; raise nmax", cfg.nmax, series.tail_mass));
    }
    let rows = series.times.iter().zip(&series.p1).map(|(&t, &x)| vec![Cell::Real(scale.time_out(t)), Cell::Real(x)]).collect();
    Ok(Table { columns: vec!["t", "P1"], settings: settled(cfg, scale, t_max, Some(steps)), rows, warnings })
}

fn beat(p: &ModelParams, n: usize) -> Result<f64, CliError> {
    let b = dressed_block(p, n)?;
    if !(b.omega > 0.0) {
        return Err(config_error("Rabi splitting vanishes; give tmax explicitly"));
    }
    Ok(TAU / b.omega)
}

fn bell(cfg: &RunConfig, p: &ModelParams, scale: &Scale) -> Result<Table, CliError> {
    let t_max = match cfg.tmax {
        Some(t) => scale.time_in(t),
        None => 3.0 * beat(p, cfg.n)?,
    };
    let steps = cfg.steps.unwrap_or(600);
    let mut rows = Vec::with_capacity(steps + 1);
    for t in uniform_grid(t_max, steps) {
        let b = bell_decompose(&post_select(&psi_components(p, cfg.n, t)?, cfg.n + 1));
        rows.push(vec![Cell::Real(scale.time_out(t)), Cell::Real(b.p_plus), Cell::Real(b.p_minus), Cell::Real(b.ratio)]);
    }
    Ok(Table {
        columns: vec!["t", "P_plus", "P_minus", "ratio"],
        settings: settled(cfg, scale, t_max, Some(steps)),
        rows,
        warnings: vec![],
    })
}

fn pulse(cfg: &RunConfig, p: &ModelParams, scale: &Scale) -> Result<Table, CliError> {
    let t_max = match cfg.tmax {
        Some(t) => scale.time_in(t),
        None => 3.0 * beat(p, cfg.n)?,
    };
    let s = solve_pulse_length(p, cfg.n, (0.0, t_max))?;
    Ok(Table {
        columns: vec!["T", "residual_P_plus", "paper_condition_residual"],
        settings: settled(cfg, scale, t_max, None),
        rows: vec![vec![Cell::Real(scale.time_out(s.t)), Cell::Real(s.residual_p_plus), Cell::Real(s.paper_condition_residual)]],
        warnings: vec![],
    })
}

fn decohere(cfg: &RunConfig, p: &ModelParams, scale: &Scale) -> Result<Table, CliError> {
    let gamma = match cfg.gamma {
        Some(_) => p.gamma,
        None => 1e-3 * p.a,
    };
    let t_max = match cfg.tmax {
        Some(t) => scale.time_in(t),
        None if gamma > 0.0 => 0.1 / gamma,
        None => 10.0 * beat(p, cfg.n)?,
    };
    let steps = cfg.steps.unwrap_or(200);
    let n = cfg.n;
    let space = Space::Sector(n);
    let eq = MasterEquation::for_space(&ModelParams { gamma, ..*p }, space)?;
    let rho0 = DensityMatrix::pure(&space.basis_vector(0, n + 1).expect("sector ket"));
    let times = uniform_grid(t_max, steps);
    let traj = integrate_master(&eq, &rho0, &times)?;
    let series = perturbative_hierarchy(&eq, &rho0, &times, 1)?;

    let mut rows = Vec::with_capacity(times.len());
    let mut warnings = vec![];
    for (k, (&t, rho)) in times.iter().zip(&traj.states).enumerate() {
        let exact = post_selected_output(rho, space, n + 1)?;
        let first = post_selected_output(&series.state(k, gamma, 1), space, n + 1)?;
        let trace_err = (rho.trace().re - 1.0).abs().max(rho.trace().im.abs());
        rows.push(vec![
            Cell::Real(scale.time_out(t)),
            Cell::Real(exact.p_plus),
            Cell::Real(exact.p_minus),
            Cell::Real(first.p_minus),
            Cell::Real(trace_err),
        ]);
        if warnings.is_empty() && DensityMatrix::new(rho.clone()).diagnose()?.positivity_violated() {
            warnings.push(format!("density matrix lost positivity at t = {:e}", scale.time_out(t)));
        }
    }
    let settings = RunConfig { gamma: Some(gamma * cfg.omega), ..settled(cfg, scale, t_max, Some(steps)) };
    Ok(Table { columns: vec!["t", "P_plus", "P_minus", "P_minus_perturbative", "trace_err"], settings, rows, warnings })
}
