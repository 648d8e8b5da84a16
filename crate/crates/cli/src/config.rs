// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

//! Plain-text `key = value` configuration and its resolution into a
//! [`RunConfig`].

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::CliError;

/// The five study scenarios.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Scenario {
    Dressed,
    Rabi,
    Bell,
    Pulse,
    Decohere,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Dressed => "dressed",
            Scenario::Rabi => "rabi",
            Scenario::Bell => "bell",
            Scenario::Pulse => "pulse",
            Scenario::Decohere => "decohere",
        }
    }
}

impl FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dressed" => Ok(Scenario::Dressed),
            "rabi" => Ok(Scenario::Rabi),
            "bell" => Ok(Scenario::Bell),
            "pulse" => Ok(Scenario::Pulse),
            "decohere" => Ok(Scenario::Decohere),
            _ => Err(format!("unknown scenario '{s}'")),
        }
    }
}

/// How times in `tmax` and in the output are measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Units {
    /// Seconds and rad/s, as given.
    #[default]
    Absolute,
    /// Multiples of 1/ω and ω.
    Omega,
}

impl Units {
    pub fn name(self) -> &'static str {
        match self {
            Units::Absolute => "absolute",
            Units::Omega => "omega",
        }
    }
}

impl FromStr for Units {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "absolute" => Ok(Units::Absolute),
            "omega" => Ok(Units::Omega),
            _ => Err(format!("unknown units '{s}', expected absolute or omega")),
        }
    }
}

/// Where the bare energies (E0, E1, E2) come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum EnergyMode {
    /// E0 = E1 = E2 = W − e + ω/2.
    #[default]
    Resonant,
    /// E0 = W − e + ω/2, E1 = 2W − ω/2, E2 = W + e + ω/2.
    Bandgap,
    /// Taken from `e0`, `e1`, `e2`.
    Explicit,
}

impl EnergyMode {
    pub fn name(self) -> &'static str {
        match self {
            EnergyMode::Resonant => "resonant",
            EnergyMode::Bandgap => "bandgap",
            EnergyMode::Explicit => "explicit",
        }
    }
}

impl FromStr for EnergyMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "resonant" => Ok(EnergyMode::Resonant),
            "bandgap" => Ok(EnergyMode::Bandgap),
            "explicit" => Ok(EnergyMode::Explicit),
            _ => Err(format!("unknown energies mode '{s}'")),
        }
    }
}

/// A partial set of settings, as read from a config file or from flags.
/// Later layers win field by field.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub scenario: Option<Scenario>,
    pub alpha: Option<f64>,
    pub omega: Option<f64>,
    pub w: Option<f64>,
    pub a: Option<f64>,
    pub gamma: Option<f64>,
    pub e: Option<f64>,
    pub energies: Option<EnergyMode>,
    pub e0: Option<f64>,
    pub e1: Option<f64>,
    pub e2: Option<f64>,
    pub n: Option<usize>,
    pub nmax: Option<usize>,
    pub tmax: Option<f64>,
    pub steps: Option<usize>,
    pub out: Option<PathBuf>,
    pub units: Option<Units>,
}

/// Recognized keys, in serialization order.
pub const KEYS: [&str; 17] = [
    "scenario", "alpha", "omega", "w", "a", "gamma", "e", "energies", "e0", "e1", "e2", "n", "nmax", "tmax", "steps", "out",
    "units",
];

fn parse_real(key: &str, v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("{key}: '{v}' is not a number"))?;
    if !x.is_finite() {
        return Err(format!("{key}: '{v}' is not finite"));
    }
    Ok(x)
}

fn parse_count(key: &str, v: &str) -> Result<usize, String> {
    v.parse().map_err(|_| format!("{key}: '{v}' is not a nonnegative integer"))
}

impl Overrides {
    /// Parse config text: one `key = value` per line, `#` starts a comment,
    /// blank lines ignored. Unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut o = Overrides::default();
        let mut seen = [false; KEYS.len()];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CliError::Config(format!("line {}: {msg}", lineno + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected 'key = value'".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let slot = KEYS.iter().position(|k| *k == key).ok_or_else(|| err(format!("unknown key '{key}'")))?;
            if std::mem::replace(&mut seen[slot], true) {
                return Err(err(format!("duplicate key '{key}'")));
            }
            if value.is_empty() {
                return Err(err(format!("{key}: missing value")));
            }
            o.set(key, value).map_err(err)?;
        }
        Ok(o)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "scenario" => self.scenario = Some(v.parse()?),
            "alpha" => self.alpha = Some(parse_real(key, v)?),
            "omega" => self.omega = Some(parse_real(key, v)?),
            "w" => self.w = Some(parse_real(key, v)?),
            "a" => self.a = Some(parse_real(key, v)?),
            "gamma" => self.gamma = Some(parse_real(key, v)?),
            "e" => self.e = Some(parse_real(key, v)?),
            "energies" => self.energies = Some(v.parse()?),
            "e0" => self.e0 = Some(parse_real(key, v)?),
            "e1" => self.e1 = Some(parse_real(key, v)?),
            "e2" => self.e2 = Some(parse_real(key, v)?),
            "n" => self.n = Some(parse_count(key, v)?),
            "nmax" => self.nmax = Some(parse_count(key, v)?),
            "tmax" => self.tmax = Some(parse_real(key, v)?),
            "steps" => self.steps = Some(parse_count(key, v)?),
            "out" => self.out = Some(PathBuf::from(v)),
            "units" => self.units = Some(v.parse()?),
            _ => unreachable!("key list checked by caller"),
        }
        Ok(())
    }

    /// Canonical `key = value` text; parsing it gives back `self` when every
    /// string value is free of `#`, line breaks and surrounding whitespace.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(s, "{k} = {v}");
            }
        };
        let real = |x: Option<f64>| x.map(|x| format!("{x:e}"));
        put("scenario", self.scenario.map(|x| x.name().to_string()));
        put("alpha", real(self.alpha));
        put("omega", real(self.omega));
        put("w", real(self.w));
        put("a", real(self.a));
        put("gamma", real(self.gamma));
        put("e", real(self.e));
        put("energies", self.energies.map(|x| x.name().to_string()));
        put("e0", real(self.e0));
        put("e1", real(self.e1));
        put("e2", real(self.e2));
        put("n", self.n.map(|x| x.to_string()));
        put("nmax", self.nmax.map(|x| x.to_string()));
        put("tmax", real(self.tmax));
        put("steps", self.steps.map(|x| x.to_string()));
        put("out", self.out.as_ref().map(|p| p.display().to_string()));
        put("units", self.units.map(|x| x.name().to_string()));
        s
    }

    /// Field-wise overlay: values present in `top` win.
    pub fn merged(self, top: Overrides) -> Overrides {
        Overrides {
            scenario: top.scenario.or(self.scenario),
            alpha: top.alpha.or(self.alpha),
            omega: top.omega.or(self.omega),
            w: top.w.or(self.w),
            a: top.a.or(self.a),
            gamma: top.gamma.or(self.gamma),
            e: top.e.or(self.e),
            energies: top.energies.or(self.energies),
            e0: top.e0.or(self.e0),
            e1: top.e1.or(self.e1),
            e2: top.e2.or(self.e2),
            n: top.n.or(self.n),
            nmax: top.nmax.or(self.nmax),
            tmax: top.tmax.or(self.tmax),
            steps: top.steps.or(self.steps),
            out: top.out.or(self.out),
            units: top.units.or(self.units),
        }
    }
}

/// Built-in physical defaults in rad/s: α = 5, ω = 10¹⁵, W = 0.1ω, A = 0.4W.
pub const DEFAULT_ALPHA: f64 = 5.0;
pub const DEFAULT_OMEGA: f64 = 1e15;
pub const DEFAULT_W: f64 = 1e14;
pub const DEFAULT_A: f64 = 4e13;
pub const DEFAULT_SECTOR: usize = 10;

/// Fully resolved run settings. Physical inputs are absolute angular
/// frequencies; `tmax` is in the time unit selected by `units`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub alpha: f64,
    pub omega: f64,
    pub w: f64,
    pub a: f64,
    /// `None` lets the scenario choose (decohere uses 10⁻³·A).
    pub gamma: Option<f64>,
    pub e: f64,
    pub energies: EnergyMode,
    pub explicit: Option<[f64; 3]>,
    pub n: usize,
    pub nmax: usize,
    pub tmax: Option<f64>,
    pub steps: Option<usize>,
    pub out: Option<PathBuf>,
    pub units: Units,
}

impl RunConfig {
    /// Fill unset fields from the defaults and check consistency.
    pub fn resolve(o: Overrides) -> Result<Self, CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        let Some(scenario) = o.scenario else {
            return bad("no scenario given".into());
        };
        let alpha = o.alpha.unwrap_or(DEFAULT_ALPHA);
        let omega = o.omega.unwrap_or(DEFAULT_OMEGA);
        if !(omega > 0.0) {
            return bad(format!("omega must be > 0, got {omega}"));
        }
        for (k, v) in [("alpha", Some(alpha)), ("a", o.a), ("gamma", o.gamma), ("tmax", o.tmax)] {
            if v.is_some_and(|v| v < 0.0) {
                return bad(format!("{k} must be >= 0"));
            }
        }
        let given = [o.e0, o.e1, o.e2];
        let any_given = given.iter().any(Option::is_some);
        let energies = o.energies.unwrap_or(if any_given { EnergyMode::Explicit } else { EnergyMode::Resonant });
        let explicit = match energies {
            EnergyMode::Explicit => match given {
                [Some(a), Some(b), Some(c)] => Some([a, b, c]),
                _ => return bad("energies = explicit needs e0, e1 and e2".into()),
            },
            _ if any_given => return bad(format!("e0/e1/e2 conflict with energies = {}", energies.name())),
            _ => None,
        };
        let nmax = o.nmax.unwrap_or_else(|| qdbell_core::model::coherent_truncation(alpha));
        if nmax < 1 {
            return bad("nmax must be >= 1".into());
        }
        if o.steps == Some(0) {
            return bad("steps must be >= 1".into());
        }
        Ok(RunConfig {
            scenario,
            alpha,
            omega,
            w: o.w.unwrap_or(DEFAULT_W),
            a: o.a.unwrap_or(DEFAULT_A),
            gamma: o.gamma,
            e: o.e.unwrap_or(0.0),
            energies,
            explicit,
            n: o.n.unwrap_or(DEFAULT_SECTOR),
            nmax,
            tmax: o.tmax,
            steps: o.steps,
            out: o.out,
            units: o.units.unwrap_or_default(),
        })
    }

    /// Back to the overlay form; resolving the result gives `self`.
    pub fn to_overrides(&self) -> Overrides {
        let [e0, e1, e2] = match self.explicit {
            Some([a, b, c]) => [Some(a), Some(b), Some(c)],
            None => [None; 3],
        };
        Overrides {
            scenario: Some(self.scenario),
            alpha: Some(self.alpha),
            omega: Some(self.omega),
            w: Some(self.w),
            a: Some(self.a),
            gamma: self.gamma,
            e: Some(self.e),
            energies: Some(self.energies),
            e0,
            e1,
            e2,
            n: Some(self.n),
            nmax: Some(self.nmax),
            tmax: self.tmax,
            steps: self.steps,
            out: self.out.clone(),
            units: Some(self.units),
        }
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_overrides().serialize())
    }
}
