//! Run configuration: a JSON document overlaid with command-line flags.

use std::path::{Path, PathBuf};

use qbm_ring::bath::BathSpec;
use qbm_ring::params::{CircuitSpec, RingSpec};
use qbm_ring::ring::RingState;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One or several bath exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SValues {
    One(f64),
    Many(Vec<f64>),
}

impl SValues {
    fn to_vec(&self) -> Vec<f64> {
        match self {
            Self::One(s) => vec![*s],
            Self::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub s: Option<SValues>,
    pub g: Option<f64>,
    pub omega_cutoff: Option<f64>,
    pub temperature: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    pub radius: f64,
    pub v_f: f64,
    pub c0: f64,
    pub n0: f64,
    pub n1: f64,
    pub k_f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitConfig {
    pub r_coil: f64,
    pub rho_modes: f64,
    pub inductance: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_max_periods: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// The JSON config file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub bath: BathConfig,
    pub mu: Option<f64>,
    pub ring: Option<RingConfig>,
    pub circuit: Option<CircuitConfig>,
    pub state: Option<String>,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Values given on the command line; each one replaces the config field.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub s: Option<Vec<f64>>,
    pub g: Option<f64>,
    pub mu: Option<f64>,
    pub omega_cutoff: Option<f64>,
    pub temperature: Option<f64>,
    pub state: Option<String>,
    pub t_max_periods: Option<f64>,
    pub points: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    /// Applies command-line overrides. A `--mu` flag replaces a configured
    /// ring, since the two are alternative sources of `μ`.
    pub fn apply(mut self, o: &Overrides) -> Self {
        if let Some(s) = &o.s {
            self.bath.s = Some(SValues::Many(s.clone()));
        }
        self.bath.g = o.g.or(self.bath.g);
        self.bath.omega_cutoff = o.omega_cutoff.or(self.bath.omega_cutoff);
        self.bath.temperature = o.temperature.or(self.bath.temperature);
        if o.mu.is_some() {
            self.mu = o.mu;
            self.ring = None;
        }
        self.state = o.state.clone().or(self.state);
        self.time.t_max_periods = o.t_max_periods.or(self.time.t_max_periods);
        self.time.points = o.points.or(self.time.points);
        self.output.path = o.out.clone().or(self.output.path);
        self.output.format = o.format.or(self.output.format);
        self
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let ring = match self.ring {
            Some(r) => Some(
                RingSpec::new(r.radius, r.v_f, r.c0, r.n0, r.n1, r.k_f).map_err(|e| CliError::Usage(format!("ring: {e}")))?,
            ),
            None => None,
        };
        let mu = match (self.mu, &ring) {
            (Some(_), Some(_)) => return Err(CliError::Usage("give either mu or ring, not both".into())),
            (Some(mu), None) => mu,
            (None, Some(r)) => qbm_ring::params::derived_scales(r).mu,
            (None, None) => DEFAULT_MU,
        };
        if !mu.is_finite() || mu <= 0.0 {
            return Err(CliError::Usage(format!("mu: must be positive, got {mu}")));
        }
        let circuit = match self.circuit {
            Some(c) => Some(
                CircuitSpec::new(c.r_coil, c.rho_modes, c.inductance)
                    .map_err(|e| CliError::Usage(format!("circuit: {e}")))?,
            ),
            None => None,
        };
        let s_values = self.bath.s.as_ref().map(SValues::to_vec).unwrap_or_else(|| vec![DEFAULT_S]);
        if s_values.is_empty() {
            return Err(CliError::Usage("bath.s: at least one exponent is required".into()));
        }
        let g = self.bath.g.unwrap_or(1.0);
        let omega_cutoff = self.bath.omega_cutoff.unwrap_or(1.0 / mu);
        let temperature = self.bath.temperature.unwrap_or(0.0);
        let baths = s_values
            .iter()
            .map(|&s| BathSpec::new(s, g, omega_cutoff, temperature).map_err(|e| CliError::Usage(format!("bath: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let state_text = self.state.clone().unwrap_or_else(|| "ground".into());
        let state = parse_state(&state_text)?;
        let t_max_periods = self.time.t_max_periods.unwrap_or(10.0);
        if !t_max_periods.is_finite() || t_max_periods < 0.0 {
            return Err(CliError::Usage(format!("time.t_max_periods: must be non-negative, got {t_max_periods}")));
        }
        let points = self.time.points.unwrap_or(201);
        if points < 2 {
            return Err(CliError::Usage(format!("time.points: need at least 2, got {points}")));
        }
        Ok(Resolved {
            baths,
            mu,
            ring,
            circuit,
            state,
            state_text,
            t_max_periods,
            points,
            out: self.output.path.clone(),
            format: self.output.format.unwrap_or_default(),
        })
    }
}

pub const DEFAULT_MU: f64 = 1e-8;
pub const DEFAULT_S: f64 = 1.2;

/// Parses `ground`, `momentum:L` or `gaussian:THETA0,SIGMA`.
pub fn parse_state(text: &str) -> Result<RingState<f64>, CliError> {
    let bad = || CliError::Usage(format!("state: expected ground, momentum:L or gaussian:THETA0,SIGMA, got {text:?}"));
    let (kind, arg) = match text.split_once(':') {
        Some((k, a)) => (k.trim(), Some(a.trim())),
        None => (text.trim(), None),
    };
    match (kind, arg) {
        ("ground", None) => Ok(RingState::Ground),
        ("momentum", Some(a)) => a.parse::<i64>().map(RingState::Momentum).map_err(|_| bad()),
        ("gaussian", Some(a)) => {
            let (t, s) = a.split_once(',').ok_or_else(bad)?;
            let theta0: f64 = t.trim().parse().map_err(|_| bad())?;
            let sigma: f64 = s.trim().parse().map_err(|_| bad())?;
            RingState::wrapped_gaussian(theta0, sigma).map_err(|e| CliError::Usage(format!("state: {e}")))
        }
        _ => Err(bad()),
    }
}

/// Fully resolved and validated run parameters.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub baths: Vec<BathSpec<f64>>,
    pub mu: f64,
    pub ring: Option<RingSpec<f64>>,
    pub circuit: Option<CircuitSpec<f64>>,
    pub state: RingState<f64>,
    pub state_text: String,
    pub t_max_periods: f64,
    pub points: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Resolved {
    pub fn period(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.mu
    }

    /// Uniform grid on `[0, t_max_periods · P]`.
    pub fn times(&self) -> Vec<f64> {
        let t_max = self.t_max_periods * self.period();
        let last = (self.points - 1) as f64;
        (0..self.points).map(|k| if k + 1 == self.points { t_max } else { t_max * k as f64 / last }).collect()
    }

    /// Resolved configuration echoed into output headers.
    pub fn describe(&self) -> serde_json::Value {
        let first = self.baths[0];
        serde_json::json!({
            "bath": {
                "s": self.baths.iter().map(|b| b.s).collect::<Vec<_>>(),
                "g": first.g,
                "omega_cutoff": first.omega_cutoff,
                "temperature": first.temperature,
            },
            "mu": self.mu,
            "ring": self.ring.map(|r| serde_json::json!({
                "radius": r.radius, "v_f": r.v_f, "c0": r.c0, "n0": r.n0, "n1": r.n1, "k_f": r.k_f,
            })),
            "circuit": self.circuit.map(|c| serde_json::json!({
                "r_coil": c.r_coil, "rho_modes": c.rho_modes, "inductance": c.inductance,
            })),
            "state": self.state_text,
            "time": { "t_max_periods": self.t_max_periods, "points": self.points },
            "output": {
                "path": self.out.as_ref().map(|p| p.display().to_string()),
                "format": match self.format { Format::Csv => "csv", Format::Json => "json" },
            },
        })
    }
}
