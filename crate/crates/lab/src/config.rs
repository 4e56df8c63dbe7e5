//! Experiment configuration: a flat `key = value` file whose keys are the
//! command-line flag names, overridden by flags given on the command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use fschro_core::{Backend, Boundary, FractionalOrder, Grid, PotentialKind, SolverConfig};
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};

/// Every recognized key, in canonical order.
pub const KEYS: [&str; 15] = [
    "backend",
    "boundary",
    "domain",
    "dt",
    "eps",
    "jobs",
    "m",
    "mollify-data",
    "nx",
    "out",
    "potential",
    "record-every",
    "s",
    "seed",
    "t-end",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// `None` lets each experiment pick its own default.
    pub potential: Option<PotentialKind>,
    /// Descending, within `(0, 1]`. `None` lets each experiment pick.
    pub epsilons: Option<Vec<f64>>,
    pub backend: Backend,
    pub boundary: Boundary,
    pub order: FractionalOrder,
    pub dt: f64,
    pub t_end: Option<f64>,
    pub nx: usize,
    pub domain: (f64, f64),
    pub output_dir: PathBuf,
    pub seed: u64,
    pub mollify_data: bool,
    /// Perturbation order of the uniqueness experiment.
    pub m: u32,
    pub record_every: usize,
    /// Worker threads; `None` uses all cores. Does not affect results.
    pub jobs: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            potential: None,
            epsilons: None,
            backend: Backend::CrankNicolson,
            boundary: Boundary::Periodic,
            order: FractionalOrder::LAPLACIAN,
            dt: SolverConfig::DEFAULT_DT,
            t_end: None,
            nx: 1024,
            domain: (0.0, 10.0),
            output_dir: PathBuf::from("out"),
            seed: 0,
            mollify_data: false,
            m: 2,
            record_every: 1,
            jobs: None,
        }
    }
}

impl ExperimentConfig {
    /// Defaults, then the file at `path` (if any), then `overrides`.
    pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(path) = path {
            let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
            for (key, value) in parse_pairs(&text)? {
                cfg.set(&key, &value)?;
            }
        }
        for (key, value) in overrides {
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "backend" => self.backend = parse_backend(value)?,
            "boundary" => {
                self.boundary = match value {
                    "periodic" => Boundary::Periodic,
                    "dirichlet" => Boundary::Dirichlet,
                    _ => return Err(bad(key, value)),
                }
            }
            "domain" => {
                let parts = parse_list(key, value)?;
                if parts.len() != 2 {
                    return Err(bad(key, value));
                }
                self.domain = (parts[0], parts[1]);
            }
            "dt" => self.dt = parse_num(key, value)?,
            "eps" => self.epsilons = Some(parse_list(key, value)?),
            "jobs" => self.jobs = Some(parse_num(key, value)?),
            "m" => self.m = parse_num(key, value)?,
            "mollify-data" => self.mollify_data = parse_bool(key, value)?,
            "nx" => self.nx = parse_num(key, value)?,
            "out" => self.output_dir = PathBuf::from(value),
            "potential" => self.potential = Some(parse_potential(value)?),
            "record-every" => self.record_every = parse_num(key, value)?,
            "s" => {
                self.order = FractionalOrder::new(parse_num(key, value)?).map_err(|e| LabError::config(e.to_string()))?
            }
            "seed" => self.seed = parse_num(key, value)?,
            "t-end" => self.t_end = Some(parse_num(key, value)?),
            _ => return Err(LabError::config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(eps) = &self.epsilons {
            validate_epsilons(eps)?;
        }
        self.grid()?;
        if self.m == 0 {
            return Err(LabError::config("m must be at least 1"));
        }
        if self.jobs == Some(0) {
            return Err(LabError::config("jobs must be at least 1"));
        }
        self.solver(self.t_end.unwrap_or(self.dt))
            .validate()
            .map_err(|e| LabError::config(e.to_string()))
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.domain.0, self.domain.1, self.nx).map_err(|e| LabError::config(e.to_string()))
    }

    pub fn potential_or(&self, default: PotentialKind) -> PotentialKind {
        self.potential.unwrap_or(default)
    }

    pub fn epsilons_or(&self, default: &[f64]) -> Vec<f64> {
        self.epsilons.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn t_end_or(&self, default: f64) -> f64 {
        self.t_end.unwrap_or(default)
    }

    /// Solver settings up to `t_end`, hitting the figure times on the way.
    pub fn solver(&self, t_end: f64) -> SolverConfig {
        let mut cfg = SolverConfig::new(self.backend, self.dt, t_end);
        cfg.order = self.order;
        cfg.boundary = self.boundary;
        cfg.record_every = self.record_every;
        cfg
    }

    /// `key = value` lines for every setting that affects results, sorted
    /// by key. Unset per-experiment defaults are written as `default`.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let value = match key {
                "backend" => backend_name(self.backend).to_string(),
                "boundary" => match self.boundary {
                    Boundary::Periodic => "periodic".to_string(),
                    Boundary::Dirichlet => "dirichlet".to_string(),
                },
                "domain" => format!("{:?},{:?}", self.domain.0, self.domain.1),
                "dt" => format!("{:?}", self.dt),
                "eps" => match &self.epsilons {
                    Some(eps) => eps.iter().map(|e| format!("{e:?}")).collect::<Vec<_>>().join(","),
                    None => "default".to_string(),
                },
                "m" => self.m.to_string(),
                "mollify-data" => self.mollify_data.to_string(),
                "nx" => self.nx.to_string(),
                "potential" => self.potential.map_or("default", potential_name).to_string(),
                "record-every" => self.record_every.to_string(),
                "s" => format!("{:?}", self.order.get()),
                "seed" => self.seed.to_string(),
                "t-end" => self.t_end.map_or("default".to_string(), |t| format!("{t:?}")),
                _ => continue, // out, jobs
            };
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }

    /// Hex SHA-256 of [`canonical`](Self::canonical).
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

/// Splits `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| LabError::config(format!("line {}: expected `key = value`", number + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(LabError::config(format!("line {}: unknown key `{key}`", number + 1)));
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

pub fn validate_epsilons(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(LabError::config("eps list is empty"));
    }
    if let Some(e) = eps.iter().find(|e| !(**e > 0.0 && **e <= 1.0)) {
        return Err(LabError::config(format!("epsilon {e} outside (0, 1]")));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(LabError::config("eps list must be strictly descending"));
    }
    Ok(())
}

pub fn parse_potential(value: &str) -> Result<PotentialKind> {
    Ok(match value {
        "zero" => PotentialKind::Zero,
        "one" => PotentialKind::ConstantOne,
        "harmonic" => PotentialKind::HarmonicShifted,
        "delta" => PotentialKind::Delta,
        "delta2" => PotentialKind::DeltaSquared,
        _ => return Err(bad("potential", value)),
    })
}

pub fn potential_name(kind: PotentialKind) -> &'static str {
    match kind {
        PotentialKind::Zero => "zero",
        PotentialKind::ConstantOne => "one",
        PotentialKind::HarmonicShifted => "harmonic",
        PotentialKind::Delta => "delta",
        PotentialKind::DeltaSquared => "delta2",
    }
}

fn parse_backend(value: &str) -> Result<Backend> {
    match value {
        "cn" => Ok(Backend::CrankNicolson),
        "spectral" => Ok(Backend::SpectralStrang),
        _ => Err(bad("backend", value)),
    }
}

pub fn backend_name(backend: Backend) -> &'static str {
    match backend {
        Backend::CrankNicolson => "cn",
        Backend::SpectralStrang => "spectral",
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| bad(key, value))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value.split(',').map(|v| parse_num(key, v.trim())).collect()
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(bad(key, value)),
    }
}

fn bad(key: &str, value: &str) -> LabError {
    LabError::config(format!("invalid value `{value}` for `{key}`"))
}
