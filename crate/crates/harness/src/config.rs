//! Sweep configuration read from TOML or JSON.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use perfhom_core::regime::{validate_epsilon, PerforationParams};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::loads::Load;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKey {
    L2,
    H1,
    H1Corrected,
    UNorm,
}

impl ErrorKey {
    pub fn name(self) -> &'static str {
        match self {
            ErrorKey::L2 => "l2",
            ErrorKey::H1 => "h1",
            ErrorKey::H1Corrected => "h1_corrected",
            ErrorKey::UNorm => "u_norm",
        }
    }
}

impl FromStr for ErrorKey {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l2" => Ok(ErrorKey::L2),
            "h1" => Ok(ErrorKey::H1),
            "h1_corrected" => Ok(ErrorKey::H1Corrected),
            "u_norm" => Ok(ErrorKey::UNorm),
            other => Err(HarnessError::Config(format!("unknown error key {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tol: perfhom_femlab::solver::DEFAULT_TOL,
            max_iter: perfhom_femlab::solver::DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub plot_dir: Option<PathBuf>,
}

fn all_loads() -> Vec<Load> {
    Load::ALL.to_vec()
}

fn default_record() -> Vec<ErrorKey> {
    vec![ErrorKey::L2, ErrorKey::H1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub params: PerforationParams,
    /// Strictly decreasing.
    pub eps: Vec<f64>,
    #[serde(default = "all_loads")]
    pub loads: Vec<Load>,
    /// Mesh refinement level; chosen from the predicted rates when absent.
    #[serde(default)]
    pub refinement: Option<u32>,
    #[serde(default = "default_record")]
    pub record: Vec<ErrorKey>,
    #[serde(default)]
    pub output: OutputPaths,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub solver: SolverSettings,
}

impl SweepConfig {
    pub fn new(params: PerforationParams, eps: Vec<f64>) -> Self {
        Self {
            params,
            eps,
            loads: all_loads(),
            refinement: None,
            record: default_record(),
            output: OutputPaths::default(),
            seed: 0,
            solver: SolverSettings::default(),
        }
    }

    /// Parses JSON for `.json` files and TOML otherwise, then validates.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: Self = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text)?
        } else {
            toml::from_str(&text)?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.eps.len() < 3 {
            return Err(HarnessError::Config(format!("need at least 3 values of ε, got {}", self.eps.len())));
        }
        if self.eps.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(HarnessError::Config("ε values must be strictly decreasing".into()));
        }
        if self.loads.is_empty() {
            return Err(HarnessError::Config("at least one load is required".into()));
        }
        for &eps in &self.eps {
            let violations = validate_epsilon(&self.params, eps)?;
            if !violations.is_empty() {
                let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                return Err(HarnessError::at(eps, HarnessError::Config(list.join("; "))));
            }
        }
        if !(self.solver.tol > 0.0) || self.solver.max_iter == 0 {
            return Err(HarnessError::Config("solver tolerance and iteration cap must be positive".into()));
        }
        Ok(())
    }
}

/// `k` values from `a` down to `b`, evenly spaced in `ln ε`; `spec` is `a:b:k`.
pub fn parse_eps_range(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.strip_prefix("eps=").unwrap_or(spec);
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || HarnessError::Config(format!("expected eps=a:b:k, got {spec:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let k: usize = parts[2].parse().map_err(|_| bad())?;
    if !(a > 0.0 && b > 0.0) || k == 0 {
        return Err(bad());
    }
    if k == 1 {
        return Ok(vec![a]);
    }
    let (la, lb) = (a.ln(), b.ln());
    Ok((0..k).map(|i| (la + (lb - la) * i as f64 / (k - 1) as f64).exp()).collect())
}
