//! Experiment configuration files.
//!
//! A config file names the experiment and optionally overrides any of the
//! command-line parameters; file values win over flags. Unknown keys are
//! rejected. Every run writes the fully resolved parameter set next to its
//! outputs as `resolved_config.toml`.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub experiment: String,
    #[serde(default)]
    pub ellipsoid_report: Option<EllipsoidParamsPatch>,
    #[serde(default)]
    pub flow_sim: Option<FlowParamsPatch>,
    #[serde(default)]
    pub inflate_check: Option<InflateParamsPatch>,
    #[serde(default)]
    pub spectrum: Option<SpectrumParamsPatch>,
    #[serde(default)]
    pub calabi: Option<CalabiParamsPatch>,
    #[serde(default)]
    pub verify_all: Option<VerifyParamsPatch>,
}

pub fn load(path: &Path, expected: &str) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let file: ConfigFile = toml::from_str(&text)
        .with_context(|| format!("invalid config {}", path.display()))?;
    if file.experiment != expected {
        bail!(
            "config declares experiment '{}' but the subcommand is '{expected}'",
            file.experiment
        );
    }
    Ok(file)
}

macro_rules! patch {
    ($target:expr, $patch:expr, $($field:ident),+ $(,)?) => {
        if let Some(p) = $patch {
            $(if let Some(v) = p.$field.clone() { $target.$field = v; })+
        }
    };
}

#[derive(Debug, Clone, Serialize)]
pub struct EllipsoidParams {
    pub a: f64,
    pub b: f64,
    pub disk: bool,
    pub p: u32,
    pub q: u32,
    pub tol: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidParamsPatch {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub disk: Option<bool>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub tol: Option<f64>,
}

impl EllipsoidParams {
    pub fn apply(&mut self, patch: &Option<EllipsoidParamsPatch>) {
        patch!(self, patch, a, b, disk, p, q, tol);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowParams {
    pub a: f64,
    pub b: f64,
    pub disk: bool,
    pub p: u32,
    pub q: u32,
    pub duration: f64,
    pub start: Vec<f64>,
    pub section_offset: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowParamsPatch {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub disk: Option<bool>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub duration: Option<f64>,
    pub start: Option<Vec<f64>>,
    pub section_offset: Option<f64>,
}

impl FlowParams {
    pub fn apply(&mut self, patch: &Option<FlowParamsPatch>) {
        patch!(self, patch, a, b, disk, p, q, duration, start, section_offset);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InflateParams {
    pub s0: f64,
    pub delta: f64,
    pub r0: f64,
    pub tube_period: f64,
    pub tube_rot_tau: f64,
    pub tube_p: i64,
    pub tube_q: i64,
    pub theta_b: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InflateParamsPatch {
    pub s0: Option<f64>,
    pub delta: Option<f64>,
    pub r0: Option<f64>,
    pub tube_period: Option<f64>,
    pub tube_rot_tau: Option<f64>,
    pub tube_p: Option<i64>,
    pub tube_q: Option<i64>,
    pub theta_b: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

impl InflateParams {
    pub fn apply(&mut self, patch: &Option<InflateParamsPatch>) {
        patch!(
            self, patch, s0, delta, r0, tube_period, tube_rot_tau, tube_p, tube_q, theta_b,
            samples, seed
        );
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumParams {
    pub generators: Vec<f64>,
    pub k_max: usize,
    pub weyl: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume: Option<f64>,
    pub dump_limit: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumParamsPatch {
    pub generators: Option<Vec<f64>>,
    pub k_max: Option<usize>,
    pub weyl: Option<bool>,
    pub volume: Option<Option<f64>>,
    pub dump_limit: Option<usize>,
}

impl SpectrumParams {
    pub fn apply(&mut self, patch: &Option<SpectrumParamsPatch>) {
        patch!(self, patch, generators, k_max, weyl, volume, dump_limit);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CalabiParams {
    pub model: String,
    pub budget: u32,
    pub check_theorem: bool,
    pub quad_tol: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalabiParamsPatch {
    pub model: Option<String>,
    pub budget: Option<u32>,
    pub check_theorem: Option<bool>,
    pub quad_tol: Option<f64>,
}

impl CalabiParams {
    pub fn apply(&mut self, patch: &Option<CalabiParamsPatch>) {
        patch!(self, patch, model, budget, check_theorem, quad_tol);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyParams {
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParamsPatch {
    pub seed: Option<u64>,
}

impl VerifyParams {
    pub fn apply(&mut self, patch: &Option<VerifyParamsPatch>) {
        patch!(self, patch, seed);
    }
}

/// Serialize the resolved parameters in the input-config shape, so a resolved
/// config can be replayed with `--config`.
pub fn resolved_toml<T: Serialize>(experiment: &str, table: &str, params: &T) -> Result<String> {
    let mut root = toml::value::Table::new();
    root.insert(
        "experiment".into(),
        toml::Value::String(experiment.to_string()),
    );
    root.insert(table.into(), toml::Value::try_from(params)?);
    Ok(toml::to_string_pretty(&toml::Value::Table(root))?)
}
