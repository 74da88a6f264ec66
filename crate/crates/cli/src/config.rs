//! Experiment configs. Every struct rejects unknown fields and every default
//! is written back into the report echo.

use std::path::Path;

use bmoalab::semigroup::{ClosedFlow, ConditionSpec, Semigroup, DEFAULT_TOL};
use bmoalab::spaces::{CarlesonSpec, SpaceParam, SupSearchSpec};
use bmoalab::{AnalyticFn, Complex64, GridSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{self, ParseError};

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config command {found:?} does not match {expected:?}")]
    CommandMismatch { expected: String, found: String },
    #[error(transparent)]
    Expr(#[from] ParseError),
    #[error("invalid parameter: {0}")]
    Param(#[from] bmoalab::Error),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Experiment {
    Norm(NormConfig),
    Vmoa(VmoaConfig),
    SemigroupFlow(FlowConfig),
    Continuity(ContinuityConfig),
    Condition(ConditionConfig),
    Volterra(VolterraConfig),
    Gamma(GammaConfig),
    Suite(SuiteConfig),
}

impl Experiment {
    pub fn command(&self) -> &'static str {
        match self {
            Experiment::Norm(_) => "norm",
            Experiment::Vmoa(_) => "vmoa",
            Experiment::SemigroupFlow(_) => "semigroup-flow",
            Experiment::Continuity(_) => "continuity",
            Experiment::Condition(_) => "condition",
            Experiment::Volterra(_) => "volterra",
            Experiment::Gamma(_) => "gamma",
            Experiment::Suite(_) => "suite",
        }
    }

    /// Parses every expression and checks every parameter range.
    pub fn validate(&self) -> Result<(), SchemaError> {
        match self {
            Experiment::Norm(c) => {
                c.function()?;
                SpaceParam::new(c.p)?;
                c.grid.validate()?;
            }
            Experiment::Vmoa(c) => {
                c.function()?;
                SpaceParam::new(c.p)?;
                c.grid.validate()?;
            }
            Experiment::SemigroupFlow(c) => {
                c.semigroup.build()?;
                if !(c.t >= 0.0 && c.t.is_finite() && c.tol > 0.0) {
                    return Err(bmoalab::Error::Parameter("t must be finite and >= 0, tol > 0".into()).into());
                }
            }
            Experiment::Continuity(c) => {
                expr::parse(&c.function)?;
                c.semigroup.build()?;
                SpaceParam::new(c.p)?;
                c.grid.validate()?;
            }
            Experiment::Condition(c) => {
                c.semigroup.build()?;
                SpaceParam::new(c.p)?;
                c.boxes.grid.validate()?;
            }
            Experiment::Volterra(c) => {
                expr::parse(&c.symbol)?;
                for f in &c.functions {
                    expr::parse(f)?;
                }
                SpaceParam::new(c.p_to)?;
                SpaceParam::new(c.p_from.unwrap_or(c.p_to))?;
                c.boxes.grid.validate()?;
                c.grid.validate()?;
            }
            Experiment::Gamma(c) => {
                c.semigroup.build()?;
                SpaceParam::new(c.p)?;
                c.boxes.grid.validate()?;
            }
            Experiment::Suite(c) => {
                for sg in &c.extra_semigroups {
                    sg.build()?;
                }
            }
        }
        Ok(())
    }
}

/// Reads a config for `command`; the file may omit `"command"`.
pub fn load(command: &str, path: &Path) -> Result<Experiment, SchemaError> {
    let text = std::fs::read_to_string(path)?;
    parse(command, &text)
}

pub fn parse(command: &str, text: &str) -> Result<Experiment, SchemaError> {
    let mut value: serde_json::Value = serde_json::from_str(text)?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| <serde_json::Error as serde::de::Error>::custom("config must be a JSON object"))?;
    match obj.get("command") {
        Some(serde_json::Value::String(found)) if found != command => {
            return Err(SchemaError::CommandMismatch { expected: command.into(), found: found.clone() })
        }
        Some(serde_json::Value::String(_)) => {}
        Some(_) => return Err(<serde_json::Error as serde::de::Error>::custom("\"command\" must be a string").into()),
        None => {
            obj.insert("command".into(), command.into());
        }
    }
    let exp: Experiment = serde_json::from_value(value)?;
    exp.validate()?;
    Ok(exp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    #[default]
    Bmoa,
    BmoaSeminorm,
    Dirichlet,
    Bloch,
    Garsia,
    Growth,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    pub function: String,
    pub p: f64,
    #[serde(default)]
    pub kind: NormKind,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub search: SupSearchSpec,
    #[serde(default)]
    pub rng_seed: u64,
}

impl NormConfig {
    pub fn function(&self) -> Result<AnalyticFn, ParseError> {
        expr::parse(&self.function)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VmoaConfig {
    pub function: String,
    pub p: f64,
    /// Ray angles; defaults to 0 plus the directions of the cluster points.
    #[serde(default)]
    pub angles: Option<Vec<f64>>,
    #[serde(default = "default_k_max")]
    pub k_max: u32,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub rng_seed: u64,
}

impl VmoaConfig {
    pub fn function(&self) -> Result<AnalyticFn, ParseError> {
        expr::parse(&self.function)
    }
}

fn default_k_max() -> u32 {
    14
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupSpec {
    /// Generator expression; may be omitted when `closed_form` is given.
    #[serde(default)]
    pub generator: Option<String>,
    #[serde(default)]
    pub dw_point: Option<Complex64>,
    #[serde(default)]
    pub closed_form: Option<ClosedFlow>,
    #[serde(default)]
    pub label: Option<String>,
}

impl SemigroupSpec {
    pub fn build(&self) -> Result<Semigroup, SchemaError> {
        match (&self.generator, self.closed_form) {
            (None, Some(flow)) => {
                let mut sg = Semigroup::closed(flow);
                if let Some(l) = &self.label {
                    sg.label = l.clone();
                }
                Ok(sg)
            }
            (Some(g), flow) => {
                let g = expr::parse(g)?;
                let b = match (self.dw_point, flow) {
                    (Some(b), _) => b,
                    (None, Some(f)) => f.dw_point(),
                    (None, None) => {
                        return Err(bmoalab::Error::Parameter("semigroup needs \"dw_point\"".into()).into());
                    }
                };
                let label = self.label.clone().unwrap_or_else(|| g.describe());
                Ok(Semigroup::new(g, b, flow, label)?)
            }
            (None, None) => {
                Err(bmoalab::Error::Parameter("semigroup needs \"generator\" or \"closed_form\"".into()).into())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    pub semigroup: SemigroupSpec,
    /// Starting points; when absent, `samples` Halton points of radius 0.95.
    #[serde(default)]
    pub points: Option<Vec<Complex64>>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_t")]
    pub t: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub rng_seed: u64,
}

fn default_samples() -> usize {
    25
}

fn default_t() -> f64 {
    1.0
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuityConfig {
    pub function: String,
    pub semigroup: SemigroupSpec,
    pub p: f64,
    #[serde(default = "one")]
    pub k_min: u32,
    #[serde(default = "ten")]
    pub k_max: u32,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub search: SupSearchSpec,
    #[serde(default)]
    pub rng_seed: u64,
}

fn one() -> u32 {
    1
}

fn ten() -> u32 {
    10
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    #[serde(rename = "pLog", alias = "plog")]
    PLog,
    Cond2,
    Cond3,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionConfig {
    pub semigroup: SemigroupSpec,
    pub p: f64,
    #[serde(default = "all_conditions")]
    pub conditions: Vec<ConditionKind>,
    #[serde(default = "half")]
    pub cond2_a: f64,
    #[serde(default = "default_k_max")]
    pub cond2_k_max: u32,
    #[serde(default)]
    pub boxes: ConditionSpec,
    #[serde(default)]
    pub rng_seed: u64,
}

fn all_conditions() -> Vec<ConditionKind> {
    vec![ConditionKind::PLog, ConditionKind::Cond3, ConditionKind::Cond2]
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolterraConfig {
    pub symbol: String,
    /// Source exponent for the lower bound; defaults to `p_to`.
    #[serde(default)]
    pub p_from: Option<f64>,
    pub p_to: f64,
    #[serde(default)]
    pub boxes: CarlesonSpec,
    /// Functions whose images are checked for membership in VMOA.
    #[serde(default)]
    pub functions: Vec<String>,
    #[serde(default)]
    pub image_angles: Option<Vec<f64>>,
    #[serde(default = "default_k_max")]
    pub image_k_max: u32,
    /// Points `a` of the lower-bound schedule.
    #[serde(default)]
    pub schedule: Vec<Complex64>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub search: SupSearchSpec,
    #[serde(default)]
    pub rng_seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaConfig {
    pub semigroup: SemigroupSpec,
    #[serde(default = "default_gamma_p")]
    pub p: f64,
    #[serde(default)]
    pub boxes: CarlesonSpec,
    #[serde(default)]
    pub points: Option<Vec<Complex64>>,
    #[serde(default = "default_gamma_samples")]
    pub samples: usize,
    #[serde(default = "default_path_nodes")]
    pub path_nodes: usize,
    #[serde(default)]
    pub rng_seed: u64,
}

fn default_gamma_p() -> f64 {
    1.5
}

fn default_gamma_samples() -> usize {
    16
}

fn default_path_nodes() -> usize {
    bmoalab::volterra::PATH_NODES
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    PaperExamples,
    Conditions,
    VolterraEquivalences,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: SuiteId,
    /// Further semigroups swept by the `conditions` suite.
    #[serde(default)]
    pub extra_semigroups: Vec<SemigroupSpec>,
}
