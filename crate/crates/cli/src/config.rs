//! Experiment configuration: one JSON document, optionally layered on a named
//! preset and patched with `key=value` overrides.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::path::{Path, PathBuf};

use adiaprep_core::analyze::{relation, OperatorRelation};
use adiaprep_core::linalg::MAX_DIM;
use adiaprep_core::model::{pauli, preset_model};
use adiaprep_core::{
    AdiabaticSchedule, ComplexMatrix, HermitianOperator, HoldPropagation, Integrator, MeanEstimator, ModelSpec,
    Preset, SplitOrder, C64,
};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::{Map, Value};

use crate::error::{AppError, FieldIssue, Result};

/// Built-in experiment presets, in listing order.
pub const PRESETS: [&str; 3] = ["fig1a", "fig1b", "fig2"];

/// Environment variable that replaces the configured seed.
pub const SEED_ENV: &str = "ADIAPREP_SEED";

/// Upper bound on sweep steps, to catch typos such as `step_width = 1e-9`.
const MAX_STEPS: f64 = 1e8;
const MAX_HOLD_POINTS: f64 = 1e7;
const MIN_SAMPLES_PER_PERIOD: f64 = adiaprep_core::analyze::MIN_SAMPLES_PER_PERIOD as f64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default = "default_model")]
    pub model: ModelConfig,
    #[serde(default = "one", deserialize_with = "real")]
    pub coupling: f64,
    #[serde(default = "default_total_time", deserialize_with = "real")]
    pub total_time: f64,
    #[serde(default = "default_step_width", deserialize_with = "real")]
    pub step_width: f64,
    #[serde(default)]
    pub integrator: IntegratorName,
    #[serde(default)]
    pub split_order: SplitName,
    #[serde(default = "default_hold", deserialize_with = "real")]
    pub hold_duration: f64,
    /// Defaults to `step_width`.
    #[serde(default, deserialize_with = "opt_real", skip_serializing_if = "Option::is_none")]
    pub sample_dt: Option<f64>,
    #[serde(default)]
    pub hold_propagation: HoldName,
    #[serde(default)]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    /// Empty selects every observable the model defines.
    #[serde(default)]
    pub observables: Vec<String>,
    #[serde(default)]
    pub mean_estimator: EstimatorName,
    /// The reference state for the Trotter deviation uses `step_width / n`;
    /// zero skips it.
    #[serde(default = "default_refinement")]
    pub reference_refinement: u32,
    #[serde(default)]
    pub outputs: OutputConfig,
}

/// A preset model name or explicit matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelConfig {
    Preset(String),
    Inline(InlineModel),
}

/// Matrices are rows of entries; an entry is a real number or `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineModel {
    pub initial: Vec<Vec<Entry>>,
    pub target: Vec<Vec<Entry>>,
    #[serde(default)]
    pub observables: BTreeMap<String, Vec<Vec<Entry>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn value(self) -> C64 {
        match self {
            Entry::Real(x) => C64::new(x, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegratorName {
    #[default]
    Trotter2,
    ExactMidpoint,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitName {
    #[default]
    AOutside,
    BOutside,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HoldName {
    #[default]
    Exact,
    Trotter2,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimatorName {
    #[default]
    #[serde(rename = "minmax")]
    MinMax,
    #[serde(rename = "arithmetic")]
    Arithmetic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), csv: true, json: true, svg: true }
    }
}

fn default_name() -> String {
    "custom".into()
}
fn default_model() -> ModelConfig {
    ModelConfig::Preset("model1".into())
}
fn one() -> f64 {
    1.0
}
fn default_total_time() -> f64 {
    36.0
}
fn default_step_width() -> f64 {
    0.125
}
fn default_hold() -> f64 {
    100.0
}
fn default_refinement() -> u32 {
    64
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_value(Value::Object(Map::new())).expect("every field has a default")
    }
}

impl ExperimentConfig {
    /// Looks up a built-in preset.
    pub fn preset(name: &str) -> Result<Self> {
        let base = Self::default();
        let cfg = match name {
            "fig1a" => Self {
                name: "fig1a".into(),
                hold_duration: 355.0,
                shots: 1_000_000,
                seed: 1,
                observables: vec!["Z".into(), "-X".into()],
                ..base
            },
            "fig1b" => Self {
                name: "fig1b".into(),
                hold_duration: 355.0,
                shots: 1_000_000,
                seed: 2,
                observables: vec!["-X".into(), "Z".into()],
                ..base
            },
            "fig2" => Self {
                name: "fig2".into(),
                model: ModelConfig::Preset("model2".into()),
                coupling: FRAC_PI_4,
                step_width: 1.0 / 24.0,
                hold_duration: 100.0,
                shots: 1_000_000,
                seed: 3,
                observables: vec!["Z".into()],
                ..base
            },
            other => {
                return Err(AppError::config(
                    "preset",
                    format!("unknown preset `{other}`; available: {}", PRESETS.join(", ")),
                ))
            }
        };
        Ok(cfg)
    }

    pub fn sample_dt(&self) -> f64 {
        self.sample_dt.unwrap_or(self.step_width)
    }

    pub fn integrator(&self) -> Integrator {
        match self.integrator {
            IntegratorName::Trotter2 => Integrator::Trotter2(match self.split_order {
                SplitName::AOutside => SplitOrder::AOutside,
                SplitName::BOutside => SplitOrder::BOutside,
            }),
            IntegratorName::ExactMidpoint => Integrator::ExactMidpoint,
        }
    }

    pub fn hold_propagation(&self) -> HoldPropagation {
        match self.hold_propagation {
            HoldName::Exact => HoldPropagation::Exact,
            HoldName::Trotter2 => HoldPropagation::Trotter2,
        }
    }

    pub fn mean_estimator(&self) -> MeanEstimator {
        match self.mean_estimator {
            EstimatorName::MinMax => MeanEstimator::MinMax,
            EstimatorName::Arithmetic => MeanEstimator::Arithmetic,
        }
    }

    pub fn schedule(&self) -> Result<AdiabaticSchedule> {
        AdiabaticSchedule::linear(self.total_time, self.step_width)
            .map_err(|e| AppError::config("step_width", e.to_string()))
    }

    /// Checks every field and builds the model. On success the returned
    /// config has `sample_dt` and `observables` filled in.
    pub fn resolve(&self) -> Result<(ExperimentConfig, ModelSpec)> {
        let mut issues = Vec::new();
        let mut positive = |field: &str, x: f64| {
            if !(x.is_finite() && x > 0.0) {
                issues.push(FieldIssue::new(field, format!("must be positive and finite, got {x}")));
            }
        };
        positive("coupling", self.coupling);
        positive("total_time", self.total_time);
        positive("step_width", self.step_width);
        positive("hold_duration", self.hold_duration);
        if let Some(dt) = self.sample_dt {
            positive("sample_dt", dt);
        }
        if self.name.is_empty() {
            issues.push(FieldIssue::new("name", "must not be empty"));
        }
        if issues.is_empty() {
            if self.step_width > self.total_time {
                issues.push(FieldIssue::new("step_width", "exceeds total_time"));
            } else if self.total_time / self.step_width > MAX_STEPS {
                issues.push(FieldIssue::new("step_width", format!("more than {MAX_STEPS:e} steps")));
            }
            if self.hold_duration / self.sample_dt() > MAX_HOLD_POINTS {
                issues.push(FieldIssue::new("sample_dt", format!("more than {MAX_HOLD_POINTS:e} hold samples")));
            }
        }
        if self.reference_refinement > 4096 {
            issues.push(FieldIssue::new("reference_refinement", "must be at most 4096"));
        }
        if !issues.is_empty() {
            return Err(AppError::Config(issues));
        }

        let spec = self.build_model()?;
        let mut resolved = self.clone();
        resolved.sample_dt = Some(self.sample_dt());
        resolved.observables = spec.observables.iter().map(|o| o.label().to_string()).collect();

        // Oscillating observables need a whole period at analysis resolution.
        let oscillating = spec.observables.iter().any(|o| relation(&spec, o) != OperatorRelation::Commuting);
        if oscillating {
            let period = 2.0 * PI / spec.oscillation_frequency();
            if self.hold_duration < period {
                issues.push(FieldIssue::new(
                    "hold_duration",
                    format!("shorter than one oscillation period ({period})"),
                ));
            }
            if period / resolved.sample_dt() + 1e-9 < MIN_SAMPLES_PER_PERIOD {
                issues.push(FieldIssue::new(
                    "sample_dt",
                    format!("needs at least {MIN_SAMPLES_PER_PERIOD} samples per period {period}"),
                ));
            }
        }
        if !issues.is_empty() {
            return Err(AppError::Config(issues));
        }
        Ok((resolved, spec))
    }

    fn build_model(&self) -> Result<ModelSpec> {
        let mut spec = match &self.model {
            ModelConfig::Preset(name) => {
                let preset: Preset = name.parse().map_err(|_| {
                    AppError::config("model", format!("unknown model `{name}`; available: model1, model2"))
                })?;
                preset_model(preset, self.coupling).map_err(|e| AppError::config("coupling", e.to_string()))?
            }
            ModelConfig::Inline(inline) => inline.build(self.coupling)?,
        };

        if !self.observables.is_empty() {
            let mut chosen: Vec<HermitianOperator> = Vec::new();
            let mut issues = Vec::new();
            for (k, label) in self.observables.iter().enumerate() {
                let field = format!("observables[{k}]");
                if chosen.iter().any(|o| o.label() == label) {
                    issues.push(FieldIssue::new(field, format!("duplicate observable `{label}`")));
                    continue;
                }
                match lookup_observable(&spec, label) {
                    Some(o) => chosen.push(o),
                    None => issues.push(FieldIssue::new(
                        field,
                        format!(
                            "unknown observable `{label}`; the model defines {}, and 2x2 models also accept \
                             I, X, Y, Z, H with an optional leading `-`",
                            spec.observables.iter().map(|o| o.label()).collect::<Vec<_>>().join(", ")
                        ),
                    )),
                }
            }
            if !issues.is_empty() {
                return Err(AppError::Config(issues));
            }
            spec.observables = chosen;
        }
        if spec.observables.is_empty() {
            return Err(AppError::config("observables", "no observable selected and the model defines none"));
        }
        Ok(spec)
    }
}

fn lookup_observable(spec: &ModelSpec, label: &str) -> Option<HermitianOperator> {
    if let Some(o) = spec.observable(label) {
        return Some(o.clone());
    }
    if spec.dim() != 2 {
        return None;
    }
    let (sign, name) = match label.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, label),
    };
    pauli(name).ok().map(|o| o.scaled(sign, label))
}

impl InlineModel {
    fn build(&self, coupling: f64) -> Result<ModelSpec> {
        let initial = operator("model.initial", &self.initial, "H0")?;
        let target = operator("model.target", &self.target, "HT")?;
        let observables = self
            .observables
            .iter()
            .map(|(label, m)| operator(&format!("model.observables.{label}"), m, label))
            .collect::<Result<Vec<_>>>()?;
        ModelSpec::custom(initial, target, coupling, observables).map_err(|e| AppError::config("model", e.to_string()))
    }
}

fn operator(field: &str, rows: &[Vec<Entry>], label: &str) -> Result<HermitianOperator> {
    let n = rows.len();
    if n == 0 || n > MAX_DIM {
        return Err(AppError::config(field, format!("needs between 1 and {MAX_DIM} rows")));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(AppError::config(field, format!("row {i} has {} entries, expected {n}", r.len())));
    }
    let data = rows.iter().flatten().map(|e| e.value()).collect();
    let m = ComplexMatrix::from_row_major(n, data).map_err(|e| AppError::config(field, e.to_string()))?;
    HermitianOperator::new(m, label).map_err(|e| AppError::config(field, e.to_string()))
}

/// Where a configuration comes from, lowest precedence first.
#[derive(Clone, Debug, Default)]
pub struct ConfigSource {
    pub file: Option<PathBuf>,
    pub preset: Option<String>,
    /// `key=value` overrides; keys may be dotted (`outputs.svg=false`).
    pub overrides: Vec<String>,
    /// Value of the seed environment variable, if set.
    pub seed_env: Option<String>,
}

impl ConfigSource {
    pub fn with_env(mut self) -> Self {
        self.seed_env = std::env::var(SEED_ENV).ok();
        self
    }

    /// Layers preset, file, overrides, and the seed variable, then parses.
    pub fn load(&self) -> Result<ExperimentConfig> {
        let mut file = match &self.file {
            Some(path) => read_json(path)?,
            None => Map::new(),
        };
        let preset = match (&self.preset, file.remove("preset")) {
            (Some(name), _) => Some(name.clone()),
            (None, Some(Value::String(name))) => Some(name),
            (None, Some(other)) => {
                return Err(AppError::config("preset", format!("expected a preset name, got {other}")))
            }
            (None, None) => None,
        };
        let mut doc = match preset {
            Some(name) => match serde_json::to_value(ExperimentConfig::preset(&name)?) {
                Ok(Value::Object(map)) => map,
                _ => unreachable!("configs serialize to objects"),
            },
            None => Map::new(),
        };
        for (k, v) in file {
            doc.insert(k, v);
        }
        for item in &self.overrides {
            apply_override(&mut doc, item)?;
        }
        if let Some(raw) = &self.seed_env {
            let seed: u64 = raw
                .trim()
                .parse()
                .map_err(|_| AppError::config(SEED_ENV, format!("`{raw}` is not an unsigned 64-bit integer")))?;
            doc.insert("seed".into(), Value::from(seed));
        }
        parse_config(Value::Object(doc))
    }
}

/// Deserializes with the failing field's path in the diagnostic.
pub fn parse_config(doc: Value) -> Result<ExperimentConfig> {
    serde_path_to_error::deserialize(doc).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "config".to_string() } else { path };
        AppError::config(field, e.into_inner().to_string())
    })
}

fn read_json(path: &Path) -> Result<Map<String, Value>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::config("config", format!("cannot read {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(AppError::config("config", format!("{}: top level must be an object", path.display()))),
        Err(e) => Err(AppError::config("config", format!("{}: {e}", path.display()))),
    }
}

/// Applies `a.b.c=value`. The value is read as JSON, then as a real
/// expression (`1/24`, `pi/4`), and otherwise kept as a string.
pub fn apply_override(doc: &mut Map<String, Value>, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| AppError::config("--set", format!("`{item}` is not of the form key=value")))?;
    let key = key.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(AppError::config("--set", format!("bad key in `{item}`")));
    }
    let value = serde_json::from_str::<Value>(raw)
        .ok()
        .or_else(|| parse_real(raw).and_then(serde_json::Number::from_f64).map(Value::Number))
        .unwrap_or_else(|| Value::String(raw.to_string()));
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("key is non-empty");
    let mut node = doc;
    for p in parts {
        let slot = node.entry(p.to_string()).or_insert_with(|| Value::Object(Map::new()));
        if !slot.is_object() {
            *slot = Value::Object(Map::new());
        }
        node = slot.as_object_mut().expect("just made an object");
    }
    node.insert(last.to_string(), value);
    Ok(())
}

/// `x`, `pi`, `x*pi`, or `a/b` of those.
pub fn parse_real(s: &str) -> Option<f64> {
    fn term(t: &str) -> Option<f64> {
        let t = t.trim();
        if t == "pi" {
            return Some(PI);
        }
        if let Some(k) = t.strip_suffix("*pi") {
            return k.trim().parse::<f64>().ok().map(|k| k * PI);
        }
        t.parse().ok()
    }
    let x = match s.split_once('/') {
        Some((a, b)) => term(a)? / term(b)?,
        None => term(s)?,
    };
    x.is_finite().then_some(x)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RealRepr {
    Number(f64),
    Text(String),
}

fn real<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    match RealRepr::deserialize(d)? {
        RealRepr::Number(x) => Ok(x),
        RealRepr::Text(s) => {
            parse_real(&s).ok_or_else(|| serde::de::Error::custom(format!("`{s}` is not a real number")))
        }
    }
}

fn opt_real<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    real(d).map(Some)
}
