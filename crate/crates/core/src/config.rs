//! Configuration loading and validation.
//!
//! A single TOML file drives the whole pipeline. Every analysis
//! constant (loading cutoff, eigenvalue threshold, reliability gates,
//! stepwise thresholds, star levels) lives in the file rather than in
//! code, so each choice is visible and overridable. Cross-references
//! (the dependent variable, model predictors, quadrant axes) must name
//! defined scales; hypothesis lists are checked at evaluation time
//! instead so a missing scale degrades to an Unevaluable verdict
//! rather than a hard error.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::efa::PruneRules;
use crate::error::{Error, Result};
use crate::report::{HypothesisSpec, QuadrantThresholds, StarLevels};
use crate::scales::{Direction, Gates};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    input: RawInput,
    #[serde(default)]
    efa: RawEfa,
    #[serde(default)]
    reliability: RawReliability,
    #[serde(default)]
    stars: RawStars,
    #[serde(default, rename = "scale")]
    scales: Vec<RawScale>,
    regression: RawRegression,
    #[serde(default)]
    hypotheses: RawHypotheses,
    quadrants: RawQuadrants,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    overlap_marks: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    path: PathBuf,
    items: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawEfa {
    items: Option<Vec<String>>,
    loading_cutoff: f64,
    eigen_threshold: f64,
    max_outer_iterations: usize,
}

impl Default for RawEfa {
    fn default() -> Self {
        let rules = PruneRules::default();
        RawEfa {
            items: None,
            loading_cutoff: rules.loading_cutoff,
            eigen_threshold: rules.eigen_threshold,
            max_outer_iterations: rules.max_outer_iterations,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawReliability {
    lenient: f64,
    strict: f64,
}

impl Default for RawReliability {
    fn default() -> Self {
        let gates = Gates::default();
        RawReliability {
            lenient: gates.lenient,
            strict: gates.strict,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawStars {
    five_percent: f64,
    one_percent: f64,
}

impl Default for RawStars {
    fn default() -> Self {
        let levels = StarLevels::default();
        RawStars {
            five_percent: levels.five,
            one_percent: levels.one,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScale {
    name: String,
    #[serde(default = "default_direction")]
    direction: String,
    items: Vec<String>,
    alternate: Option<RawAlternate>,
}

fn default_direction() -> String {
    "mean".to_string()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlternate {
    items: Vec<String>,
    direction: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegression {
    dependent: String,
    #[serde(default = "default_true")]
    simple_all: bool,
    #[serde(default = "default_entry_p")]
    entry_p: f64,
    #[serde(default = "default_removal_p")]
    removal_p: f64,
    #[serde(default, rename = "model")]
    models: Vec<RawModel>,
}

fn default_true() -> bool {
    true
}

fn default_entry_p() -> f64 {
    0.05
}

fn default_removal_p() -> f64 {
    0.10
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: String,
    method: String,
    predictors: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawHypotheses {
    h1_positive: Vec<String>,
    h2_negative: Vec<String>,
    h3_positive: Vec<String>,
    h4_strongest: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadrants {
    x: String,
    y: String,
    thresholds: Option<RawThresholds>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawThresholds {
    x_low: f64,
    x_high: f64,
    y_low: f64,
    y_high: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawOutput {
    dir: PathBuf,
}

impl Default for RawOutput {
    fn default() -> Self {
        RawOutput {
            dir: PathBuf::from("out"),
        }
    }
}

/// How a configured model selects predictors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelMethod {
    Stepwise,
    Enter,
}

/// One scale definition from the config, with an optional alternate
/// item set whose reliability is reported alongside the original.
#[derive(Debug, Clone)]
pub struct ScaleConfig {
    pub name: String,
    pub direction: Direction,
    pub items: Vec<String>,
    pub alternate: Option<AlternateConfig>,
}

#[derive(Debug, Clone)]
pub struct AlternateConfig {
    pub items: Vec<String>,
    pub direction: Direction,
}

#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub name: String,
    pub method: ModelMethod,
    pub predictors: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RegressionConfig {
    pub dependent: String,
    /// Fit a one-predictor model for every non-dependent scale.
    pub simple_all: bool,
    pub entry_p: f64,
    pub removal_p: f64,
    pub models: Vec<ModelConfig>,
}

#[derive(Debug, Clone)]
pub struct QuadrantConfig {
    pub x: String,
    pub y: String,
    pub thresholds: Option<QuadrantThresholds>,
}

/// Fully validated configuration, ready to drive the pipeline.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Input CSV, resolved relative to the config file's directory.
    pub input_path: PathBuf,
    /// Optional column subset applied at load time.
    pub input_items: Option<Vec<String>>,
    /// Items offered to factor extraction; None means every loaded
    /// item column not used by the dependent scale.
    pub efa_items: Option<Vec<String>>,
    pub prune_rules: PruneRules,
    pub gates: Gates,
    pub stars: StarLevels,
    pub scales: Vec<ScaleConfig>,
    pub regression: RegressionConfig,
    pub hypotheses: HypothesisSpec,
    pub quadrants: QuadrantConfig,
    pub out_dir: PathBuf,
    pub overlap_marks: BTreeMap<String, Vec<String>>,
}

impl PipelineConfig {
    pub fn find_scale(&self, name: &str) -> Option<&ScaleConfig> {
        self.scales.iter().find(|s| s.name == name)
    }
}

fn parse_direction(s: &str) -> Result<Direction> {
    match s {
        "mean" => Ok(Direction::Mean),
        "hundred-minus-mean" => Ok(Direction::HundredMinusMean),
        other => Err(Error::Config(format!(
            "unknown scale direction '{other}' (expected \"mean\" or \"hundred-minus-mean\")"
        ))),
    }
}

fn parse_method(s: &str) -> Result<ModelMethod> {
    match s {
        "stepwise" => Ok(ModelMethod::Stepwise),
        "enter" => Ok(ModelMethod::Enter),
        other => Err(Error::Config(format!(
            "unknown model method '{other}' (expected \"stepwise\" or \"enter\")"
        ))),
    }
}

fn in_unit_interval(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must lie strictly between 0 and 1, got {v}")))
    }
}

/// Read, parse, and validate a config file. `out_override` replaces
/// the configured output directory (the CLI's `--out`).
pub fn load_config(path: &Path, out_override: Option<&Path>) -> Result<PipelineConfig> {
    let text = std::fs::read_to_string(path)?;
    let raw: RawConfig = toml::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));

    if let Some(items) = &raw.input.items {
        if items.is_empty() {
            return Err(Error::Config("input.items must not be empty when present".to_string()));
        }
    }
    if let Some(items) = &raw.efa.items {
        if items.is_empty() {
            return Err(Error::Config("efa.items must not be empty when present".to_string()));
        }
    }
    in_unit_interval("efa.loading_cutoff", raw.efa.loading_cutoff)?;
    if !(raw.efa.eigen_threshold > 0.0) {
        return Err(Error::Config(format!(
            "efa.eigen_threshold must be positive, got {}",
            raw.efa.eigen_threshold
        )));
    }
    if raw.efa.max_outer_iterations == 0 {
        return Err(Error::Config("efa.max_outer_iterations must be at least 1".to_string()));
    }
    in_unit_interval("reliability.lenient", raw.reliability.lenient)?;
    in_unit_interval("reliability.strict", raw.reliability.strict)?;
    if raw.reliability.lenient > raw.reliability.strict {
        return Err(Error::Config(format!(
            "reliability.lenient ({}) must not exceed reliability.strict ({})",
            raw.reliability.lenient, raw.reliability.strict
        )));
    }
    in_unit_interval("stars.five_percent", raw.stars.five_percent)?;
    in_unit_interval("stars.one_percent", raw.stars.one_percent)?;
    if raw.stars.one_percent >= raw.stars.five_percent {
        return Err(Error::Config(format!(
            "stars.one_percent ({}) must be below stars.five_percent ({})",
            raw.stars.one_percent, raw.stars.five_percent
        )));
    }

    if raw.scales.is_empty() {
        return Err(Error::Config("at least one [[scale]] must be defined".to_string()));
    }
    let mut seen = BTreeSet::new();
    let mut scales = Vec::with_capacity(raw.scales.len());
    for s in &raw.scales {
        if s.name.trim().is_empty() {
            return Err(Error::Config("scale names must be non-empty".to_string()));
        }
        if !seen.insert(s.name.clone()) {
            return Err(Error::Config(format!("duplicate scale name '{}'", s.name)));
        }
        if s.items.is_empty() {
            return Err(Error::Config(format!("scale '{}' has an empty item list", s.name)));
        }
        let direction = parse_direction(&s.direction)?;
        let alternate = match &s.alternate {
            None => None,
            Some(alt) => {
                if alt.items.is_empty() {
                    return Err(Error::Config(format!(
                        "alternate for scale '{}' has an empty item list",
                        s.name
                    )));
                }
                let alt_direction = match &alt.direction {
                    Some(d) => parse_direction(d)?,
                    None => direction,
                };
                Some(AlternateConfig {
                    items: alt.items.clone(),
                    direction: alt_direction,
                })
            }
        };
        scales.push(ScaleConfig {
            name: s.name.clone(),
            direction,
            items: s.items.clone(),
            alternate,
        });
    }

    let require_scale = |context: &str, name: &str| -> Result<()> {
        if seen.contains(name) {
            Ok(())
        } else {
            Err(Error::Config(format!("{context} references undefined scale '{name}'")))
        }
    };

    require_scale("regression.dependent", &raw.regression.dependent)?;
    if !(raw.regression.entry_p > 0.0
        && raw.regression.entry_p <= raw.regression.removal_p
        && raw.regression.removal_p <= 1.0)
    {
        return Err(Error::Config(format!(
            "regression thresholds must satisfy 0 < entry_p <= removal_p <= 1, got ({}, {})",
            raw.regression.entry_p, raw.regression.removal_p
        )));
    }
    let mut model_names = BTreeSet::new();
    let mut models = Vec::with_capacity(raw.regression.models.len());
    for m in &raw.regression.models {
        if m.name.trim().is_empty() {
            return Err(Error::Config("model names must be non-empty".to_string()));
        }
        if !model_names.insert(m.name.clone()) {
            return Err(Error::Config(format!("duplicate model name '{}'", m.name)));
        }
        if m.predictors.is_empty() {
            return Err(Error::Config(format!("model '{}' has no predictors", m.name)));
        }
        for p in &m.predictors {
            require_scale(&format!("model '{}'", m.name), p)?;
        }
        models.push(ModelConfig {
            name: m.name.clone(),
            method: parse_method(&m.method)?,
            predictors: m.predictors.clone(),
        });
    }

    require_scale("quadrants.x", &raw.quadrants.x)?;
    require_scale("quadrants.y", &raw.quadrants.y)?;
    let thresholds = match &raw.quadrants.thresholds {
        None => None,
        Some(t) => {
            if !(t.x_low <= t.x_high && t.y_low <= t.y_high) {
                return Err(Error::Config(
                    "quadrants.thresholds must satisfy low <= high on both axes".to_string(),
                ));
            }
            Some(QuadrantThresholds {
                x_low: t.x_low,
                x_high: t.x_high,
                y_low: t.y_low,
                y_high: t.y_high,
            })
        }
    };

    let out_dir = out_override
        .map(Path::to_path_buf)
        .unwrap_or(raw.output.dir);

    Ok(PipelineConfig {
        input_path: base.join(&raw.input.path),
        input_items: raw.input.items,
        efa_items: raw.efa.items,
        prune_rules: PruneRules {
            loading_cutoff: raw.efa.loading_cutoff,
            eigen_threshold: raw.efa.eigen_threshold,
            max_outer_iterations: raw.efa.max_outer_iterations,
        },
        gates: Gates {
            lenient: raw.reliability.lenient,
            strict: raw.reliability.strict,
        },
        stars: StarLevels {
            five: raw.stars.five_percent,
            one: raw.stars.one_percent,
        },
        scales,
        regression: RegressionConfig {
            dependent: raw.regression.dependent,
            simple_all: raw.regression.simple_all,
            entry_p: raw.regression.entry_p,
            removal_p: raw.regression.removal_p,
            models,
        },
        hypotheses: HypothesisSpec {
            h1_positive: raw.hypotheses.h1_positive,
            h2_negative: raw.hypotheses.h2_negative,
            h3_positive: raw.hypotheses.h3_positive,
            h4_strongest: raw.hypotheses.h4_strongest,
        },
        quadrants: QuadrantConfig {
            x: raw.quadrants.x,
            y: raw.quadrants.y,
            thresholds,
        },
        out_dir,
        overlap_marks: raw.overlap_marks,
    })
}
