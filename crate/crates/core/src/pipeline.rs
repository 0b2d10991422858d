//! Stage orchestration.
//!
//! Each stage reads its inputs — the original CSV or intermediates
//! written by earlier stages — computes one analysis boundary, and
//! writes artifacts into the output directory. `run_pipeline` executes
//! the stages in order through the same functions, so running the
//! stage commands by hand composes to byte-identical artifacts.
//! Artifact content never embeds absolute paths, keeping runs
//! reproducible across machines.

use std::fs;

use crate::config::{ModelMethod, PipelineConfig};
use crate::dataset::{self, LoadSchema, Table};
use crate::efa;
use crate::error::{Error, Result};
use crate::regression::{self, RegressionResult};
use crate::report::{
    self, DescriptiveRow, ModelMethodLabel, ModelReport, SimpleFitSummary,
};
use crate::scales::{self, GateDecision, ReliabilityEntry, ScaleDefinition, ScaleScores};
use crate::statcore;

pub const DATASET_CSV: &str = "dataset.csv";
pub const LOAD_REPORT_TXT: &str = "load_report.txt";
pub const EFA_AUDIT_TXT: &str = "efa_audit.txt";
pub const LOADINGS_MD: &str = "loadings.md";
pub const LOADINGS_CSV: &str = "loadings.csv";
pub const SCALES_CSV: &str = "scales.csv";
pub const RELIABILITY_TXT: &str = "reliability.txt";
pub const DESCRIPTIVES_MD: &str = "descriptives.md";
pub const DESCRIPTIVES_CSV: &str = "descriptives.csv";
pub const CORRELATIONS_CSV: &str = "correlations.csv";
pub const REGRESSIONS_MD: &str = "regressions.md";
pub const REGRESSIONS_CSV: &str = "regressions.csv";
pub const HYPOTHESES_MD: &str = "hypotheses.md";
pub const QUADRANTS_CSV: &str = "quadrants.csv";
pub const QUADRANTS_MD: &str = "quadrants.md";
pub const SCATTER_CSV: &str = "scatter.csv";
pub const PIPELINE_AUDIT_TXT: &str = "pipeline_audit.txt";

/// Every artifact a full run writes, audit log excluded.
pub const STAGE_ARTIFACTS: &[&str] = &[
    DATASET_CSV,
    LOAD_REPORT_TXT,
    EFA_AUDIT_TXT,
    LOADINGS_MD,
    LOADINGS_CSV,
    SCALES_CSV,
    RELIABILITY_TXT,
    DESCRIPTIVES_MD,
    DESCRIPTIVES_CSV,
    CORRELATIONS_CSV,
    REGRESSIONS_MD,
    REGRESSIONS_CSV,
    HYPOTHESES_MD,
    QUADRANTS_CSV,
    QUADRANTS_MD,
    SCATTER_CSV,
];

/// What one stage did, for logs and the audit file.
#[derive(Debug, Clone)]
pub struct StageSummary {
    pub name: &'static str,
    pub lines: Vec<String>,
}

fn ensure_out(cfg: &PipelineConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out_dir)?;
    Ok(())
}

fn write_artifact(cfg: &PipelineConfig, name: &str, content: &str) -> Result<()> {
    fs::write(cfg.out_dir.join(name), content)?;
    Ok(())
}

fn read_intermediate(cfg: &PipelineConfig, name: &str) -> Result<Table> {
    let path = cfg.out_dir.join(name);
    let file = fs::File::open(&path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::InvalidArgument(format!(
                "intermediate '{name}' not found in the output directory; run the earlier stages first"
            ))
        } else {
            Error::Io(e)
        }
    })?;
    Table::read_csv(file, name)
}

fn wrote_line(names: &[&str]) -> String {
    format!("wrote: {}", names.join(", "))
}

/// Load and validate the input CSV; write the canonical dataset and the
/// load report.
pub fn stage_ingest(cfg: &PipelineConfig) -> Result<StageSummary> {
    ensure_out(cfg)?;
    let schema = LoadSchema {
        item_subset: cfg.input_items.clone(),
    };
    let (dataset, load) = dataset::load_matrix(&cfg.input_path, &schema)?;
    write_artifact(cfg, DATASET_CSV, &dataset.table.to_csv_string()?)?;
    write_artifact(cfg, LOAD_REPORT_TXT, &load.render())?;
    Ok(StageSummary {
        name: "ingest",
        lines: vec![
            format!(
                "loaded {}: kept {} of {} rows, {} item columns",
                load.source, load.rows_kept, load.rows_read, load.item_columns
            ),
            wrote_line(&[DATASET_CSV, LOAD_REPORT_TXT]),
        ],
    })
}

/// Items offered to factor extraction: the configured list, or every
/// dataset column not used by the dependent scale.
fn efa_item_list(cfg: &PipelineConfig, table: &Table) -> Vec<String> {
    match &cfg.efa_items {
        Some(items) => items.clone(),
        None => {
            let dep_items: &[String] = cfg
                .find_scale(&cfg.regression.dependent)
                .map(|s| s.items.as_slice())
                .unwrap_or(&[]);
            table
                .column_names()
                .iter()
                .filter(|c| !dep_items.contains(c))
                .cloned()
                .collect()
        }
    }
}

/// Run the prune-and-refit factor extraction; write the audit trail and
/// the loadings tables.
pub fn stage_efa(cfg: &PipelineConfig) -> Result<StageSummary> {
    ensure_out(cfg)?;
    let table = read_intermediate(cfg, DATASET_CSV)?;
    let items = efa_item_list(cfg, &table);
    let solution = efa::prune_iterate(&table, &items, &cfg.prune_rules)?;
    write_artifact(cfg, EFA_AUDIT_TXT, &report::render_efa_audit(&solution))?;
    write_artifact(
        cfg,
        LOADINGS_MD,
        &report::render_loadings_md(&solution, &cfg.overlap_marks, cfg.prune_rules.loading_cutoff),
    )?;
    write_artifact(
        cfg,
        LOADINGS_CSV,
        &report::render_loadings_csv(&solution, &cfg.overlap_marks)?,
    )?;
    Ok(StageSummary {
        name: "efa",
        lines: vec![
            format!(
                "{} pass(es); retained {} factors over {} of {} items",
                solution.iteration_count(),
                solution.retained_factor_count,
                solution.kept_items().len(),
                items.len()
            ),
            wrote_line(&[EFA_AUDIT_TXT, LOADINGS_MD, LOADINGS_CSV]),
        ],
    })
}

fn definition(name: &str, items: &[String], direction: scales::Direction) -> ScaleDefinition {
    ScaleDefinition {
        name: name.to_string(),
        items: items.to_vec(),
        direction,
    }
}

fn build_all_scales(
    cfg: &PipelineConfig,
    table: &Table,
) -> Result<(Vec<ScaleScores>, Vec<ReliabilityEntry>)> {
    let mut scores = Vec::with_capacity(cfg.scales.len());
    let mut entries = Vec::with_capacity(cfg.scales.len());
    for sc in &cfg.scales {
        let built = scales::build_scale(table, &definition(&sc.name, &sc.items, sc.direction))?;
        let alternate = match &sc.alternate {
            Some(alt) => Some(scales::build_scale(
                table,
                &definition(&sc.name, &alt.items, alt.direction),
            )?),
            None => None,
        };
        entries.push(scales::reliability_report(&built, alternate.as_ref(), &cfg.gates));
        scores.push(built);
    }
    Ok((scores, entries))
}

/// Build every configured scale, gate reliabilities, and write the
/// per-occupation scale score table.
pub fn stage_scales(cfg: &PipelineConfig) -> Result<StageSummary> {
    ensure_out(cfg)?;
    let table = read_intermediate(cfg, DATASET_CSV)?;
    let (scores, entries) = build_all_scales(cfg, &table)?;
    let scale_table = scales::scale_table(table.occupations(), &scores)?;
    write_artifact(cfg, SCALES_CSV, &scale_table.to_csv_string()?)?;
    write_artifact(cfg, RELIABILITY_TXT, &report::render_reliability(&entries, &cfg.gates))?;
    let count = |d: GateDecision| entries.iter().filter(|e| e.decision == d).count();
    Ok(StageSummary {
        name: "scales",
        lines: vec![
            format!(
                "built {} scales: {} pass, {} lenient-only, {} fail, {} single-item",
                entries.len(),
                count(GateDecision::Pass),
                count(GateDecision::LenientOnly),
                count(GateDecision::Fail),
                count(GateDecision::SingleItem)
            ),
            wrote_line(&[SCALES_CSV, RELIABILITY_TXT]),
        ],
    })
}

/// Presentation order for descriptives: the dependent scale first,
/// then the rest in config order.
fn presentation_order(cfg: &PipelineConfig) -> Vec<String> {
    let mut order = vec![cfg.regression.dependent.clone()];
    for sc in &cfg.scales {
        if sc.name != cfg.regression.dependent {
            order.push(sc.name.clone());
        }
    }
    order
}

/// Compute means, SDs, alphas, and the scale correlation matrix; write
/// the descriptives tables.
pub fn stage_correlate(cfg: &PipelineConfig) -> Result<StageSummary> {
    ensure_out(cfg)?;
    let dataset = read_intermediate(cfg, DATASET_CSV)?;
    let scale_scores = read_intermediate(cfg, SCALES_CSV)?;
    let order = presentation_order(cfg);
    let mut rows = Vec::with_capacity(order.len());
    let mut cols: Vec<(&str, &[f64])> = Vec::with_capacity(order.len());
    for name in &order {
        let col = scale_scores
            .column_by_name(name)
            .ok_or_else(|| Error::UnknownScale(name.clone()))?;
        let sc = cfg.find_scale(name).ok_or_else(|| Error::UnknownScale(name.clone()))?;
        let alpha = if sc.items.len() >= 2 {
            scales::build_scale(&dataset, &definition(&sc.name, &sc.items, sc.direction))?
                .alpha
                .map(|a| a.alpha)
        } else {
            None
        };
        rows.push(DescriptiveRow {
            name: name.clone(),
            mean: statcore::mean(col),
            sd: statcore::sample_sd(col),
            alpha,
        });
        cols.push((name.as_str(), col));
    }
    let corr = statcore::correlation_matrix(&cols)?;
    write_artifact(
        cfg,
        DESCRIPTIVES_MD,
        &report::render_descriptives_md(&rows, &corr, &cfg.stars)?,
    )?;
    write_artifact(cfg, DESCRIPTIVES_CSV, &report::render_descriptives_csv(&rows)?)?;
    write_artifact(cfg, CORRELATIONS_CSV, &report::render_correlations_csv(&corr, &cfg.stars)?)?;
    Ok(StageSummary {
        name: "correlate",
        lines: vec![
            format!("descriptives and correlations over {} variables, n = {}", order.len(), corr.n),
            wrote_line(&[DESCRIPTIVES_MD, DESCRIPTIVES_CSV, CORRELATIONS_CSV]),
        ],
    })
}

fn method_label(m: ModelMethod) -> ModelMethodLabel {
    match m {
        ModelMethod::Stepwise => ModelMethodLabel::Stepwise,
        ModelMethod::Enter => ModelMethodLabel::Enter,
    }
}

/// Fit the one-predictor models, the configured combined models, and
/// the hypothesis checks; write the regression tables.
pub fn stage_regress(cfg: &PipelineConfig) -> Result<StageSummary> {
    ensure_out(cfg)?;
    let scale_scores = read_intermediate(cfg, SCALES_CSV)?;
    let dep_name = cfg.regression.dependent.as_str();
    let dep_col = scale_scores
        .column_by_name(dep_name)
        .ok_or_else(|| Error::UnknownScale(dep_name.to_string()))?;
    let dep = (dep_name, dep_col);

    // One-predictor fits for every other scale; they feed the simple
    // table, the hypothesis checks, and the sign-flip diagnostics.
    let mut simple: Vec<RegressionResult> = Vec::new();
    let mut fits: Vec<SimpleFitSummary> = Vec::new();
    let mut simple_r: Vec<(String, f64)> = Vec::new();
    for sc in &cfg.scales {
        if sc.name == dep_name {
            continue;
        }
        let col = scale_scores
            .column_by_name(&sc.name)
            .ok_or_else(|| Error::UnknownScale(sc.name.clone()))?;
        let fit = regression::ols_fit(dep, &[(sc.name.as_str(), col)])?;
        fits.push(SimpleFitSummary {
            scale: sc.name.clone(),
            r: fit.beta[0],
            p: fit.p_values[0],
            adj_r_squared: fit.adj_r_squared,
        });
        simple_r.push((sc.name.clone(), fit.beta[0]));
        simple.push(fit);
    }

    let mut models: Vec<ModelReport> = Vec::with_capacity(cfg.regression.models.len());
    for mc in &cfg.regression.models {
        let cols: Vec<(&str, &[f64])> = mc
            .predictors
            .iter()
            .map(|p| {
                scale_scores
                    .column_by_name(p)
                    .map(|c| (p.as_str(), c))
                    .ok_or_else(|| Error::UnknownScale(p.clone()))
            })
            .collect::<Result<_>>()?;
        let (fit, steps) = match mc.method {
            ModelMethod::Stepwise => {
                let out = regression::stepwise_select(
                    dep,
                    &cols,
                    cfg.regression.entry_p,
                    cfg.regression.removal_p,
                )?;
                (out.fit, out.steps)
            }
            ModelMethod::Enter => (regression::ols_fit(dep, &cols)?, Vec::new()),
        };
        let selected: Vec<(&str, &[f64])> = fit
            .predictors
            .iter()
            .map(|p| {
                let col = scale_scores
                    .column_by_name(p)
                    .expect("selected predictors come from the scale table");
                (p.as_str(), col)
            })
            .collect();
        let vif = if selected.is_empty() {
            Vec::new()
        } else {
            regression::vif(&selected)?
        };
        let sign_flips = regression::sign_flips(&fit, &simple_r);
        models.push(ModelReport {
            name: mc.name.clone(),
            method: method_label(mc.method),
            candidates: mc.predictors.clone(),
            fit,
            steps,
            vif,
            sign_flips,
        });
    }

    let rendered_simple: &[RegressionResult] = if cfg.regression.simple_all { &simple } else { &[] };
    write_artifact(
        cfg,
        REGRESSIONS_MD,
        &report::render_regressions_md(dep_name, rendered_simple, &models, &cfg.stars),
    )?;
    write_artifact(
        cfg,
        REGRESSIONS_CSV,
        &report::render_regressions_csv(dep_name, rendered_simple, &models)?,
    )?;
    let outcomes = report::evaluate_hypotheses(&cfg.hypotheses, &fits, cfg.stars.five);
    write_artifact(cfg, HYPOTHESES_MD, &report::render_hypotheses_md(&outcomes))?;
    let verdicts: Vec<String> = outcomes
        .iter()
        .map(|o| format!("{} {}", o.id, o.verdict.label()))
        .collect();
    Ok(StageSummary {
        name: "regress",
        lines: vec![
            format!("{} one-predictor fits; {} combined models", simple.len(), models.len()),
            format!("hypotheses: {}", verdicts.join(", ")),
            wrote_line(&[REGRESSIONS_MD, REGRESSIONS_CSV, HYPOTHESES_MD]),
        ],
    })
}

/// Classify occupations into the low-low and high-high boxes; write
/// the box table and the scatter export.
pub fn stage_quadrants(cfg: &PipelineConfig) -> Result<StageSummary> {
    ensure_out(cfg)?;
    let scale_scores = read_intermediate(cfg, SCALES_CSV)?;
    let x = scale_scores
        .column_by_name(&cfg.quadrants.x)
        .ok_or_else(|| Error::UnknownScale(cfg.quadrants.x.clone()))?;
    let y = scale_scores
        .column_by_name(&cfg.quadrants.y)
        .ok_or_else(|| Error::UnknownScale(cfg.quadrants.y.clone()))?;
    let boxes = report::quadrant_classify(
        scale_scores.occupations(),
        (cfg.quadrants.x.as_str(), x),
        (cfg.quadrants.y.as_str(), y),
        cfg.quadrants.thresholds,
    )?;
    write_artifact(cfg, QUADRANTS_CSV, &report::render_quadrants_csv(&boxes)?)?;
    write_artifact(cfg, SCATTER_CSV, &report::render_scatter_csv(&boxes)?)?;
    write_artifact(cfg, QUADRANTS_MD, &report::render_quadrants_md(&boxes))?;
    Ok(StageSummary {
        name: "quadrants",
        lines: vec![
            format!(
                "low-low {}, high-high {}, unclassified {}",
                boxes.low_low().len(),
                boxes.high_high().len(),
                boxes.unclassified().len()
            ),
            wrote_line(&[QUADRANTS_CSV, SCATTER_CSV, QUADRANTS_MD]),
        ],
    })
}

type StageFn = fn(&PipelineConfig) -> Result<StageSummary>;

/// The stages of a full run, in execution order.
pub const STAGES: &[(&str, StageFn)] = &[
    ("ingest", stage_ingest),
    ("efa", stage_efa),
    ("scales", stage_scales),
    ("correlate", stage_correlate),
    ("regress", stage_regress),
    ("quadrants", stage_quadrants),
];

/// Run every stage in order and write the audit log. On failure the
/// audit records the failing stage, artifacts from completed stages
/// stay on disk, and the error propagates.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<Vec<StageSummary>> {
    ensure_out(cfg)?;
    let mut summaries = Vec::with_capacity(STAGES.len());
    let mut audit = String::from("# Pipeline audit\n\n");
    for (name, stage) in STAGES {
        match stage(cfg) {
            Ok(summary) => {
                audit.push_str(&format!("## {name}\n"));
                for line in &summary.lines {
                    audit.push_str(line);
                    audit.push('\n');
                }
                audit.push('\n');
                summaries.push(summary);
            }
            Err(e) => {
                audit.push_str(&format!("## {name}\nfailed: {e}\n\nResult: failed at stage {name}\n"));
                let _ = fs::write(cfg.out_dir.join(PIPELINE_AUDIT_TXT), &audit);
                return Err(e);
            }
        }
    }
    audit.push_str("Result: success\n");
    fs::write(cfg.out_dir.join(PIPELINE_AUDIT_TXT), &audit)?;
    Ok(summaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ModelConfig, QuadrantConfig, RegressionConfig, ScaleConfig};
    use crate::report::{HypothesisSpec, StarLevels};
    use crate::scales::{Direction, Gates};
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeMap;
    use std::path::{Path, PathBuf};

    /// Two clean 3-item factors plus an outcome column driven by the
    /// first factor.
    fn synthetic_csv() -> String {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let n = 80;
        let mut rows = String::from("code,title,a1,a2,a3,b1,b2,b3,y\n");
        for i in 0..n {
            let fa: f64 = rng.random_range(-1.0..1.0);
            let fb: f64 = rng.random_range(-1.0..1.0);
            let mut cell = |f: f64| {
                let noise: f64 = rng.random_range(-0.35..0.35);
                (50.0 + 22.0 * (0.85 * f + noise)).clamp(0.0, 100.0)
            };
            let a = [cell(fa), cell(fa), cell(fa)];
            let b = [cell(fb), cell(fb), cell(fb)];
            let y = (50.0 + 20.0 * (0.8 * fa + 0.3 * rng.random_range(-1.0..1.0f64))).clamp(0.0, 100.0);
            rows.push_str(&format!(
                "O{i:04},Occupation {i:04},{:.2},{:.2},{:.2},{:.2},{:.2},{:.2},{y:.2}\n",
                a[0], a[1], a[2], b[0], b[1], b[2]
            ));
        }
        rows
    }

    fn config(input: PathBuf, out: PathBuf) -> PipelineConfig {
        PipelineConfig {
            input_path: input,
            input_items: None,
            efa_items: None,
            prune_rules: Default::default(),
            gates: Gates::default(),
            stars: StarLevels::default(),
            scales: vec![
                ScaleConfig {
                    name: "Alpha".into(),
                    direction: Direction::Mean,
                    items: vec!["a1".into(), "a2".into(), "a3".into()],
                    alternate: None,
                },
                ScaleConfig {
                    name: "Beta".into(),
                    direction: Direction::Mean,
                    items: vec!["b1".into(), "b2".into(), "b3".into()],
                    alternate: None,
                },
                ScaleConfig {
                    name: "Outcome".into(),
                    direction: Direction::Mean,
                    items: vec!["y".into()],
                    alternate: None,
                },
            ],
            regression: RegressionConfig {
                dependent: "Outcome".into(),
                simple_all: true,
                entry_p: 0.05,
                removal_p: 0.10,
                models: vec![ModelConfig {
                    name: "Screened".into(),
                    method: ModelMethod::Stepwise,
                    predictors: vec!["Alpha".into(), "Beta".into()],
                }],
            },
            hypotheses: HypothesisSpec {
                h1_positive: vec!["Alpha".into()],
                h2_negative: vec![],
                h3_positive: vec![],
                h4_strongest: Some("Alpha".into()),
            },
            quadrants: QuadrantConfig {
                x: "Alpha".into(),
                y: "Outcome".into(),
                thresholds: None,
            },
            out_dir: out,
            overlap_marks: BTreeMap::new(),
        }
    }

    fn artifact_map(dir: &Path) -> BTreeMap<String, Vec<u8>> {
        STAGE_ARTIFACTS
            .iter()
            .filter_map(|name| {
                fs::read(dir.join(name)).ok().map(|bytes| (name.to_string(), bytes))
            })
            .collect()
    }

    #[test]
    fn full_run_writes_every_artifact_deterministically() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("input.csv");
        fs::write(&input, synthetic_csv()).unwrap();
        let cfg = config(input.clone(), dir.path().join("out"));
        let summaries = run_pipeline(&cfg).unwrap();
        assert_eq!(summaries.len(), STAGES.len());
        for name in STAGE_ARTIFACTS {
            assert!(cfg.out_dir.join(name).exists(), "missing artifact {name}");
        }
        assert!(cfg.out_dir.join(PIPELINE_AUDIT_TXT).exists());
        let first = artifact_map(&cfg.out_dir);
        assert_eq!(first.len(), STAGE_ARTIFACTS.len());

        run_pipeline(&cfg).unwrap();
        let second = artifact_map(&cfg.out_dir);
        assert_eq!(first, second, "artifacts changed across identical runs");

        // No absolute paths leak into any artifact.
        let dir_text = dir.path().to_string_lossy().into_owned();
        for (name, bytes) in &first {
            let text = String::from_utf8_lossy(bytes);
            assert!(!text.contains(&dir_text), "{name} embeds an absolute path");
        }
    }

    #[test]
    fn stages_compose_to_the_full_run() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("input.csv");
        fs::write(&input, synthetic_csv()).unwrap();

        let full = config(input.clone(), dir.path().join("full"));
        run_pipeline(&full).unwrap();

        let staged = config(input, dir.path().join("staged"));
        for (_, stage) in STAGES {
            stage(&staged).unwrap();
        }

        let a = artifact_map(&full.out_dir);
        let b = artifact_map(&staged.out_dir);
        assert_eq!(a, b, "stage-by-stage run differs from the full run");
        // The audit log belongs to full runs only.
        assert!(!staged.out_dir.join(PIPELINE_AUDIT_TXT).exists());
    }

    #[test]
    fn stages_require_their_intermediates() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("input.csv");
        fs::write(&input, synthetic_csv()).unwrap();
        let cfg = config(input, dir.path().join("out"));
        match stage_efa(&cfg) {
            Err(Error::InvalidArgument(msg)) => {
                assert!(msg.contains(DATASET_CSV));
            }
            other => panic!("expected a missing-intermediate error, got {other:?}"),
        }
    }

    #[test]
    fn failed_stage_is_recorded_and_partials_retained() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("input.csv");
        fs::write(&input, synthetic_csv()).unwrap();
        let mut cfg = config(input, dir.path().join("out"));
        // Point extraction at a nonexistent item so the efa stage fails.
        cfg.efa_items = Some(vec!["a1".into(), "a2".into(), "ghost".into()]);
        let err = run_pipeline(&cfg).unwrap_err();
        assert!(matches!(err, Error::UnknownItem(ref name) if name == "ghost"));
        // Ingest artifacts survive; the audit names the failing stage.
        assert!(cfg.out_dir.join(DATASET_CSV).exists());
        let audit = fs::read_to_string(cfg.out_dir.join(PIPELINE_AUDIT_TXT)).unwrap();
        assert!(audit.contains("failed at stage efa"));
    }

    #[test]
    fn regress_with_unknown_scale_names_it() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("input.csv");
        fs::write(&input, synthetic_csv()).unwrap();
        let mut cfg = config(input, dir.path().join("out"));
        stage_ingest(&cfg).unwrap();
        stage_scales(&cfg).unwrap();
        // A model predictor that was never built as a scale column.
        cfg.regression.models[0].predictors.push("Ghost".into());
        match stage_regress(&cfg) {
            Err(Error::UnknownScale(name)) => assert_eq!(name, "Ghost"),
            other => panic!("expected UnknownScale, got {other:?}"),
        }
    }
}
