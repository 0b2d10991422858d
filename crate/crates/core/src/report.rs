//! Quadrant classification, hypothesis checks, and deterministic table
//! rendering (Markdown and CSV).
//!
//! Every renderer is a pure function from inputs to a `String`;
//! identical inputs produce byte-identical output. Statistics print
//! with three decimals, occupation-level scores with one.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::dataset::Occupation;
use crate::efa::FactorSolution;
use crate::error::{Error, Result};
use crate::regression::{RegressionResult, SignFlip, StepAction, StepwiseStep, VifEntry};
use crate::scales::{GateDecision, Gates, ReliabilityEntry};
use crate::statcore::{self, mean, sample_sd, CorrelationMatrix};

/// Box boundaries for the two-axis occupation chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrantThresholds {
    pub x_low: f64,
    pub x_high: f64,
    pub y_low: f64,
    pub y_high: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrant {
    LowLow,
    HighHigh,
    Unclassified,
}

/// One occupation's position and box assignment.
#[derive(Debug, Clone)]
pub struct QuadrantPoint {
    pub code: String,
    pub title: String,
    pub x: f64,
    pub y: f64,
    pub quadrant: Quadrant,
}

/// Classification of every occupation, in input order.
#[derive(Debug, Clone)]
pub struct QuadrantReport {
    pub x_name: String,
    pub y_name: String,
    pub thresholds: QuadrantThresholds,
    pub points: Vec<QuadrantPoint>,
}

impl QuadrantReport {
    pub fn low_low(&self) -> Vec<&QuadrantPoint> {
        self.points.iter().filter(|p| p.quadrant == Quadrant::LowLow).collect()
    }

    pub fn high_high(&self) -> Vec<&QuadrantPoint> {
        self.points.iter().filter(|p| p.quadrant == Quadrant::HighHigh).collect()
    }

    pub fn unclassified(&self) -> Vec<&QuadrantPoint> {
        self.points
            .iter()
            .filter(|p| p.quadrant == Quadrant::Unclassified)
            .collect()
    }
}

/// Assign each occupation to the low-low box, the high-high box, or
/// neither, using strict inequalities on both axes (points exactly on a
/// boundary stay unclassified).
///
/// Thresholds default to mean ± one sample standard deviation of each
/// axis; pass explicit thresholds to reproduce published boundaries.
pub fn quadrant_classify(
    occupations: &[Occupation],
    x: (&str, &[f64]),
    y: (&str, &[f64]),
    thresholds: Option<QuadrantThresholds>,
) -> Result<QuadrantReport> {
    let (x_name, xs) = x;
    let (y_name, ys) = y;
    if xs.len() != occupations.len() || ys.len() != occupations.len() {
        return Err(Error::InvalidArgument(format!(
            "axis lengths ({}, {}) do not match the {} occupations",
            xs.len(),
            ys.len(),
            occupations.len()
        )));
    }
    let thresholds = match thresholds {
        Some(t) => t,
        None => {
            if occupations.len() < 2 {
                return Err(Error::NotEnoughRows {
                    needed: 2,
                    got: occupations.len(),
                });
            }
            QuadrantThresholds {
                x_low: mean(xs) - sample_sd(xs),
                x_high: mean(xs) + sample_sd(xs),
                y_low: mean(ys) - sample_sd(ys),
                y_high: mean(ys) + sample_sd(ys),
            }
        }
    };
    if !(thresholds.x_low <= thresholds.x_high && thresholds.y_low <= thresholds.y_high) {
        return Err(Error::InvalidArgument(
            "quadrant thresholds must satisfy low <= high on both axes".to_string(),
        ));
    }
    let points = occupations
        .iter()
        .zip(xs.iter().zip(ys))
        .map(|(occ, (&xv, &yv))| {
            let quadrant = if xv < thresholds.x_low && yv < thresholds.y_low {
                Quadrant::LowLow
            } else if xv > thresholds.x_high && yv > thresholds.y_high {
                Quadrant::HighHigh
            } else {
                Quadrant::Unclassified
            };
            QuadrantPoint {
                code: occ.code.clone(),
                title: occ.title.clone(),
                x: xv,
                y: yv,
                quadrant,
            }
        })
        .collect();
    Ok(QuadrantReport {
        x_name: x_name.to_string(),
        y_name: y_name.to_string(),
        thresholds,
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Supported,
    Mixed,
    NotSupported,
    Unevaluable,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Supported => "Supported",
            Verdict::Mixed => "Mixed",
            Verdict::NotSupported => "NotSupported",
            Verdict::Unevaluable => "Unevaluable",
        }
    }
}

/// Which scales each directional hypothesis covers, and which scale the
/// strongest-predictor hypothesis names.
#[derive(Debug, Clone, Default)]
pub struct HypothesisSpec {
    pub h1_positive: Vec<String>,
    pub h2_negative: Vec<String>,
    pub h3_positive: Vec<String>,
    pub h4_strongest: Option<String>,
}

/// The pieces of a one-predictor fit the hypothesis rules consume.
#[derive(Debug, Clone)]
pub struct SimpleFitSummary {
    pub scale: String,
    pub r: f64,
    pub p: f64,
    pub adj_r_squared: f64,
}

/// One scale's contribution to a hypothesis verdict. For H1–H3,
/// `passed` means the correlation has the expected sign and is
/// significant; for H4 it marks the scale with the highest adjusted
/// R-squared.
#[derive(Debug, Clone)]
pub struct SubCheck {
    pub scale: String,
    pub r: f64,
    pub p: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct HypothesisOutcome {
    pub id: String,
    pub description: String,
    pub verdict: Verdict,
    pub checks: Vec<SubCheck>,
    pub note: Option<String>,
}

fn sign_hypothesis(
    id: &str,
    description: &str,
    scales: &[String],
    positive: bool,
    fits: &[SimpleFitSummary],
    alpha_level: f64,
) -> HypothesisOutcome {
    if scales.is_empty() {
        return HypothesisOutcome {
            id: id.to_string(),
            description: description.to_string(),
            verdict: Verdict::Unevaluable,
            checks: vec![],
            note: Some("no scales configured".to_string()),
        };
    }
    let mut checks = Vec::with_capacity(scales.len());
    for name in scales {
        match fits.iter().find(|f| &f.scale == name) {
            Some(fit) => {
                let sign_ok = if positive { fit.r > 0.0 } else { fit.r < 0.0 };
                checks.push(SubCheck {
                    scale: name.clone(),
                    r: fit.r,
                    p: fit.p,
                    passed: sign_ok && fit.p < alpha_level,
                });
            }
            None => {
                return HypothesisOutcome {
                    id: id.to_string(),
                    description: description.to_string(),
                    verdict: Verdict::Unevaluable,
                    checks: vec![],
                    note: Some(format!("no fitted result for scale '{name}'")),
                };
            }
        }
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let verdict = if passed == checks.len() {
        Verdict::Supported
    } else if passed == 0 {
        Verdict::NotSupported
    } else {
        Verdict::Mixed
    };
    HypothesisOutcome {
        id: id.to_string(),
        description: description.to_string(),
        verdict,
        checks,
        note: None,
    }
}

/// Evaluate the four hypothesis rules against one-predictor fits.
///
/// H1–H3 require the expected correlation sign plus two-tailed
/// significance below `alpha_level` for every listed scale (all pass →
/// Supported, none → NotSupported, otherwise Mixed). H4 asks whether
/// the named scale attains the maximal adjusted R-squared among all
/// supplied fits and correlates positively. A hypothesis whose scales
/// have no fitted result is Unevaluable.
pub fn evaluate_hypotheses(
    spec: &HypothesisSpec,
    fits: &[SimpleFitSummary],
    alpha_level: f64,
) -> Vec<HypothesisOutcome> {
    let mut outcomes = vec![
        sign_hypothesis(
            "H1",
            "positive association with the dependent scale",
            &spec.h1_positive,
            true,
            fits,
            alpha_level,
        ),
        sign_hypothesis(
            "H2",
            "negative association with the dependent scale",
            &spec.h2_negative,
            false,
            fits,
            alpha_level,
        ),
        sign_hypothesis(
            "H3",
            "positive association with the dependent scale",
            &spec.h3_positive,
            true,
            fits,
            alpha_level,
        ),
    ];

    let h4 = match &spec.h4_strongest {
        None => HypothesisOutcome {
            id: "H4".to_string(),
            description: "strongest single predictor".to_string(),
            verdict: Verdict::Unevaluable,
            checks: vec![],
            note: Some("no target scale configured".to_string()),
        },
        Some(target) if fits.is_empty() => HypothesisOutcome {
            id: "H4".to_string(),
            description: "strongest single predictor".to_string(),
            verdict: Verdict::Unevaluable,
            checks: vec![],
            note: Some(format!("no fitted results to rank for '{target}'")),
        },
        Some(target) => {
            let winner = fits
                .iter()
                .enumerate()
                .max_by(|(ia, a), (ib, b)| {
                    a.adj_r_squared
                        .partial_cmp(&b.adj_r_squared)
                        .unwrap_or(std::cmp::Ordering::Equal)
                        // Ties resolve to the earlier fit.
                        .then(ib.cmp(ia))
                })
                .map(|(_, f)| f)
                .unwrap();
            let supported = &winner.scale == target && winner.r > 0.0;
            let checks = fits
                .iter()
                .map(|f| SubCheck {
                    scale: f.scale.clone(),
                    r: f.r,
                    p: f.p,
                    passed: f.scale == winner.scale,
                })
                .collect();
            HypothesisOutcome {
                id: "H4".to_string(),
                description: "strongest single predictor".to_string(),
                verdict: if supported {
                    Verdict::Supported
                } else {
                    Verdict::NotSupported
                },
                checks,
                note: Some(format!(
                    "expected {target}; strongest observed {} (adjusted R^2 = {})",
                    winner.scale,
                    fmt3(winner.adj_r_squared)
                )),
            }
        }
    };
    outcomes.push(h4);
    outcomes
}

/// Two-tailed p-value cutoffs for significance stars.
#[derive(Debug, Clone, Copy)]
pub struct StarLevels {
    pub five: f64,
    pub one: f64,
}

impl Default for StarLevels {
    fn default() -> Self {
        StarLevels { five: 0.05, one: 0.01 }
    }
}

/// "**" below the stricter level, "*" below the looser one, else "".
/// Comparisons are strict, so p exactly at a level earns no star.
pub fn star(p: f64, levels: &StarLevels) -> &'static str {
    if p < levels.one {
        "**"
    } else if p < levels.five {
        "*"
    } else {
        ""
    }
}

/// Three-decimal rendering; negative zero normalizes to "0.000" and
/// non-finite values render empty.
pub fn fmt3(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

/// One-decimal rendering for occupation-level scores; same
/// negative-zero and non-finite handling as [`fmt3`].
pub fn fmt1(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    let s = format!("{x:.1}");
    if s == "-0.0" {
        "0.0".to_string()
    } else {
        s
    }
}

fn p_label(p: f64) -> String {
    if !p.is_finite() {
        "p not defined".to_string()
    } else if p < 0.001 {
        "p < 0.001".to_string()
    } else {
        format!("p = {}", fmt3(p))
    }
}

fn item_label(item: &str, marks: &BTreeMap<String, Vec<String>>) -> String {
    match marks.get(item) {
        Some(ms) if !ms.is_empty() => {
            let suffix: String = ms.iter().map(|m| format!(" ({m})")).collect();
            format!("{item}{suffix}")
        }
        _ => item.to_string(),
    }
}

/// Markdown loadings table: one row per item, one column per factor,
/// a communality column, and bold-italic emphasis on loadings whose
/// magnitude is at or above `emphasis_cutoff`. `marks` appends
/// overlap annotations like "(T)" to item labels.
pub fn render_loadings_md(
    solution: &FactorSolution,
    marks: &BTreeMap<String, Vec<String>>,
    emphasis_cutoff: f64,
) -> String {
    let m = solution.retained_factor_count;
    let mut out = String::new();
    out.push_str("# Rotated factor loadings\n\n");
    out.push_str("| Item |");
    for f in 1..=m {
        let _ = write!(out, " F{f} |");
    }
    out.push_str(" Communality |\n| --- |");
    for _ in 0..m {
        out.push_str(" ---: |");
    }
    out.push_str(" ---: |\n");
    for (i, item) in solution.loadings.items.iter().enumerate() {
        let _ = write!(out, "| {} |", item_label(item, marks));
        for f in 0..m {
            let v = solution.loadings.values[(i, f)];
            if v.abs() >= emphasis_cutoff {
                let _ = write!(out, " ***{}*** |", fmt3(v));
            } else {
                let _ = write!(out, " {} |", fmt3(v));
            }
        }
        let _ = write!(out, " {} |\n", fmt3(solution.communalities[i]));
    }
    out.push('\n');
    let _ = writeln!(
        out,
        "Loadings with magnitude at or above {} are emphasized.",
        fmt3(emphasis_cutoff)
    );
    out
}

/// CSV loadings table: item, overlap marks, per-factor loadings, and
/// communality, three decimals throughout.
pub fn render_loadings_csv(
    solution: &FactorSolution,
    marks: &BTreeMap<String, Vec<String>>,
) -> Result<String> {
    let m = solution.retained_factor_count;
    let mut w = csv::Writer::from_writer(vec![]);
    let mut header = vec!["item".to_string(), "marks".to_string()];
    for f in 1..=m {
        header.push(format!("F{f}"));
    }
    header.push("communality".to_string());
    w.write_record(&header)?;
    for (i, item) in solution.loadings.items.iter().enumerate() {
        let mut record = vec![
            item.clone(),
            marks.get(item).map(|ms| ms.join(",")).unwrap_or_default(),
        ];
        for f in 0..m {
            record.push(fmt3(solution.loadings.values[(i, f)]));
        }
        record.push(fmt3(solution.communalities[i]));
        w.write_record(&record)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Per-pass audit of the prune-and-refit loop, plus a summary of the
/// final solution.
pub fn render_efa_audit(solution: &FactorSolution) -> String {
    let mut out = String::new();
    out.push_str("# Factor extraction audit\n\n");
    for (i, pass) in solution.iterations.iter().enumerate() {
        let _ = writeln!(
            out,
            "Pass {}: {} items, {} factors retained",
            i + 1,
            pass.items.len(),
            pass.retained_factors
        );
        let eigen: Vec<String> = pass.unreduced_eigenvalues.iter().map(|&v| fmt3(v)).collect();
        let _ = writeln!(out, "  eigenvalues: {}", eigen.join(" "));
        if pass.dropped_low.is_empty() && pass.dropped_cross.is_empty() {
            out.push_str("  no drops; fixed point reached\n");
        } else {
            if !pass.dropped_low.is_empty() {
                let _ = writeln!(out, "  dropped (weak loading): {}", pass.dropped_low.join("; "));
            }
            if !pass.dropped_cross.is_empty() {
                let _ = writeln!(out, "  dropped (cross-loading): {}", pass.dropped_cross.join("; "));
            }
        }
    }
    out.push('\n');
    let _ = writeln!(
        out,
        "Final solution: {} factors over {} items",
        solution.retained_factor_count,
        solution.loadings.items.len()
    );
    let _ = writeln!(
        out,
        "Principal-axis iterations: {} ({})",
        solution.paf_iterations,
        if solution.paf_converged { "converged" } else { "iteration cap reached" }
    );
    if solution.heywood_items.is_empty() {
        out.push_str("Heywood cases: none\n");
    } else {
        let _ = writeln!(out, "Heywood cases (communality clamped): {}", solution.heywood_items.join("; "));
    }
    let ev: Vec<String> = solution
        .loadings
        .explained_variance()
        .iter()
        .map(|&v| fmt3(v))
        .collect();
    let _ = writeln!(out, "Explained variance by factor: {}", ev.join(" "));
    out
}

/// One variable's row in the descriptives table.
#[derive(Debug, Clone)]
pub struct DescriptiveRow {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
    /// None for single-item scales, where alpha is undefined.
    pub alpha: Option<f64>,
}

/// Markdown descriptives table: mean, SD, alpha, and the
/// lower-triangle correlation matrix with significance stars. Row
/// order must match the variable order of `corr`.
pub fn render_descriptives_md(
    rows: &[DescriptiveRow],
    corr: &CorrelationMatrix,
    stars: &StarLevels,
) -> Result<String> {
    let k = rows.len();
    let mut out = String::new();
    out.push_str("# Descriptive statistics and correlations\n\n");
    out.push_str("| # | Variable | Mean | SD | Alpha |");
    for j in 1..k {
        let _ = write!(out, " {j} |");
    }
    out.push_str("\n| ---: | --- | ---: | ---: | ---: |");
    for _ in 1..k {
        out.push_str(" ---: |");
    }
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        let idx = corr
            .index_of(&row.name)
            .ok_or_else(|| Error::UnknownScale(row.name.clone()))?;
        let alpha = row.alpha.map(fmt3).unwrap_or_default();
        let _ = write!(
            out,
            "| {} | {} | {} | {} | {} |",
            i + 1,
            row.name,
            fmt3(row.mean),
            fmt3(row.sd),
            alpha
        );
        for earlier in rows.iter().take(i) {
            let jdx = corr
                .index_of(&earlier.name)
                .ok_or_else(|| Error::UnknownScale(earlier.name.clone()))?;
            let r = corr.r(idx, jdx);
            let p = statcore::p_value_r(r, corr.n)?;
            let _ = write!(out, " {}{} |", fmt3(r), star(p, stars));
        }
        for _ in i.max(1)..k {
            out.push_str("  |");
        }
        out.push('\n');
    }
    out.push('\n');
    let _ = writeln!(out, "n = {}. * p < {}, ** p < {}.", corr.n, stars.five, stars.one);
    Ok(out)
}

/// CSV companion to the descriptives table: index, variable, mean, SD,
/// alpha (blank when undefined).
pub fn render_descriptives_csv(rows: &[DescriptiveRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["index", "variable", "mean", "sd", "alpha"])?;
    for (i, row) in rows.iter().enumerate() {
        w.write_record(&[
            (i + 1).to_string(),
            row.name.clone(),
            fmt3(row.mean),
            fmt3(row.sd),
            row.alpha.map(fmt3).unwrap_or_default(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Long-form correlation export: every lower-triangle pair with r,
/// two-tailed p, and stars.
pub fn render_correlations_csv(corr: &CorrelationMatrix, stars: &StarLevels) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["variable_a", "variable_b", "r", "p", "stars"])?;
    for i in 1..corr.dim() {
        for j in 0..i {
            let r = corr.r(i, j);
            let p = statcore::p_value_r(r, corr.n)?;
            w.write_record(&[
                corr.names[i].clone(),
                corr.names[j].clone(),
                fmt3(r),
                fmt3(p),
                star(p, stars).to_string(),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// How a combined model chose its predictors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelMethodLabel {
    Stepwise,
    Enter,
}

impl ModelMethodLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelMethodLabel::Stepwise => "stepwise",
            ModelMethodLabel::Enter => "enter",
        }
    }
}

/// A fitted combined model plus its diagnostics, ready to render.
#[derive(Debug, Clone)]
pub struct ModelReport {
    pub name: String,
    pub method: ModelMethodLabel,
    /// Candidates offered to the model, in config order.
    pub candidates: Vec<String>,
    pub fit: RegressionResult,
    /// Entry/removal trace; empty for forced-entry models.
    pub steps: Vec<StepwiseStep>,
    pub vif: Vec<VifEntry>,
    pub sign_flips: Vec<SignFlip>,
}

fn combined_rows(models: &[ModelReport]) -> Vec<String> {
    let mut rows: Vec<String> = Vec::new();
    for model in models {
        for c in &model.candidates {
            if !rows.contains(c) {
                rows.push(c.clone());
            }
        }
    }
    rows
}

/// Markdown regression report: the one-predictor table, the combined
/// models side by side ("-" marks a predictor that was not a
/// candidate, an empty cell one that was offered but not selected),
/// stepwise traces, and collinearity diagnostics.
pub fn render_regressions_md(
    dependent: &str,
    simple: &[RegressionResult],
    models: &[ModelReport],
    stars: &StarLevels,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Regressions on {dependent}\n");
    out.push_str("## Single-predictor fits\n\n");
    out.push_str("| Predictor | Beta | R^2 | Adj. R^2 | F |\n");
    out.push_str("| --- | ---: | ---: | ---: | ---: |\n");
    for fit in simple.iter().filter(|f| f.p_count() == 1) {
        let _ = writeln!(
            out,
            "| {} | {}{} | {} | {} | {}{} |",
            fit.predictors[0],
            fmt3(fit.beta[0]),
            star(fit.p_values[0], stars),
            fmt3(fit.r_squared),
            fmt3(fit.adj_r_squared),
            fmt3(fit.f_stat),
            star(fit.f_p, stars),
        );
    }
    out.push('\n');

    out.push_str("## Combined models\n\n");
    if models.is_empty() {
        out.push_str("(none configured)\n");
        return out;
    }
    out.push_str("| Predictor |");
    for model in models {
        let _ = write!(out, " {} |", model.name);
    }
    out.push_str("\n| --- |");
    for _ in models {
        out.push_str(" ---: |");
    }
    out.push('\n');
    for row in combined_rows(models) {
        let _ = write!(out, "| {row} |");
        for model in models {
            if !model.candidates.contains(&row) {
                out.push_str(" - |");
            } else {
                match model.fit.coefficient(&row) {
                    Some((beta, p)) => {
                        let _ = write!(out, " {}{} |", fmt3(beta), star(p, stars));
                    }
                    None => out.push_str("  |"),
                }
            }
        }
        out.push('\n');
    }
    for (label, pick) in [
        ("R^2", 0usize),
        ("Adj. R^2", 1),
        ("F", 2),
    ] {
        let _ = write!(out, "| {label} |");
        for model in models {
            let cell = match pick {
                0 => fmt3(model.fit.r_squared),
                1 => fmt3(model.fit.adj_r_squared),
                _ => format!("{}{}", fmt3(model.fit.f_stat), star(model.fit.f_p, stars)),
            };
            let _ = write!(out, " {cell} |");
        }
        out.push('\n');
    }
    out.push('\n');
    out.push_str("\"-\": not offered to the model; empty: offered but not selected.\n\n");

    for model in models {
        let _ = writeln!(out, "### {} ({})", model.name, model.method.as_str());
        if !model.steps.is_empty() {
            for (i, step) in model.steps.iter().enumerate() {
                let verb = match step.action {
                    StepAction::Enter => "entered",
                    StepAction::Remove => "removed",
                };
                let _ = writeln!(
                    out,
                    "- Step {}: {verb} {} ({}, R^2 = {})",
                    i + 1,
                    step.predictor,
                    p_label(step.p_value),
                    fmt3(step.r_squared_after)
                );
            }
        }
        if model.fit.predictors.is_empty() {
            out.push_str("- No predictors selected.\n");
        } else {
            let vifs: Vec<String> = model
                .vif
                .iter()
                .map(|v| {
                    let value = if v.vif.is_finite() {
                        fmt3(v.vif)
                    } else {
                        "inf".to_string()
                    };
                    if v.flagged {
                        format!("{} {} (high)", v.predictor, value)
                    } else {
                        format!("{} {}", v.predictor, value)
                    }
                })
                .collect();
            if !vifs.is_empty() {
                let _ = writeln!(out, "- VIF: {}", vifs.join(", "));
            }
            if model.sign_flips.is_empty() {
                out.push_str("- Sign flips: none\n");
            } else {
                let flips: Vec<String> = model
                    .sign_flips
                    .iter()
                    .map(|f| {
                        format!(
                            "{} (simple r = {}, beta = {})",
                            f.predictor,
                            fmt3(f.simple_r),
                            fmt3(f.beta)
                        )
                    })
                    .collect();
                let _ = writeln!(out, "- Sign flips: {}", flips.join(", "));
            }
        }
        out.push('\n');
    }
    out
}

/// Long-form CSV of every fit: one row per simple fit, one row per
/// model/candidate pair, and a summary row per model.
pub fn render_regressions_csv(
    dependent: &str,
    simple: &[RegressionResult],
    models: &[ModelReport],
) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record([
        "model",
        "dependent",
        "term",
        "role",
        "beta",
        "p",
        "r_squared",
        "adj_r_squared",
        "f",
        "f_p",
        "n",
    ])?;
    for fit in simple.iter().filter(|f| f.p_count() == 1) {
        w.write_record(&[
            "simple".to_string(),
            dependent.to_string(),
            fit.predictors[0].clone(),
            "selected".to_string(),
            fmt3(fit.beta[0]),
            fmt3(fit.p_values[0]),
            fmt3(fit.r_squared),
            fmt3(fit.adj_r_squared),
            fmt3(fit.f_stat),
            fmt3(fit.f_p),
            fit.n.to_string(),
        ])?;
    }
    for model in models {
        for candidate in &model.candidates {
            let (role, beta, p) = match model.fit.coefficient(candidate) {
                Some((beta, p)) => ("selected", fmt3(beta), fmt3(p)),
                None => ("not_selected", String::new(), String::new()),
            };
            w.write_record(&[
                model.name.clone(),
                dependent.to_string(),
                candidate.clone(),
                role.to_string(),
                beta,
                p,
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ])?;
        }
        w.write_record(&[
            model.name.clone(),
            dependent.to_string(),
            String::new(),
            "summary".to_string(),
            String::new(),
            String::new(),
            fmt3(model.fit.r_squared),
            fmt3(model.fit.adj_r_squared),
            fmt3(model.fit.f_stat),
            fmt3(model.fit.f_p),
            model.fit.n.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// CSV of every occupation with axis scores (one decimal) and box
/// assignment.
pub fn render_quadrants_csv(report: &QuadrantReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["code", "title", report.x_name.as_str(), report.y_name.as_str(), "quadrant"])?;
    for p in &report.points {
        let label = match p.quadrant {
            Quadrant::LowLow => "low_low",
            Quadrant::HighHigh => "high_high",
            Quadrant::Unclassified => "",
        };
        w.write_record(&[
            p.code.clone(),
            p.title.clone(),
            fmt1(p.x),
            fmt1(p.y),
            label.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Plot-ready export: occupation code and the two axis scores.
pub fn render_scatter_csv(report: &QuadrantReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["code", report.x_name.as_str(), report.y_name.as_str()])?;
    for p in &report.points {
        w.write_record(&[p.code.clone(), fmt1(p.x), fmt1(p.y)])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Markdown membership lists for the two boxes, sorted by title for
/// stable output.
pub fn render_quadrants_md(report: &QuadrantReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Occupations by {} / {} box\n", report.x_name, report.y_name);
    let t = &report.thresholds;
    let _ = writeln!(
        out,
        "Low box: {} < {} and {} < {}. High box: {} > {} and {} > {}.\n",
        report.x_name,
        fmt1(t.x_low),
        report.y_name,
        fmt1(t.y_low),
        report.x_name,
        fmt1(t.x_high),
        report.y_name,
        fmt1(t.y_high)
    );
    for (heading, mut members) in [
        ("## Low on both axes", report.low_low()),
        ("## High on both axes", report.high_high()),
    ] {
        members.sort_by(|a, b| a.title.cmp(&b.title).then(a.code.cmp(&b.code)));
        let _ = writeln!(out, "{heading} ({})\n", members.len());
        out.push_str("| Occupation | ");
        let _ = write!(out, "{} | {} |\n", report.x_name, report.y_name);
        out.push_str("| --- | ---: | ---: |\n");
        for p in members {
            let _ = writeln!(out, "| {} | {} | {} |", p.title, fmt1(p.x), fmt1(p.y));
        }
        out.push('\n');
    }
    out
}

/// Markdown summary of hypothesis verdicts with per-scale detail.
pub fn render_hypotheses_md(outcomes: &[HypothesisOutcome]) -> String {
    let mut out = String::new();
    out.push_str("# Hypothesis checks\n\n");
    for o in outcomes {
        let _ = writeln!(out, "## {} ({}): {}", o.id, o.description, o.verdict.label());
        if let Some(note) = &o.note {
            let _ = writeln!(out, "{note}");
        }
        if o.id != "H4" {
            for c in &o.checks {
                let _ = writeln!(
                    out,
                    "- {}: r = {} ({}) — {}",
                    c.scale,
                    fmt3(c.r),
                    p_label(c.p),
                    if c.passed { "pass" } else { "fail" }
                );
            }
        }
        out.push('\n');
    }
    out
}

/// Plain-text reliability report with gate outcomes and alternates.
pub fn render_reliability(entries: &[ReliabilityEntry], gates: &Gates) -> String {
    let describe = |decision: GateDecision, alpha: Option<f64>, items: usize| -> String {
        match decision {
            GateDecision::SingleItem => {
                format!("({items} item) alpha not defined (single item)")
            }
            GateDecision::Fail => format!(
                "({} items) alpha = {} — fail (alpha < {:.2})",
                items,
                alpha.map(fmt3).unwrap_or_default(),
                gates.lenient
            ),
            GateDecision::LenientOnly => format!(
                "({} items) alpha = {} — lenient only ({:.2} <= alpha < {:.2})",
                items,
                alpha.map(fmt3).unwrap_or_default(),
                gates.lenient,
                gates.strict
            ),
            GateDecision::Pass => format!(
                "({} items) alpha = {} — pass (alpha >= {:.2})",
                items,
                alpha.map(fmt3).unwrap_or_default(),
                gates.strict
            ),
        }
    };
    let mut out = String::new();
    out.push_str("# Scale reliability\n\n");
    for e in entries {
        let _ = writeln!(out, "{}: {}", e.scale, describe(e.decision, e.alpha, e.item_count));
        if let Some((items, alpha, decision)) = &e.alternate {
            let _ = writeln!(out, "  alternate {}", describe(*decision, *alpha, *items));
        }
    }
    out
}
