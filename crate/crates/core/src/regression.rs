//! Ordinary least squares on standardized variables, stepwise predictor
//! selection, and collinearity diagnostics.
//!
//! All variables are z-scored (sample standard deviation) before the
//! solve, so coefficients are standardized betas and a one-predictor
//! fit's beta coincides with the Pearson correlation. The solve itself
//! is QR-based; the normal-equations route exists only as an oracle in
//! the tests.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::statcore::{self, mean, sample_sd};

/// A fitted model on standardized variables.
#[derive(Debug, Clone)]
pub struct RegressionResult {
    pub dependent: String,
    pub predictors: Vec<String>,
    /// Standardized coefficients, matching `predictors`.
    pub beta: Vec<f64>,
    pub r_squared: f64,
    /// 1 - (1 - R^2)(n - 1)/(n - p - 1), recomputable from the stored
    /// pieces.
    pub adj_r_squared: f64,
    /// (R^2/p) / ((1 - R^2)/(n - p - 1)); NaN for an empty model.
    pub f_stat: f64,
    pub f_p: f64,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    pub n: usize,
}

impl RegressionResult {
    pub fn p_count(&self) -> usize {
        self.predictors.len()
    }

    /// Beta (and its p-value) for a named predictor, if present.
    pub fn coefficient(&self, predictor: &str) -> Option<(f64, f64)> {
        self.predictors
            .iter()
            .position(|p| p == predictor)
            .map(|i| (self.beta[i], self.p_values[i]))
    }
}

fn standardize(name: &str, col: &[f64]) -> Result<Vec<f64>> {
    let sd = sample_sd(col);
    if !(sd > 0.0) {
        return Err(Error::ZeroVariance(name.to_string()));
    }
    let m = mean(col);
    Ok(col.iter().map(|v| (v - m) / sd).collect())
}

/// Fit `dependent ~ predictors` on z-scored columns.
///
/// Needs n >= p + 2 rows so at least one residual degree of freedom
/// remains. Linearly dependent predictor columns are rejected with the
/// offending columns named. An empty predictor list is allowed (the
/// stepwise loop can end empty) and yields R^2 = 0 with NaN F.
pub fn ols_fit(dependent: (&str, &[f64]), predictors: &[(&str, &[f64])]) -> Result<RegressionResult> {
    let (y_name, y_raw) = dependent;
    let n = y_raw.len();
    let p = predictors.len();
    if n < p + 2 {
        return Err(Error::NotEnoughRows { needed: p + 2, got: n });
    }
    for (name, col) in predictors {
        if col.len() != n {
            return Err(Error::InvalidArgument(format!(
                "predictor '{name}' has {} rows, dependent has {n}",
                col.len()
            )));
        }
    }
    let y = DVector::from_vec(standardize(y_name, y_raw)?);

    if p == 0 {
        return Ok(RegressionResult {
            dependent: y_name.to_string(),
            predictors: vec![],
            beta: vec![],
            r_squared: 0.0,
            adj_r_squared: 1.0 - (n - 1) as f64 / (n - 1) as f64,
            f_stat: f64::NAN,
            f_p: f64::NAN,
            t_stats: vec![],
            p_values: vec![],
            n,
        });
    }

    let mut cols = Vec::with_capacity(p);
    for (name, col) in predictors {
        cols.push(standardize(name, col)?);
    }
    let x = DMatrix::from_fn(n, p, |i, j| cols[j][i]);

    let qr = x.clone().qr();
    let r = qr.r();
    let tol = 1e-10 * ((n - 1) as f64).sqrt();
    let dependent_cols: Vec<String> = (0..p)
        .filter(|&j| r[(j, j)].abs() <= tol)
        .map(|j| predictors[j].0.to_string())
        .collect();
    if !dependent_cols.is_empty() {
        return Err(Error::RankDeficient {
            columns: dependent_cols,
        });
    }
    let qty = qr.q().transpose() * &y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::RankDeficient { columns: vec![] })?;

    let resid = &y - &x * &beta;
    let rss = resid.norm_squared();
    let tss = y.norm_squared();
    let df = n - p - 1;
    let r_squared = (1.0 - rss / tss).clamp(0.0, 1.0);
    let adj_r_squared = 1.0 - (1.0 - r_squared) * (n - 1) as f64 / df as f64;
    let f_stat = (r_squared / p as f64) / ((1.0 - r_squared) / df as f64);
    let f_p = statcore::p_value_f(f_stat, p, df)?;

    let sigma2 = rss / df as f64;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or_else(|| Error::RankDeficient { columns: vec![] })?;
    let mut t_stats = Vec::with_capacity(p);
    let mut p_values = Vec::with_capacity(p);
    for j in 0..p {
        // (X^T X)^-1 diagonal via the row norms of R^-1.
        let d: f64 = (0..p).map(|k| r_inv[(j, k)] * r_inv[(j, k)]).sum();
        let se = (sigma2 * d).sqrt();
        let t = if se > 0.0 {
            beta[j] / se
        } else if beta[j] == 0.0 {
            0.0
        } else {
            f64::INFINITY * beta[j].signum()
        };
        t_stats.push(t);
        p_values.push(statcore::p_value_t(t, df)?);
    }

    Ok(RegressionResult {
        dependent: y_name.to_string(),
        predictors: predictors.iter().map(|(n, _)| (*n).to_string()).collect(),
        beta: beta.iter().copied().collect(),
        r_squared,
        adj_r_squared,
        f_stat,
        f_p,
        t_stats,
        p_values,
        n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepAction {
    Enter,
    Remove,
}

/// One action of the stepwise loop, for the selection trace.
#[derive(Debug, Clone)]
pub struct StepwiseStep {
    pub action: StepAction,
    pub predictor: String,
    /// Partial-F p-value that triggered the action.
    pub p_value: f64,
    /// Model R^2 after the action.
    pub r_squared_after: f64,
}

/// Final stepwise model plus the trace that produced it.
#[derive(Debug, Clone)]
pub struct StepwiseOutcome {
    pub fit: RegressionResult,
    pub steps: Vec<StepwiseStep>,
    /// Selected predictors in entry order.
    pub selected: Vec<String>,
}

/// Forward stepwise selection with backward removal.
///
/// Each round fits every out-of-model candidate alongside the current
/// model and enters the one with the smallest partial-F p-value if it is
/// at or below `entry_p` (ties resolve to the earlier candidate). After
/// an entry, in-model predictors with p-values at or above `removal_p`
/// are removed worst-first (the predictor entered in the same round is
/// exempt, which prevents enter/remove cycles when the thresholds
/// touch). The loop stops when no entry qualifies. Requires
/// 0 < entry_p <= removal_p <= 1.
pub fn stepwise_select(
    dependent: (&str, &[f64]),
    candidates: &[(&str, &[f64])],
    entry_p: f64,
    removal_p: f64,
) -> Result<StepwiseOutcome> {
    if !(entry_p > 0.0 && entry_p <= removal_p && removal_p <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "stepwise thresholds must satisfy 0 < entry <= removal <= 1, got ({entry_p}, {removal_p})"
        )));
    }
    let mut in_model: Vec<usize> = Vec::new();
    let mut steps: Vec<StepwiseStep> = Vec::new();
    let max_rounds = 2 * candidates.len() + 10;

    for _ in 0..max_rounds {
        // Entry: best candidate by partial-F p-value.
        let mut best: Option<(usize, f64, f64)> = None;
        for (j, candidate) in candidates.iter().enumerate() {
            if in_model.contains(&j) {
                continue;
            }
            let mut trial: Vec<(&str, &[f64])> =
                in_model.iter().map(|&k| candidates[k]).collect();
            trial.push(*candidate);
            let fit = match ols_fit(dependent, &trial) {
                Ok(fit) => fit,
                // A candidate collinear with the current model can never
                // enter; skip it.
                Err(Error::RankDeficient { .. }) => continue,
                Err(e) => return Err(e),
            };
            let p = fit.p_values[trial.len() - 1];
            if best.map_or(true, |(_, bp, _)| p < bp) {
                best = Some((j, p, fit.r_squared));
            }
        }
        let entered = match best {
            Some((j, p, r2)) if p <= entry_p => {
                in_model.push(j);
                steps.push(StepwiseStep {
                    action: StepAction::Enter,
                    predictor: candidates[j].0.to_string(),
                    p_value: p,
                    r_squared_after: r2,
                });
                Some(j)
            }
            _ => None,
        };
        if entered.is_none() {
            break;
        }

        // Removal: drop the worst violator until none remain.
        loop {
            if in_model.len() < 2 {
                break;
            }
            let model: Vec<(&str, &[f64])> = in_model.iter().map(|&k| candidates[k]).collect();
            let fit = ols_fit(dependent, &model)?;
            let mut worst: Option<(usize, f64)> = None;
            for (pos, &j) in in_model.iter().enumerate() {
                if Some(j) == entered {
                    continue;
                }
                let p = fit.p_values[pos];
                if worst.map_or(true, |(_, wp)| p > wp) {
                    worst = Some((pos, p));
                }
            }
            match worst {
                Some((pos, p)) if p >= removal_p => {
                    let j = in_model.remove(pos);
                    let remaining: Vec<(&str, &[f64])> =
                        in_model.iter().map(|&k| candidates[k]).collect();
                    let after = ols_fit(dependent, &remaining)?;
                    steps.push(StepwiseStep {
                        action: StepAction::Remove,
                        predictor: candidates[j].0.to_string(),
                        p_value: p,
                        r_squared_after: after.r_squared,
                    });
                }
                _ => break,
            }
        }
    }

    let model: Vec<(&str, &[f64])> = in_model.iter().map(|&k| candidates[k]).collect();
    let fit = ols_fit(dependent, &model)?;
    Ok(StepwiseOutcome {
        selected: in_model.iter().map(|&k| candidates[k].0.to_string()).collect(),
        fit,
        steps,
    })
}

/// Variance inflation factor of one predictor against the rest.
#[derive(Debug, Clone)]
pub struct VifEntry {
    pub predictor: String,
    /// 1 / (1 - R^2 of this predictor on the others); infinite when the
    /// predictor is an exact linear combination of the rest.
    pub vif: f64,
    /// True when the VIF exceeds 10.
    pub flagged: bool,
}

/// VIF for every predictor in the set. A lone predictor has VIF 1.
pub fn vif(predictors: &[(&str, &[f64])]) -> Result<Vec<VifEntry>> {
    let mut entries = Vec::with_capacity(predictors.len());
    for (j, &(name, col)) in predictors.iter().enumerate() {
        let others: Vec<(&str, &[f64])> = predictors
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, &pair)| pair)
            .collect();
        let value = if others.is_empty() {
            1.0
        } else {
            match ols_fit((name, col), &others) {
                Ok(fit) => {
                    let remainder = 1.0 - fit.r_squared;
                    if remainder <= 1e-12 {
                        f64::INFINITY
                    } else {
                        1.0 / remainder
                    }
                }
                Err(Error::RankDeficient { .. }) => f64::INFINITY,
                Err(e) => return Err(e),
            }
        };
        entries.push(VifEntry {
            predictor: name.to_string(),
            vif: value,
            flagged: value > 10.0,
        });
    }
    Ok(entries)
}

/// A multiple-regression coefficient whose sign opposes the predictor's
/// simple correlation with the dependent — the classic collinearity
/// symptom worth flagging alongside VIF.
#[derive(Debug, Clone)]
pub struct SignFlip {
    pub predictor: String,
    pub simple_r: f64,
    pub beta: f64,
}

/// Compare each fitted coefficient against the simple correlation of
/// the same predictor (by name) and report strict sign oppositions.
pub fn sign_flips(fit: &RegressionResult, simple_r: &[(String, f64)]) -> Vec<SignFlip> {
    fit.predictors
        .iter()
        .zip(&fit.beta)
        .filter_map(|(name, &beta)| {
            simple_r
                .iter()
                .find(|(n, _)| n == name)
                .and_then(|&(_, r)| {
                    if r * beta < 0.0 {
                        Some(SignFlip {
                            predictor: name.clone(),
                            simple_r: r,
                            beta,
                        })
                    } else {
                        None
                    }
                })
        })
        .collect()
}
