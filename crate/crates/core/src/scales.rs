//! Scale construction and reliability gating.
//!
//! A scale is an unweighted mean of its item columns, optionally
//! reverse-coded as `100 - mean` for indices where a high raw score
//! means the opposite of the construct. Reliability is Cronbach's alpha
//! over the raw item columns (reversal flips every item together, which
//! leaves alpha unchanged), gated at the conventional 0.7 level with a
//! lenient 0.6 fallback; scales clearing only the fallback are marked
//! provisional and may carry an alternate definition.

use crate::dataset::{Occupation, Table};
use crate::error::{Error, Result};
use crate::statcore::{self, AlphaReport};

/// How item scores combine into the scale score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Plain unweighted mean of the items.
    Mean,
    /// 100 minus the unweighted mean (reverse-coded composite).
    HundredMinusMean,
}

#[derive(Debug, Clone)]
pub struct ScaleDefinition {
    pub name: String,
    pub items: Vec<String>,
    pub direction: Direction,
}

/// Per-occupation scale scores plus the definition and reliability they
/// came from. `alpha` is `None` for single-item scales, where it is
/// undefined.
#[derive(Debug, Clone)]
pub struct ScaleScores {
    pub definition: ScaleDefinition,
    pub scores: Vec<f64>,
    pub alpha: Option<AlphaReport>,
}

/// Build one scale over the table.
///
/// Scores are the per-row unweighted item mean (or 100 minus it), so
/// they stay within [0, 100]. A single-item scale reproduces its item
/// column exactly and carries no alpha.
pub fn build_scale(table: &Table, definition: &ScaleDefinition) -> Result<ScaleScores> {
    if definition.items.is_empty() {
        return Err(Error::Config(format!(
            "scale '{}' has no items",
            definition.name
        )));
    }
    let view = table.view(&definition.items)?;
    let k = view.len() as f64;
    let scores: Vec<f64> = (0..table.n_rows())
        .map(|i| {
            let mean = view.iter().map(|(_, col)| col[i]).sum::<f64>() / k;
            match definition.direction {
                Direction::Mean => mean,
                Direction::HundredMinusMean => 100.0 - mean,
            }
        })
        .collect();
    let alpha = if view.len() >= 2 {
        Some(statcore::cronbach_alpha(&view)?)
    } else {
        None
    };
    Ok(ScaleScores {
        definition: definition.clone(),
        scores,
        alpha,
    })
}

/// Convenience constructor for a reverse-coded composite index:
/// `100 - mean(items)`.
pub fn composite_reverse_index(table: &Table, name: &str, items: &[String]) -> Result<ScaleScores> {
    build_scale(
        table,
        &ScaleDefinition {
            name: name.to_string(),
            items: items.to_vec(),
            direction: Direction::HundredMinusMean,
        },
    )
}

/// Alpha gate thresholds. Defaults follow the usual conventions:
/// 0.7 to pass outright, 0.6 as the lenient floor.
#[derive(Debug, Clone, Copy)]
pub struct Gates {
    pub lenient: f64,
    pub strict: f64,
}

impl Default for Gates {
    fn default() -> Self {
        Gates {
            lenient: 0.6,
            strict: 0.7,
        }
    }
}

/// Outcome of gating a scale's alpha.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateDecision {
    /// Single-item scale: alpha undefined.
    SingleItem,
    /// alpha below the lenient gate.
    Fail,
    /// alpha clears the lenient gate only; the scale is provisional.
    LenientOnly,
    /// alpha clears the strict gate.
    Pass,
}

pub fn gate_decision(alpha: Option<f64>, gates: &Gates) -> GateDecision {
    match alpha {
        None => GateDecision::SingleItem,
        Some(a) if a >= gates.strict => GateDecision::Pass,
        Some(a) if a >= gates.lenient => GateDecision::LenientOnly,
        Some(_) => GateDecision::Fail,
    }
}

/// Reliability summary for one scale, with an optional alternate
/// definition evaluated alongside it.
#[derive(Debug, Clone)]
pub struct ReliabilityEntry {
    pub scale: String,
    pub item_count: usize,
    pub alpha: Option<f64>,
    pub decision: GateDecision,
    /// (item count, alpha, decision) of the alternate, when supplied.
    pub alternate: Option<(usize, Option<f64>, GateDecision)>,
}

/// Gate a built scale, optionally evaluating an alternate definition of
/// the same construct (typically supplied when the main definition is
/// provisional).
pub fn reliability_report(
    scores: &ScaleScores,
    alternate: Option<&ScaleScores>,
    gates: &Gates,
) -> ReliabilityEntry {
    let alpha = scores.alpha.as_ref().map(|a| a.alpha);
    ReliabilityEntry {
        scale: scores.definition.name.clone(),
        item_count: scores.definition.items.len(),
        alpha,
        decision: gate_decision(alpha, gates),
        alternate: alternate.map(|alt| {
            let a = alt.alpha.as_ref().map(|r| r.alpha);
            (alt.definition.items.len(), a, gate_decision(a, gates))
        }),
    }
}

/// Assemble built scales into a new table (occupations by scale scores),
/// preserving the given scale order.
pub fn scale_table(occupations: &[Occupation], scales: &[ScaleScores]) -> Result<Table> {
    Table::new(
        occupations.to_vec(),
        scales.iter().map(|s| s.definition.name.clone()).collect(),
        scales.iter().map(|s| s.scores.clone()).collect(),
    )
}
