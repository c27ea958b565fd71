//! Accuracy, F1 and AUC over direct pairs, and paired-bootstrap significance.

mod bootstrap;
mod metrics;

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use bootstrap::{paired_bootstrap, significance_marker, BootstrapReport, DEFAULT_RESAMPLES, MIN_RESAMPLES};
pub use metrics::{binary_auc, compute_metrics, ClassMetrics, Metric, MetricsReport};

use crate::error::{Error, Result};
use crate::io::PredictionRecord;
use crate::model::{ArgumentGraph, RelationLabel, Split};

/// Predictions for the gold-labelled direct pairs of `graph` (optionally one split), in
/// graph order, with their golds. Every such pair must have a prediction.
pub fn align_with_gold(
    predictions: &[PredictionRecord],
    graph: &ArgumentGraph,
    split: Option<Split>,
) -> Result<(Vec<PredictionRecord>, Vec<RelationLabel>)> {
    let by_id: HashMap<&str, &PredictionRecord> = predictions.iter().map(|p| (p.pair_id.as_str(), p)).collect();
    let mut preds = Vec::new();
    let mut golds = Vec::new();
    for (_, pair) in graph.direct_pairs() {
        let Some(gold) = pair.gold else { continue };
        if split.is_some_and(|s| s != pair.split) {
            continue;
        }
        let p = by_id
            .get(pair.pair_id.as_str())
            .ok_or_else(|| Error::Invalid(format!("no prediction for gold pair `{}`", pair.pair_id)))?;
        preds.push((*p).clone());
        golds.push(gold);
    }
    Ok((preds, golds))
}

/// Structured evaluation output: metrics plus an optional comparison against another system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub metrics: MetricsReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub metrics: MetricsReport,
    pub bootstrap: BootstrapReport,
}

impl EvalReport {
    /// Aligned text table, one row per system, percentages with significance markers.
    pub fn to_table(&self, name: &str, other: &str) -> String {
        let columns = Metric::columns(self.metrics.task_mode);
        let mut out = format!("{:<12}", "system");
        for m in &columns {
            write!(out, " {:>9}", m.name()).unwrap();
        }
        out.push('\n');
        let mut row = |label: &str, report: &MetricsReport, boot: Option<&BootstrapReport>| {
            write!(out, "{label:<12}").unwrap();
            for &m in &columns {
                let mark = boot.and_then(|b| b.p_value(m)).map_or("", significance_marker);
                write!(out, " {:>9}", format!("{:.1}{mark}", 100.0 * report.get(m))).unwrap();
            }
            out.push('\n');
        };
        row(name, &self.metrics, self.comparison.as_ref().map(|c| &c.bootstrap));
        if let Some(c) = &self.comparison {
            row(other, &c.metrics, None);
        }
        out
    }
}

/// Metrics for `predictions`, plus a bootstrap against `baseline` when one is given.
pub fn evaluate(
    predictions: &[PredictionRecord],
    baseline: Option<&[PredictionRecord]>,
    graph: &ArgumentGraph,
    split: Option<Split>,
    n_resamples: usize,
    seed: u64,
) -> Result<EvalReport> {
    let mode = graph.task_mode();
    let (preds, golds) = align_with_gold(predictions, graph, split)?;
    let metrics = compute_metrics(&preds, &golds, mode)?;
    let comparison = match baseline {
        None => None,
        Some(b) => {
            let (base, _) = align_with_gold(b, graph, split)?;
            Some(Comparison {
                metrics: compute_metrics(&base, &golds, mode)?,
                bootstrap: paired_bootstrap(&preds, &base, &golds, mode, n_resamples, seed)?,
            })
        }
    };
    Ok(EvalReport { metrics, comparison })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ArgumentPair, TaskMode};
    use RelationLabel::*;

    fn graph() -> ArgumentGraph {
        let pairs = [
            ("a", Support, Split::Test),
            ("b", Attack, Split::Test),
            ("c", Neutral, Split::Test),
            ("d", Support, Split::Val),
        ]
        .into_iter()
        .enumerate()
        .map(|(i, (id, g, split))| ArgumentPair::direct(id, format!("s{i}"), format!("c{i}"), split).with_gold(g));
        ArgumentGraph::from_pairs(TaskMode::Ternary, pairs).unwrap()
    }

    #[test]
    fn evaluates_test_split() {
        let preds: Vec<_> = [("a", Support), ("b", Attack), ("c", Attack), ("d", Attack)]
            .into_iter()
            .map(|(id, l)| PredictionRecord::one_hot(id, l, TaskMode::Ternary))
            .collect();
        let r = evaluate(&preds, Some(&preds), &graph(), Some(Split::Test), 1000, 0).unwrap();
        assert_eq!(r.metrics.pairs, 3);
        assert!((r.metrics.macro_f1 - 5.0 / 9.0).abs() < 1e-12);
        assert!(r.comparison.as_ref().unwrap().bootstrap.p_values.values().all(|&p| p == 1.0));
        let table = r.to_table("psl", "baseline");
        assert!(table.lines().next().unwrap().contains("F1_neu"));
        assert!(table.contains("66.7"));
        assert!(evaluate(&preds[..2], None, &graph(), Some(Split::Test), 1000, 0).is_err());
    }
}
