use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::PredictionRecord;
use crate::model::{RelationLabel, TaskMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: RelationLabel,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// AUC of this class against the rest, when both sides are present.
    pub auc: Option<f64>,
    /// Number of gold pairs with this label.
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub task_mode: TaskMode,
    pub pairs: usize,
    pub accuracy: f64,
    pub macro_auc: f64,
    pub macro_f1: f64,
    pub classes: Vec<ClassMetrics>,
}

/// A scalar read off a [`MetricsReport`], in table column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Metric {
    Accuracy,
    MacroAuc,
    MacroF1,
    F1(RelationLabel),
}

impl Metric {
    pub fn columns(mode: TaskMode) -> Vec<Metric> {
        let mut cols = vec![Metric::Accuracy, Metric::MacroAuc, Metric::MacroF1];
        cols.extend(mode.labels().iter().map(|&l| Metric::F1(l)));
        cols
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Accuracy => "ACC",
            Metric::MacroAuc => "AUC",
            Metric::MacroF1 => "F1",
            Metric::F1(RelationLabel::Support) => "F1_sup",
            Metric::F1(RelationLabel::Attack) => "F1_att",
            Metric::F1(RelationLabel::Neutral) => "F1_neu",
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl MetricsReport {
    pub fn class(&self, label: RelationLabel) -> Option<&ClassMetrics> {
        self.classes.iter().find(|c| c.label == label)
    }

    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Accuracy => self.accuracy,
            Metric::MacroAuc => self.macro_auc,
            Metric::MacroF1 => self.macro_f1,
            Metric::F1(label) => self.class(label).map_or(0.0, |c| c.f1),
        }
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Mann-Whitney AUC with tied scores counted as one half. `None` without both classes.
pub fn binary_auc(scores: &[f64], positive: &[bool]) -> Option<f64> {
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap_or(Ordering::Equal));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1..=j+1 share their mean
        let mean_rank = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += mean_rank * order[i..=j].iter().filter(|&&k| positive[k]).count() as f64;
        i = j + 1;
    }
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Some(u / (n_pos as f64 * n_neg as f64))
}

fn check_inputs(predictions: &[PredictionRecord], golds: &[RelationLabel], mode: TaskMode) -> Result<()> {
    if predictions.is_empty() {
        return Err(Error::Invalid("evaluation set is empty".into()));
    }
    if predictions.len() != golds.len() {
        return Err(Error::Invalid(format!("{} predictions for {} gold labels", predictions.len(), golds.len())));
    }
    for (p, &g) in predictions.iter().zip(golds) {
        if !mode.allows(g) {
            return Err(Error::Invalid(format!("gold label `{g}` of pair `{}` is illegal in {mode} mode", p.pair_id)));
        }
        if !mode.allows(p.predicted) {
            return Err(Error::Invalid(format!(
                "predicted label `{}` of pair `{}` is illegal in {mode} mode",
                p.predicted, p.pair_id
            )));
        }
    }
    Ok(())
}

/// Metrics of `predictions` against `golds`, aligned by position.
pub fn compute_metrics(
    predictions: &[PredictionRecord],
    golds: &[RelationLabel],
    mode: TaskMode,
) -> Result<MetricsReport> {
    check_inputs(predictions, golds, mode)?;
    let all: Vec<usize> = (0..predictions.len()).collect();
    Ok(metrics_on(predictions, golds, mode, &all))
}

/// Metrics over the multiset of positions `sample`.
pub(crate) fn metrics_on(
    predictions: &[PredictionRecord],
    golds: &[RelationLabel],
    mode: TaskMode,
    sample: &[usize],
) -> MetricsReport {
    let correct = sample.iter().filter(|&&i| predictions[i].predicted == golds[i]).count();
    let mut scores = Vec::with_capacity(sample.len());
    let mut positive = Vec::with_capacity(sample.len());
    let classes: Vec<ClassMetrics> = mode
        .labels()
        .iter()
        .map(|&label| {
            let (mut tp, mut predicted, mut actual) = (0, 0, 0);
            scores.clear();
            positive.clear();
            for &i in sample {
                let is_pred = predictions[i].predicted == label;
                let is_gold = golds[i] == label;
                tp += usize::from(is_pred && is_gold);
                predicted += usize::from(is_pred);
                actual += usize::from(is_gold);
                scores.push(predictions[i].score(label));
                positive.push(is_gold);
            }
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, actual);
            let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
            ClassMetrics { label, precision, recall, f1, auc: binary_auc(&scores, &positive), support: actual }
        })
        .collect();
    let aucs: Vec<f64> = classes.iter().filter_map(|c| c.auc).collect();
    let macro_auc = if aucs.is_empty() { 0.5 } else { aucs.iter().sum::<f64>() / aucs.len() as f64 };
    let macro_f1 = classes.iter().map(|c| c.f1).sum::<f64>() / classes.len() as f64;
    MetricsReport {
        task_mode: mode,
        pairs: sample.len(),
        accuracy: ratio(correct, sample.len()),
        macro_auc,
        macro_f1,
        classes,
    }
}
