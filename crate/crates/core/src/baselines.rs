//! Unsupervised baselines: random, sentiment agreement and textual entailment.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::io::PredictionRecord;
use crate::model::{ArgumentGraph, NliScores, RelationLabel, ScoreBundle, SentiPairScores, SentimentDist, TaskMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Baseline {
    Random,
    Sentiment,
    Entailment,
}

impl std::str::FromStr for Baseline {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "random" => Ok(Baseline::Random),
            "sentiment" => Ok(Baseline::Sentiment),
            "entailment" => Ok(Baseline::Entailment),
            other => Err(crate::Error::Invalid(format!("unknown baseline `{other}`"))),
        }
    }
}

/// Runs a baseline over the direct pairs of `graph`, in graph order.
pub fn run_baseline(
    which: Baseline,
    graph: &ArgumentGraph,
    scores: &BTreeMap<String, ScoreBundle>,
    seed: u64,
) -> Vec<PredictionRecord> {
    let mode = graph.task_mode();
    let ids: Vec<&str> = graph.direct_pairs().map(|(_, p)| p.pair_id.as_str()).collect();
    match which {
        Baseline::Random => predict_random(&ids, mode, seed),
        Baseline::Sentiment => predict_sentiment(&ids, scores, mode),
        Baseline::Entailment => predict_entailment(&ids, scores, mode),
    }
}

/// Uniform over the mode's labels; one draw per pair in input order.
pub fn predict_random(pair_ids: &[&str], mode: TaskMode, seed: u64) -> Vec<PredictionRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = mode.labels();
    pair_ids.iter().map(|id| PredictionRecord::one_hot(*id, labels[rng.random_range(0..labels.len())], mode)).collect()
}

pub fn predict_sentiment(
    pair_ids: &[&str],
    scores: &BTreeMap<String, ScoreBundle>,
    mode: TaskMode,
) -> Vec<PredictionRecord> {
    pair_ids
        .iter()
        .map(|id| {
            let label = scores
                .get(*id)
                .and_then(|b| b.senti_pairs.as_deref())
                .and_then(|pairs| sentiment_label(pairs, mode))
                .unwrap_or(mode.default_relation());
            PredictionRecord::one_hot(*id, label, mode)
        })
        .collect()
}

pub fn predict_entailment(
    pair_ids: &[&str],
    scores: &BTreeMap<String, ScoreBundle>,
    mode: TaskMode,
) -> Vec<PredictionRecord> {
    pair_ids
        .iter()
        .map(|id| {
            let label = scores
                .get(*id)
                .and_then(|b| b.nli.as_ref())
                .map(|nli| entailment_label(nli, mode))
                .unwrap_or(mode.default_relation());
            PredictionRecord::one_hot(*id, label, mode)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Polarity {
    Positive,
    Negative,
    Neutral,
}

/// Arg-max polarity, ties resolved positive, negative, neutral.
fn polarity(d: &SentimentDist) -> Polarity {
    if d.p_pos >= d.p_neg && d.p_pos >= d.p_neu {
        Polarity::Positive
    } else if d.p_neg >= d.p_neu {
        Polarity::Negative
    } else {
        Polarity::Neutral
    }
}

/// Neumaier-compensated mean, so the result does not depend on summation order.
fn compensated_mean(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp, mut n) = (0.0_f64, 0.0_f64, 0usize);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
        n += 1;
    }
    (sum + comp) / n as f64
}

fn mean_distribution<'a>(dists: impl Iterator<Item = &'a SentimentDist> + Clone) -> SentimentDist {
    SentimentDist {
        p_pos: compensated_mean(dists.clone().map(|d| d.p_pos)),
        p_neg: compensated_mean(dists.clone().map(|d| d.p_neg)),
        p_neu: compensated_mean(dists.map(|d| d.p_neu)),
    }
}

/// Label from the averaged statement and claim sentiment; `None` when there are no targets.
pub fn sentiment_label(senti_pairs: &[SentiPairScores], mode: TaskMode) -> Option<RelationLabel> {
    if senti_pairs.is_empty() {
        return None;
    }
    let stmt = mean_distribution(senti_pairs.iter().map(|p| &p.s_stmt));
    let claim = mean_distribution(senti_pairs.iter().map(|p| &p.s_claim));
    use Polarity::*;
    let label = match (polarity(&stmt), polarity(&claim)) {
        (Positive, Positive) | (Negative, Negative) => RelationLabel::Support,
        (Positive, Negative) | (Negative, Positive) => RelationLabel::Attack,
        _ => match mode {
            TaskMode::Ternary => RelationLabel::Neutral,
            TaskMode::Binary => {
                let agreement = stmt.p_pos * claim.p_pos + stmt.p_neg * claim.p_neg;
                let opposition = stmt.p_pos * claim.p_neg + stmt.p_neg * claim.p_pos;
                if agreement >= opposition {
                    RelationLabel::Support
                } else {
                    RelationLabel::Attack
                }
            }
        },
    };
    Some(label)
}

/// Ternary: arg-max with near-ties going to neutral, then attack. Binary: support iff
/// `p_ent >= p_con`.
pub fn entailment_label(nli: &NliScores, mode: TaskMode) -> RelationLabel {
    match mode {
        TaskMode::Ternary => crate::psl::predict_label(&[nli.p_ent, nli.p_con, nli.p_neu], mode.labels()),
        TaskMode::Binary => {
            if nli.p_ent >= nli.p_con {
                RelationLabel::Support
            } else {
                RelationLabel::Attack
            }
        }
    }
}
