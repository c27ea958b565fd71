use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{metrics_on, Metric};
use crate::error::{Error, Result};
use crate::io::PredictionRecord;
use crate::model::{RelationLabel, TaskMode};

pub const DEFAULT_RESAMPLES: usize = 10_000;
pub const MIN_RESAMPLES: usize = 1_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapReport {
    pub n_resamples: usize,
    pub seed: u64,
    /// Fraction of resamples on which system A does not beat system B.
    pub p_values: BTreeMap<String, f64>,
}

impl BootstrapReport {
    pub fn p_value(&self, metric: Metric) -> Option<f64> {
        self.p_values.get(metric.name()).copied()
    }
}

/// `⋆` below 0.05, `†` below 0.01, `‡` below 0.001.
pub fn significance_marker(p: f64) -> &'static str {
    if p < 0.001 {
        "‡"
    } else if p < 0.01 {
        "†"
    } else if p < 0.05 {
        "⋆"
    } else {
        ""
    }
}

/// One-sided paired bootstrap of A over B. Resample `i` draws from a generator seeded with
/// `seed + i`, so the result does not depend on thread scheduling.
pub fn paired_bootstrap(
    pred_a: &[PredictionRecord],
    pred_b: &[PredictionRecord],
    golds: &[RelationLabel],
    mode: TaskMode,
    n_resamples: usize,
    seed: u64,
) -> Result<BootstrapReport> {
    if n_resamples < MIN_RESAMPLES {
        return Err(Error::Config(format!("at least {MIN_RESAMPLES} resamples are required, got {n_resamples}")));
    }
    if pred_a.len() != pred_b.len() || pred_a.len() != golds.len() {
        return Err(Error::Invalid(format!(
            "prediction sets are misaligned: {} vs {} predictions for {} gold labels",
            pred_a.len(),
            pred_b.len(),
            golds.len()
        )));
    }
    if let Some((a, b)) = pred_a.iter().zip(pred_b).find(|(a, b)| a.pair_id != b.pair_id) {
        return Err(Error::Invalid(format!("prediction sets are misaligned: `{}` against `{}`", a.pair_id, b.pair_id)));
    }
    // validates labels and emptiness
    super::metrics::compute_metrics(pred_a, golds, mode)?;
    super::metrics::compute_metrics(pred_b, golds, mode)?;

    let n = golds.len();
    let columns = Metric::columns(mode);
    let losses = (0..n_resamples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let sample: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            let a = metrics_on(pred_a, golds, mode, &sample);
            let b = metrics_on(pred_b, golds, mode, &sample);
            columns.iter().map(|&m| usize::from(a.get(m) <= b.get(m))).collect::<Vec<_>>()
        })
        .reduce(
            || vec![0; columns.len()],
            |mut acc, v| {
                acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
                acc
            },
        );
    let p_values =
        columns.iter().zip(losses).map(|(m, l)| (m.name().to_string(), l as f64 / n_resamples as f64)).collect();
    Ok(BootstrapReport { n_resamples, seed, p_values })
}
