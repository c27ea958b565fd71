use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::admm::{solve_map_admm, SolverParams};
use super::program::{ground, GroundOptions};
use super::SolverDiagnostics;
use crate::chain::{build_indirect, ChainTriple};
use crate::error::Result;
use crate::io::PredictionRecord;
use crate::model::{ArgumentGraph, RelationLabel, ScoreBundle, TaskMode};
use crate::predicates::{evaluate_all, PredicateVector};
use crate::ruleset::{build_ruleset, RuleId, RuleSetConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct PairPrediction {
    pub pair_index: usize,
    pub pair_id: String,
    pub support: f64,
    pub attack: f64,
    pub neutral: Option<f64>,
    pub label: RelationLabel,
    pub energy_share: f64,
    pub converged: bool,
}

impl PairPrediction {
    pub fn to_record(&self) -> PredictionRecord {
        PredictionRecord {
            pair_id: self.pair_id.clone(),
            support: self.support,
            attack: self.attack,
            neutral: self.neutral,
            predicted: self.label,
            energy_share: self.energy_share,
            converged: self.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub pairs: usize,
    pub potentials: usize,
    pub energy: f64,
    pub diagnostics: SolverDiagnostics,
}

#[derive(Debug, Clone)]
pub struct InferenceOutcome {
    /// The graph inference ran on, including any indirect pairs that were built.
    pub graph: ArgumentGraph,
    /// One entry per pair of `graph`, in graph order.
    pub predictions: Vec<PairPrediction>,
    pub components: Vec<ComponentReport>,
    pub total_energy: f64,
    pub potential_counts: BTreeMap<RuleId, usize>,
}

impl InferenceOutcome {
    pub fn all_converged(&self) -> bool {
        self.components.iter().all(|c| c.diagnostics.converged)
    }

    /// Prediction records for direct pairs only.
    pub fn direct_records(&self) -> Vec<PredictionRecord> {
        self.predictions
            .iter()
            .filter(|p| self.graph.pair(p.pair_index).is_direct())
            .map(PairPrediction::to_record)
            .collect()
    }

    pub fn by_id(&self) -> HashMap<&str, &PairPrediction> {
        self.predictions.iter().map(|p| (p.pair_id.as_str(), p)).collect()
    }
}

/// Full MAP inference: builds indirect pairs when chains are on (and drops them when off),
/// evaluates predicates, grounds each connected component and solves the components in parallel.
pub fn infer(
    graph: &ArgumentGraph,
    scores: &BTreeMap<String, ScoreBundle>,
    config: &RuleSetConfig,
    solver: &SolverParams,
) -> Result<InferenceOutcome> {
    solver.validate()?;
    let rules = build_ruleset(config)?;
    let (graph, triples): (ArgumentGraph, Vec<ChainTriple>) = if config.chains {
        let (g, t) = build_indirect(graph);
        if t.is_empty() {
            log::warn!("chain rules requested but the graph has no chains of direct pairs");
        }
        (g, t)
    } else {
        (graph.filtered(|p| p.is_direct()), Vec::new())
    };

    let mut unscored = 0usize;
    let predicates: Vec<PredicateVector> = graph
        .pairs()
        .iter()
        .map(|p| match scores.get(&p.pair_id) {
            Some(bundle) => {
                let mut v = evaluate_all(bundle);
                for &m in &config.ablate {
                    v.ablate(m);
                }
                v
            }
            None => {
                unscored += 1;
                PredicateVector::default()
            }
        })
        .collect();
    if unscored > 0 {
        log::warn!("{unscored} pairs have no score bundle; their logic rules are not grounded");
    }

    // Triples are routed to the component holding their outer pair.
    let components = graph.connected_components();
    let mut component_of = vec![0usize; graph.len()];
    for (c, members) in components.iter().enumerate() {
        for &i in members {
            component_of[i] = c;
        }
    }
    let mut triples_by_component: Vec<Vec<ChainTriple>> = vec![Vec::new(); components.len()];
    for t in &triples {
        triples_by_component[component_of[t.outer]].push(*t);
    }

    let options = GroundOptions { power: config.hinge_power, prior_on_indirect: config.prior_on_indirect };
    let solved = components
        .par_iter()
        .zip(triples_by_component.par_iter())
        .map(|(members, triples)| {
            let program = ground(&rules, &graph, members, &predicates, triples, options)?;
            let assignment = solve_map_admm(&program, solver)?;
            Ok((program, assignment))
        })
        .collect::<Result<Vec<_>>>()?;

    let mode = graph.task_mode();
    let mut predictions: Vec<Option<PairPrediction>> = vec![None; graph.len()];
    let mut reports = Vec::with_capacity(solved.len());
    let mut potential_counts = BTreeMap::new();
    let mut total_energy = 0.0;
    for (program, assignment) in &solved {
        for (rule, n) in program.counts() {
            *potential_counts.entry(rule).or_insert(0) += n;
        }
        total_energy += assignment.energy;
        for (local, &g) in program.pairs.iter().enumerate() {
            let values = assignment.pair_values(program, local);
            predictions[g] = Some(PairPrediction {
                pair_index: g,
                pair_id: graph.pair(g).pair_id.clone(),
                support: values[0],
                attack: values[1],
                neutral: (mode == TaskMode::Ternary).then(|| values[2]),
                label: assignment.labels[local],
                energy_share: assignment.energy_shares[local],
                converged: assignment.diagnostics.converged,
            });
        }
        log::debug!(
            "component: {} pairs, {} potentials, energy {:.6}, {} iterations",
            program.num_pairs(),
            program.potentials.len(),
            assignment.energy,
            assignment.diagnostics.iterations
        );
        reports.push(ComponentReport {
            pairs: program.num_pairs(),
            potentials: program.potentials.len(),
            energy: assignment.energy,
            diagnostics: assignment.diagnostics.clone(),
        });
    }
    let predictions = predictions.into_iter().map(|p| p.expect("components cover every pair")).collect();
    Ok(InferenceOutcome { graph, predictions, components: reports, total_energy, potential_counts })
}
