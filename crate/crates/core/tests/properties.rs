mod common;

use std::collections::{BTreeMap, BTreeSet};

use argpsl::chain::build_indirect;
use argpsl::model::{ArgumentGraph, ArgumentPair, RelationLabel, SlotScores, Split, TaskMode, TuplePairScores};
use argpsl::predicates::{eval_fact_conflict, evaluate_all, Mechanism};
use argpsl::psl::{energy, infer, project_simplex, solve_map_admm, solve_map_grid, SolverParams};
use argpsl::ruleset::{HingePower, RuleId, RuleSetConfig};
use argpsl::synth::{generate, SynthConfig};
use common::{random_bundle, random_program, simplex_violation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mode_power(i: u64) -> (TaskMode, HingePower) {
    let mode = if i.is_multiple_of(2) { TaskMode::Ternary } else { TaskMode::Binary };
    let power = if (i / 2).is_multiple_of(2) { HingePower::Linear } else { HingePower::Squared };
    (mode, power)
}

fn random_feasible(rng: &mut ChaCha8Rng, pairs: usize, k: usize) -> Vec<f64> {
    (0..pairs)
        .flat_map(|_| {
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(-0.5..1.5)).collect();
            project_simplex(&raw)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_is_convex(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mode, power) = mode_power(seed);
        let p = random_program(&mut rng, mode, power).program;
        let k = mode.num_labels();
        let x = random_feasible(&mut rng, p.num_pairs(), k);
        let y = random_feasible(&mut rng, p.num_pairs(), k);
        let lambda: f64 = rng.random();
        let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        let lhs = energy(&p, &mid).unwrap();
        let rhs = lambda * energy(&p, &x).unwrap() + (1.0 - lambda) * energy(&p, &y).unwrap();
        prop_assert!(lhs <= rhs + 1e-12, "{lhs} > {rhs}");
    }

    #[test]
    fn admm_output_is_feasible_and_no_worse_than_start(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mode, power) = mode_power(seed);
        let p = random_program(&mut rng, mode, power).program;
        let a = solve_map_admm(&p, &SolverParams::default()).unwrap();
        prop_assert!(simplex_violation(&a.values, mode.num_labels()) <= 1e-6);
        let uniform = vec![1.0 / mode.num_labels() as f64; p.num_atoms()];
        prop_assert!(a.energy <= energy(&p, &uniform).unwrap() + 1e-3);
        prop_assert!(a.diagnostics.converged);
        let again = solve_map_admm(&p, &SolverParams::default()).unwrap();
        prop_assert_eq!(a, again);
    }

    #[test]
    fn doubling_weights_doubles_energy(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mode, power) = mode_power(seed);
        let p = random_program(&mut rng, mode, power).program;
        prop_assume!(p.num_pairs() <= 2);
        let mut doubled = p.clone();
        doubled.potentials.iter_mut().for_each(|q| q.weight *= 2.0);
        let g1 = solve_map_grid(&p, 0.05).unwrap();
        let g2 = solve_map_grid(&doubled, 0.05).unwrap();
        prop_assert!((g2.energy - 2.0 * g1.energy).abs() <= 1e-9);
        prop_assert!((energy(&doubled, &g1.values).unwrap() - g2.energy).abs() <= 1e-9);
        let params = SolverParams::default();
        let a1 = solve_map_admm(&p, &params).unwrap();
        let a2 = solve_map_admm(&doubled, &params).unwrap();
        let tol = 2.0 * 1e-3_f64.max(0.05 * p.total_weight());
        prop_assert!((a2.energy - 2.0 * a1.energy).abs() <= tol);
    }

    #[test]
    fn predicates_stay_in_unit_interval(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..200 {
            let b = random_bundle(&mut rng, &format!("b{i}"), 0.8);
            for (_, v) in evaluate_all(&b).iter() {
                prop_assert!((0.0..=1.0).contains(&v), "{v}");
            }
        }
    }

    #[test]
    fn fact_conflict_matches_enumeration(
        tuples in prop::collection::vec(prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..=4), 0..=3)
    ) {
        let pairs: Vec<TuplePairScores> = tuples
            .iter()
            .map(|t| TuplePairScores { slots: t.iter().map(|&(p_ent, p_con)| SlotScores { p_ent, p_con }).collect() })
            .collect();
        let mut best = 0.0_f64;
        for t in &pairs {
            for k in 0..t.slots.len() {
                let mut v = t.slots[k].p_con;
                for (j, s) in t.slots.iter().enumerate() {
                    if j != k {
                        v *= s.p_ent;
                    }
                }
                best = best.max(v);
            }
        }
        let got = eval_fact_conflict(&pairs);
        prop_assert!((got - best).abs() <= 1e-12);
        // a superset of tuples never lowers the maximum
        for n in 0..pairs.len() {
            prop_assert!(eval_fact_conflict(&pairs[..n]) <= got);
        }
    }

    #[test]
    fn components_match_brute_force(edges in prop::collection::vec((0usize..12, 0usize..12), 1..25)) {
        let pairs: Vec<ArgumentPair> = edges
            .iter()
            .filter(|(a, b)| a != b)
            .enumerate()
            .map(|(i, (a, b))| ArgumentPair::direct(format!("p{i}"), format!("n{a}"), format!("n{b}"), Split::Test))
            .collect();
        prop_assume!(!pairs.is_empty());
        let graph = ArgumentGraph::from_pairs(TaskMode::Ternary, pairs.clone()).unwrap();
        // two pairs connect iff the transitive closure of "share a node" links them
        let n = pairs.len();
        let mut reach = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                let (p, q) = (&pairs[i], &pairs[j]);
                reach[i][j] = i == j
                    || [&p.statement_id, &p.claim_id].iter().any(|x| **x == q.statement_id || **x == q.claim_id);
            }
        }
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][m] && reach[m][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        let components = graph.connected_components();
        let mut seen = BTreeSet::new();
        for c in &components {
            for &i in c {
                prop_assert!(seen.insert(i));
                for &j in c {
                    prop_assert!(reach[i][j]);
                }
            }
        }
        prop_assert_eq!(seen.len(), n);
        for (a, ca) in components.iter().enumerate() {
            for cb in &components[a + 1..] {
                prop_assert!(!reach[ca[0]][cb[0]]);
            }
        }
    }

    #[test]
    fn chain_count_on_random_trees(seed in any::<u64>(), n in 2usize..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let parent: Vec<usize> = (1..n).map(|i| rng.random_range(0..i)).collect();
        let pairs = parent
            .iter()
            .enumerate()
            .map(|(i, &p)| ArgumentPair::direct(format!("e{}", i + 1), format!("n{}", i + 1), format!("n{p}"), Split::Fit));
        let graph = ArgumentGraph::from_pairs(TaskMode::Binary, pairs).unwrap();
        let (augmented, triples) = build_indirect(&graph);
        // one chain per node with a grandparent
        let expected = (1..n).filter(|&i| parent[i - 1] != 0).count();
        prop_assert_eq!(triples.len(), expected);
        prop_assert_eq!(augmented.len(), graph.len() + expected);
        let (again, triples_again) = build_indirect(&augmented);
        prop_assert_eq!(again.len(), augmented.len());
        prop_assert_eq!(triples_again, triples);
    }
}

#[test]
fn grid_oracle_agrees_with_admm_on_many_programs() {
    let params = SolverParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut checked = 0;
    for i in 0..40 {
        let (mode, power) = mode_power(i);
        let p = random_program(&mut rng, mode, power).program;
        if p.num_pairs() > 2 {
            continue;
        }
        let a = solve_map_admm(&p, &params).unwrap();
        let g = solve_map_grid(&p, params.grid_resolution).unwrap();
        let tol = 1e-3_f64.max(0.05 * p.total_weight());
        assert!((a.energy - g.energy).abs() <= tol, "{} vs {}", a.energy, g.energy);
        // the grid is a subset of the feasible set, so the continuous optimum is never worse
        assert!(a.energy <= g.energy + 1e-4, "{} vs {}", a.energy, g.energy);
        checked += 1;
    }
    assert!(checked > 10);
}

#[test]
fn inference_is_independent_of_thread_count() {
    let data = generate(&SynthConfig { n_topics: 6, seed: 11, noise_sigma: 1.0, ..SynthConfig::default() }).unwrap();
    let config = RuleSetConfig { chains: true, ..RuleSetConfig::default() };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| infer(&data.graph, &data.scores, &config, &SolverParams::default()).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.predictions, four.predictions);
    assert_eq!(one.total_energy.to_bits(), four.total_energy.to_bits());
}

#[test]
fn ablating_everything_leaves_the_default_relation() {
    let data = generate(&SynthConfig { n_topics: 3, seed: 12, ..SynthConfig::default() }).unwrap();
    for mode in [TaskMode::Ternary] {
        let config = RuleSetConfig { ablate: Mechanism::ALL.into(), task_mode: mode, ..RuleSetConfig::default() };
        let out = infer(&data.graph, &data.scores, &config, &SolverParams::default()).unwrap();
        assert!(out.predictions.iter().all(|p| p.label == mode.default_relation()));
        for rule in RuleId::LOGIC {
            assert_eq!(out.potential_counts.get(&rule), None, "{rule}");
        }
    }
}

#[test]
fn ablation_removes_only_that_mechanism() {
    let data = generate(&SynthConfig { n_topics: 2, seed: 13, ..SynthConfig::default() }).unwrap();
    let config = RuleSetConfig { ablate: [Mechanism::Normative].into(), ..RuleSetConfig::default() };
    let out = infer(&data.graph, &data.scores, &config, &SolverParams::default()).unwrap();
    let counts: BTreeMap<_, _> = out.potential_counts.clone();
    for rule in [RuleId::R10, RuleId::R11, RuleId::R12, RuleId::R13] {
        assert!(!counts.contains_key(&rule));
    }
    for rule in [RuleId::R1, RuleId::R4, RuleId::R6] {
        assert!(counts[&rule] > 0);
    }
}

#[test]
fn binary_predictions_never_neutral() {
    let config = SynthConfig {
        task_mode: TaskMode::Binary,
        fractions: argpsl::synth::LabelFractions { support: 0.5, attack: 0.5, neutral: 0.0 },
        n_topics: 3,
        ..SynthConfig::default()
    };
    let data = generate(&config).unwrap();
    let out =
        infer(&data.graph, &data.scores, &RuleSetConfig::new(TaskMode::Binary), &SolverParams::default()).unwrap();
    for p in &out.predictions {
        assert_ne!(p.label, RelationLabel::Neutral);
        assert!(p.neutral.is_none());
        assert!((p.support + p.attack - 1.0).abs() <= 1e-6);
    }
}
