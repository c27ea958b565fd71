#![allow(dead_code)]

use argpsl::chain::build_indirect;
use argpsl::model::{
    ArgumentGraph, ArgumentPair, CausalScores, NliScores, NormativeScores, ScoreBundle, SentiPairScores, SentimentDist,
    SlotScores, Split, TaskMode, TuplePairScores,
};
use argpsl::predicates::{evaluate_all, PredicateVector};
use argpsl::psl::{ground, GroundOptions, GroundProgram};
use argpsl::ruleset::{build_ruleset, HingePower, RuleSetConfig};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn dist3(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let v: [f64; 3] = [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()];
    let s: f64 = v.iter().sum::<f64>() + 1e-12;
    v.map(|x| x / s)
}

/// Two values with sum at most 1.
fn partial(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let [a, b, _] = dist3(rng);
    (a, b)
}

/// A valid bundle where each block is present with probability `p_block`.
pub fn random_bundle(rng: &mut ChaCha8Rng, id: &str, p_block: f64) -> ScoreBundle {
    let mut b = ScoreBundle::new(id);
    if rng.random_bool(p_block) {
        let [p_ent, p_con, p_neu] = dist3(rng);
        b.nli = Some(NliScores { p_ent, p_con, p_neu });
    }
    if rng.random_bool(p_block) {
        let tuples = rng.random_range(0..3);
        b.fact_pairs = Some(
            (0..tuples)
                .map(|_| TuplePairScores {
                    slots: (0..rng.random_range(1..4))
                        .map(|_| SlotScores { p_ent: rng.random(), p_con: rng.random() })
                        .collect(),
                })
                .collect(),
        );
    }
    if rng.random_bool(p_block) {
        let n = rng.random_range(0..3);
        b.senti_pairs = Some(
            (0..n)
                .map(|_| {
                    let [a, c, e] = dist3(rng);
                    let [d, f, g] = dist3(rng);
                    SentiPairScores {
                        p_match: rng.random(),
                        s_stmt: SentimentDist { p_pos: a, p_neg: c, p_neu: e },
                        s_claim: SentimentDist { p_pos: d, p_neg: f, p_neu: g },
                    }
                })
                .collect(),
        );
    }
    if rng.random_bool(p_block) {
        b.causal = Some(CausalScores {
            sc_cause: rng.random(),
            sc_obstruct: rng.random(),
            cs_cause: rng.random(),
            cs_obstruct: rng.random(),
        });
    }
    if rng.random_bool(p_block) {
        let (q_pos, q_neg) = partial(rng);
        let (p_adv, p_opp) = partial(rng);
        let (r_consist, r_contra) = partial(rng);
        b.normative = Some(NormativeScores {
            p_conseq: rng.random(),
            p_norm: rng.random(),
            q_pos,
            q_neg,
            p_adv,
            p_opp,
            r_consist,
            r_contra,
        });
    }
    b
}

pub struct RandomProgram {
    pub program: GroundProgram,
    pub config: RuleSetConfig,
}

/// A connected program of one to three pairs over random bundles and weights. Three-pair
/// programs are a chain with its indirect pair half of the time.
pub fn random_program(rng: &mut ChaCha8Rng, mode: TaskMode, power: HingePower) -> RandomProgram {
    let n_pairs = rng.random_range(1..=3);
    let chain = n_pairs == 3 && rng.random_bool(0.5);
    let edges: &[(&str, &str)] = match (n_pairs, chain) {
        (1, _) => &[("a", "b")],
        (2, _) => &[("a", "b"), ("b", "c")],
        (_, true) => &[("a", "b"), ("b", "c")],
        _ => &[("a", "b"), ("c", "b"), ("d", "b")],
    };
    let pairs = edges.iter().enumerate().map(|(i, (s, c))| ArgumentPair::direct(format!("p{i}"), *s, *c, Split::Test));
    let direct = ArgumentGraph::from_pairs(mode, pairs).unwrap();
    let (graph, triples) = if chain { build_indirect(&direct) } else { (direct, Vec::new()) };

    let mut config = RuleSetConfig::new(mode);
    config.hinge_power = power;
    config.chains = chain;
    for w in config.w_logic.iter_mut() {
        *w = rng.random_range(0.0..2.0);
    }
    config.w_chain = rng.random_range(0.0..2.0);
    config.w_prior = rng.random_range(0.0..1.0);
    config.prior_on_indirect = rng.random_bool(0.5);

    let predicates: Vec<PredicateVector> =
        graph.pairs().iter().map(|p| evaluate_all(&random_bundle(rng, &p.pair_id, 0.7))).collect();
    let rules = build_ruleset(&config).unwrap();
    let members: Vec<usize> = (0..graph.len()).collect();
    let options = GroundOptions { power, prior_on_indirect: config.prior_on_indirect };
    let program = ground(&rules, &graph, &members, &predicates, &triples, options).unwrap();
    RandomProgram { program, config }
}

/// Largest violation of the simplex and box constraints by `values`.
pub fn simplex_violation(values: &[f64], k: usize) -> f64 {
    values
        .chunks(k)
        .map(|block| {
            let sum = (block.iter().sum::<f64>() - 1.0).abs();
            let bounds = block.iter().map(|&v| (-v).max(v - 1.0).max(0.0)).fold(0.0, f64::max);
            sum.max(bounds)
        })
        .fold(0.0, f64::max)
}
