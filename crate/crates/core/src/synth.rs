//! Synthetic argument trees with planted evidence, for end-to-end checks without corpora.
//!
//! Each topic is a complete tree whose child-to-parent edges are support or attack pairs.
//! Neutral pairs join same-topic nodes at least three edges apart. Every pair gets a full
//! score bundle: the mechanisms drawn for it carry evidence for the gold relation at
//! `informative_strength`, the rest carry none. Noise is added in logit space.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::chain::build_indirect;
use crate::error::{Error, Result};
use crate::io::Dataset;
use crate::model::{
    ArgumentGraph, ArgumentPair, CausalScores, NliScores, NormativeScores, RelationLabel, ScoreBundle, SentiPairScores,
    SentimentDist, SlotScores, Split, TaskMode, TuplePairScores,
};
use crate::predicates::Mechanism;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LabelFractions {
    pub support: f64,
    pub attack: f64,
    pub neutral: f64,
}

impl Default for LabelFractions {
    fn default() -> Self {
        LabelFractions { support: 0.4, attack: 0.4, neutral: 0.2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitFractions {
    pub fit: f64,
    pub val: f64,
    pub test: f64,
}

impl Default for SplitFractions {
    fn default() -> Self {
        SplitFractions { fit: 0.2, val: 0.2, test: 0.6 }
    }
}

/// A set of mechanisms that are informative together, drawn with probability
/// proportional to `weight`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixEntry {
    pub mechanisms: BTreeSet<Mechanism>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub task_mode: TaskMode,
    pub n_topics: usize,
    /// Edges from the root to the deepest leaves.
    pub tree_depth: usize,
    pub branching: usize,
    pub fractions: LabelFractions,
    pub mechanism_mix: Vec<MixEntry>,
    /// Standard deviation of the logit-space perturbation.
    pub noise_sigma: f64,
    pub informative_strength: f64,
    /// Values are clipped to `[noise_floor, 1 - noise_floor]` before noise is applied.
    pub noise_floor: f64,
    /// Assigned per topic.
    pub splits: SplitFractions,
    /// Also emit scored indirect pairs for every chain of two tree edges.
    pub indirect: bool,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            task_mode: TaskMode::Ternary,
            n_topics: 20,
            tree_depth: 3,
            branching: 3,
            fractions: LabelFractions::default(),
            mechanism_mix: vec![MixEntry { mechanisms: Mechanism::ALL.into_iter().collect(), weight: 1.0 }],
            noise_sigma: 0.5,
            informative_strength: 0.9,
            noise_floor: 0.05,
            splits: SplitFractions::default(),
            indirect: true,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_topics == 0 || self.tree_depth == 0 || self.branching == 0 {
            return bad("n_topics, tree_depth and branching must be positive".into());
        }
        let f = &self.fractions;
        let fracs = [f.support, f.attack, f.neutral];
        if fracs.iter().any(|v| !v.is_finite() || *v < 0.0) || (fracs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return bad(format!("label fractions must be non-negative and sum to 1: {f:?}"));
        }
        if f.support + f.attack <= 0.0 {
            return bad("support and attack fractions cannot both be 0".into());
        }
        if self.task_mode == TaskMode::Binary && f.neutral > 0.0 {
            return bad("binary mode has no neutral pairs; set fractions.neutral to 0".into());
        }
        if self.mechanism_mix.is_empty()
            || self.mechanism_mix.iter().any(|m| m.mechanisms.is_empty() || !m.weight.is_finite() || m.weight <= 0.0)
        {
            return bad("mechanism_mix needs entries with at least one mechanism and a positive weight".into());
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return bad(format!("noise_sigma {} must be non-negative", self.noise_sigma));
        }
        if !(self.informative_strength > 0.0 && self.informative_strength <= 1.0) {
            return bad(format!("informative_strength {} must lie in (0, 1]", self.informative_strength));
        }
        if !(self.noise_floor > 0.0 && self.noise_floor < 0.5) {
            return bad(format!("noise_floor {} must lie in (0, 0.5)", self.noise_floor));
        }
        let s = &self.splits;
        let splits = [s.fit, s.val, s.test];
        if splits.iter().any(|v| !v.is_finite() || *v < 0.0) || (splits.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return bad(format!("split fractions must be non-negative and sum to 1: {s:?}"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SynthDataset {
    pub graph: ArgumentGraph,
    pub scores: BTreeMap<String, ScoreBundle>,
}

impl SynthDataset {
    /// Gold labels of direct pairs, in graph order.
    pub fn golds(&self) -> Vec<(&str, RelationLabel)> {
        self.graph.direct_pairs().filter_map(|(_, p)| p.gold.map(|g| (p.pair_id.as_str(), g))).collect()
    }

    pub fn into_dataset(self) -> Dataset {
        Dataset { graph: self.graph, scores: self.scores, warnings: Vec::new() }
    }
}

#[derive(Debug, Clone)]
pub struct ChainScenario {
    pub dataset: SynthDataset,
    /// Direct pairs whose bundles were replaced by evidence-free ones, sorted.
    pub masked: Vec<String>,
}

struct Tree {
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
}

impl Tree {
    fn complete(depth: usize, branching: usize) -> Tree {
        let mut tree = Tree { parent: vec![None], depth: vec![0] };
        let mut frontier = vec![0];
        for level in 1..=depth {
            let mut next = Vec::new();
            for &p in &frontier {
                for _ in 0..branching {
                    tree.parent.push(Some(p));
                    tree.depth.push(level);
                    next.push(tree.parent.len() - 1);
                }
            }
            frontier = next;
        }
        tree
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn distance(&self, mut a: usize, mut b: usize) -> usize {
        let mut d = 0;
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a].expect("non-root");
            } else {
                b = self.parent[b].expect("non-root");
            }
            d += 1;
        }
        d
    }
}

struct Noise {
    sigma: f64,
    floor: f64,
}

impl Noise {
    fn apply(&self, rng: &mut ChaCha8Rng, v: f64) -> f64 {
        if self.sigma == 0.0 {
            return v;
        }
        let p = v.clamp(self.floor, 1.0 - self.floor);
        let eps: f64 = StandardNormal.sample(rng);
        let logit = (p / (1.0 - p)).ln() + self.sigma * eps;
        1.0 / (1.0 + (-logit).exp())
    }

    fn distribution(&self, rng: &mut ChaCha8Rng, v: [f64; 3]) -> [f64; 3] {
        let mut out = v.map(|x| self.apply(rng, x));
        let sum: f64 = out.iter().sum();
        out.iter_mut().for_each(|x| *x /= sum);
        out
    }

    /// Perturbs two values that must sum to at most 1, scaling both down if they overflow.
    fn partial(&self, rng: &mut ChaCha8Rng, a: f64, b: f64) -> (f64, f64) {
        let (a, b) = (self.apply(rng, a), self.apply(rng, b));
        let sum = a + b;
        if sum > 1.0 {
            (a / sum, b / sum)
        } else {
            (a, b)
        }
    }
}

/// Raw scores whose predicates back `relation` at strength `s`; `None` plants no evidence.
fn plant(
    mechanism: Mechanism,
    relation: Option<RelationLabel>,
    s: f64,
    noise: &Noise,
    rng: &mut ChaCha8Rng,
    bundle: &mut ScoreBundle,
) {
    use RelationLabel::{Attack, Support};
    match mechanism {
        Mechanism::Fact => {
            let (nli, slots) = match relation {
                Some(Support) => ([s, 0.0, 1.0 - s], [(1.0, 0.0), (1.0, 0.0)]),
                Some(Attack) => ([0.0, s, 1.0 - s], [(1.0, 0.0), (0.0, s)]),
                _ => ([0.0, 0.0, 1.0], [(0.0, 0.0), (0.0, 0.0)]),
            };
            let [p_ent, p_con, p_neu] = noise.distribution(rng, nli);
            bundle.nli = Some(NliScores { p_ent, p_con, p_neu });
            let slots = slots
                .iter()
                .map(|&(e, c)| SlotScores { p_ent: noise.apply(rng, e), p_con: noise.apply(rng, c) })
                .collect();
            bundle.fact_pairs = Some(vec![TuplePairScores { slots }]);
        }
        Mechanism::Sentiment => {
            let positive = [1.0, 0.0, 0.0];
            let negative = [0.0, 1.0, 0.0];
            let (p_match, stmt, claim) = match relation {
                Some(rel @ (Support | Attack)) => {
                    let stmt_positive = rng.random_bool(0.5);
                    let claim_positive = stmt_positive == (rel == Support);
                    let pick = |pos: bool| if pos { positive } else { negative };
                    (s, pick(stmt_positive), pick(claim_positive))
                }
                _ => (0.0, [0.0, 0.0, 1.0], [0.0, 0.0, 1.0]),
            };
            let to_dist = |[p_pos, p_neg, p_neu]: [f64; 3]| SentimentDist { p_pos, p_neg, p_neu };
            bundle.senti_pairs = Some(vec![SentiPairScores {
                p_match: noise.apply(rng, p_match),
                s_stmt: to_dist(noise.distribution(rng, stmt)),
                s_claim: to_dist(noise.distribution(rng, claim)),
            }]);
        }
        Mechanism::Causal => {
            let mut c = [0.0; 4];
            if let Some(rel @ (Support | Attack)) = relation {
                let forward = rng.random_bool(0.5);
                let slot = match (rel == Support, forward) {
                    (true, true) => 0,
                    (false, true) => 1,
                    (true, false) => 2,
                    (false, false) => 3,
                };
                c[slot] = s;
            }
            let [sc_cause, sc_obstruct, cs_cause, cs_obstruct] = c.map(|v| noise.apply(rng, v));
            bundle.causal = Some(CausalScores { sc_cause, sc_obstruct, cs_cause, cs_obstruct });
        }
        Mechanism::Normative => {
            let mut n = NormativeScores::default();
            if let Some(rel @ (Support | Attack)) = relation {
                let consequence = rng.random_bool(0.5);
                let high_first = rng.random_bool(0.5);
                let consistent = high_first == (rel == Support);
                let (a, b) = if high_first { (1.0, 0.0) } else { (0.0, 1.0) };
                if consequence {
                    n.p_conseq = 1.0;
                    (n.q_pos, n.q_neg) = (a, b);
                } else {
                    n.p_norm = 1.0;
                    (n.p_adv, n.p_opp) = (a, b);
                }
                (n.r_consist, n.r_contra) = if consistent { (s, 0.0) } else { (0.0, s) };
            }
            n.p_conseq = noise.apply(rng, n.p_conseq);
            n.p_norm = noise.apply(rng, n.p_norm);
            (n.q_pos, n.q_neg) = noise.partial(rng, n.q_pos, n.q_neg);
            (n.p_adv, n.p_opp) = noise.partial(rng, n.p_adv, n.p_opp);
            (n.r_consist, n.r_contra) = noise.partial(rng, n.r_consist, n.r_contra);
            bundle.normative = Some(n);
        }
    }
}

fn bundle_for(
    pair_id: &str,
    relation: Option<RelationLabel>,
    informative: &BTreeSet<Mechanism>,
    s: f64,
    noise: &Noise,
    rng: &mut ChaCha8Rng,
) -> ScoreBundle {
    let mut bundle = ScoreBundle::new(pair_id);
    for m in Mechanism::ALL {
        let rel = relation.filter(|&r| r != RelationLabel::Neutral && informative.contains(&m));
        plant(m, rel, s, noise, rng, &mut bundle);
    }
    bundle
}

fn draw_mix<'a>(mix: &'a [MixEntry], rng: &mut ChaCha8Rng) -> &'a BTreeSet<Mechanism> {
    let total: f64 = mix.iter().map(|m| m.weight).sum();
    let mut u = rng.random::<f64>() * total;
    for m in mix {
        if u < m.weight {
            return &m.mechanisms;
        }
        u -= m.weight;
    }
    &mix[mix.len() - 1].mechanisms
}

fn topic_splits(config: &SynthConfig, rng: &mut ChaCha8Rng) -> Vec<Split> {
    let n = config.n_topics;
    let count = |f: f64| (f * n as f64).round() as usize;
    let val = count(config.splits.val).min(n);
    let test = count(config.splits.test).min(n - val);
    let mut splits: Vec<Split> = std::iter::repeat_n(Split::Val, val)
        .chain(std::iter::repeat_n(Split::Test, test))
        .chain(std::iter::repeat_n(Split::Fit, n - val - test))
        .collect();
    splits.shuffle(rng);
    splits
}

/// Relation implied by chaining two relations.
fn compose(first: RelationLabel, second: RelationLabel) -> RelationLabel {
    use RelationLabel::*;
    match (first, second) {
        (Neutral, _) | (_, Neutral) => Neutral,
        (a, b) if a == b => Support,
        _ => Attack,
    }
}

pub fn generate(config: &SynthConfig) -> Result<SynthDataset> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let noise = Noise { sigma: config.noise_sigma, floor: config.noise_floor };
    let s = config.informative_strength;
    let f = &config.fractions;
    let p_support = f.support / (f.support + f.attack);
    let neutral_ratio = f.neutral / (f.support + f.attack);

    let splits = topic_splits(config, &mut rng);
    let tree = Tree::complete(config.tree_depth, config.branching);
    let edges = tree.len() - 1;
    let n_neutral = (edges as f64 * neutral_ratio).round() as usize;
    let candidates: Vec<(usize, usize)> = (0..tree.len())
        .flat_map(|a| (a + 1..tree.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| tree.distance(a, b) >= 3)
        .collect();
    if n_neutral > candidates.len() {
        return Err(Error::Config(format!(
            "a tree of depth {} and branching {} has {} node pairs at distance >= 3, but {n_neutral} neutral pairs per topic were requested",
            config.tree_depth,
            config.branching,
            candidates.len()
        )));
    }

    let mut graph = ArgumentGraph::new(config.task_mode);
    let mut scores = BTreeMap::new();
    for (t, &split) in splits.iter().enumerate() {
        let topic = format!("t{t}");
        let node = |i: usize| format!("t{t}-n{i}");
        let mut add = |statement: usize, claim: usize, gold: RelationLabel, rng: &mut ChaCha8Rng| -> Result<()> {
            let id = format!("t{t}:n{statement}>n{claim}");
            let mut pair = ArgumentPair::direct(&id, node(statement), node(claim), split).with_gold(gold);
            pair.topic = Some(topic.clone());
            graph.add_pair(pair)?;
            let informative = draw_mix(&config.mechanism_mix, rng).clone();
            scores.insert(id.clone(), bundle_for(&id, Some(gold), &informative, s, &noise, rng));
            Ok(())
        };
        for child in 1..tree.len() {
            let gold = if rng.random_bool(p_support) { RelationLabel::Support } else { RelationLabel::Attack };
            add(child, tree.parent[child].expect("non-root"), gold, &mut rng)?;
        }
        for i in index::sample(&mut rng, candidates.len(), n_neutral).into_vec() {
            let (a, b) = candidates[i];
            let (statement, claim) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
            add(statement, claim, RelationLabel::Neutral, &mut rng)?;
        }
    }

    if config.indirect {
        let (augmented, triples) = build_indirect(&graph);
        // a tree path wins over a detour through a neutral pair
        let mut composed: BTreeMap<usize, RelationLabel> = BTreeMap::new();
        for t in &triples {
            let gold = |i: usize| augmented.pair(i).gold.expect("direct synthetic pairs are labelled");
            let rel = compose(gold(t.first_hop), gold(t.second_hop));
            let entry = composed.entry(t.outer).or_insert(rel);
            if *entry == RelationLabel::Neutral {
                *entry = rel;
            }
        }
        for (outer, rel) in composed {
            let id = augmented.pair(outer).pair_id.clone();
            let informative = draw_mix(&config.mechanism_mix, &mut rng).clone();
            scores.insert(id.clone(), bundle_for(&id, Some(rel), &informative, s, &noise, &mut rng));
        }
        graph = augmented;
    }
    Ok(SynthDataset { graph, scores })
}

/// Generates a dataset, then strips all evidence from a fraction of the tree edges. The
/// stripped pairs can only be recovered through chains of their neighbours.
pub fn plant_chain_scenario(config: &SynthConfig, mask_fraction: f64) -> Result<ChainScenario> {
    if config.tree_depth < 3 {
        return Err(Error::Config(format!("chain scenarios need trees of depth >= 3, got {}", config.tree_depth)));
    }
    if !(0.0..=1.0).contains(&mask_fraction) {
        return Err(Error::Config(format!("mask fraction {mask_fraction} must lie in [0, 1]")));
    }
    let mut dataset = generate(config)?;
    let edges: Vec<String> = dataset
        .graph
        .direct_pairs()
        .filter(|(_, p)| p.gold.is_some_and(|g| g != RelationLabel::Neutral))
        .map(|(_, p)| p.pair_id.clone())
        .collect();
    let n_masked = (edges.len() as f64 * mask_fraction).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x6d61_736b);
    let mut masked: Vec<String> =
        index::sample(&mut rng, edges.len(), n_masked).into_iter().map(|i| edges[i].clone()).collect();
    masked.sort();
    let silent = Noise { sigma: 0.0, floor: config.noise_floor };
    for id in &masked {
        let bundle = bundle_for(id, None, &BTreeSet::new(), config.informative_strength, &silent, &mut rng);
        dataset.scores.insert(id.clone(), bundle);
    }
    Ok(ChainScenario { dataset, masked })
}

/// Tree distance between the nodes of every neutral pair, keyed by pair id.
pub fn neutral_distances(dataset: &SynthDataset, config: &SynthConfig) -> HashMap<String, usize> {
    let tree = Tree::complete(config.tree_depth, config.branching);
    let index = |node: &str| node.rsplit("-n").next().and_then(|i| i.parse::<usize>().ok());
    dataset
        .graph
        .direct_pairs()
        .filter(|(_, p)| p.gold == Some(RelationLabel::Neutral))
        .filter_map(|(_, p)| Some((p.pair_id.clone(), tree.distance(index(&p.statement_id)?, index(&p.claim_id)?))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicates::{evaluate_all, Predicate};
    use crate::ruleset::RuleId;

    fn small(seed: u64) -> SynthConfig {
        SynthConfig { n_topics: 4, seed, ..SynthConfig::default() }
    }

    #[test]
    fn tree_shape() {
        let t = Tree::complete(3, 3);
        assert_eq!(t.len(), 40);
        assert_eq!(t.distance(1, 2), 2);
        assert_eq!(t.distance(4, 2), 3);
        assert_eq!(t.distance(0, 39), 3);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate(&small(3)).unwrap();
        let b = generate(&small(3)).unwrap();
        assert_eq!(a.graph.pairs(), b.graph.pairs());
        assert_eq!(a.scores, b.scores);
        let c = generate(&small(4)).unwrap();
        assert_ne!(a.scores, c.scores);
    }

    #[test]
    fn noiseless_predicates_are_exact() {
        let config = SynthConfig { noise_sigma: 0.0, informative_strength: 1.0, indirect: false, ..small(1) };
        let data = generate(&config).unwrap();
        for (_, pair) in data.graph.direct_pairs() {
            let v = evaluate_all(&data.scores[&pair.pair_id]);
            assert_eq!(v.present(), 13);
            for rule in RuleId::LOGIC {
                let (pred, head) = rule.logic_template().unwrap();
                let value = v.get(pred).unwrap();
                if Some(head) != pair.gold {
                    assert_eq!(value, 0.0, "{} {pred:?}", pair.pair_id);
                } else {
                    assert!(value == 0.0 || value == 1.0);
                }
            }
            // all mechanisms are informative by default, so every backing rule fires
            if pair.gold == Some(RelationLabel::Support) {
                assert_eq!(v.get(Predicate::FactEntail), Some(1.0));
                assert_eq!(v.get(Predicate::SentiCoherent), Some(1.0));
            }
        }
    }

    #[test]
    fn neutral_pairs_are_distant() {
        let config = small(2);
        let data = generate(&config).unwrap();
        let d = neutral_distances(&data, &config);
        assert!(!d.is_empty());
        assert!(d.values().all(|&x| x >= 3));
    }

    #[test]
    fn label_fractions_within_sampling_error() {
        let config = SynthConfig { n_topics: 100, indirect: false, ..SynthConfig::default() };
        let data = generate(&config).unwrap();
        let golds = data.golds();
        let n = golds.len() as f64;
        for (label, f) in [
            (RelationLabel::Support, config.fractions.support),
            (RelationLabel::Attack, config.fractions.attack),
            (RelationLabel::Neutral, config.fractions.neutral),
        ] {
            let observed = golds.iter().filter(|(_, g)| *g == label).count() as f64 / n;
            let sd = (f * (1.0 - f) / n).sqrt();
            assert!((observed - f).abs() < 4.0 * sd + 0.005, "{label}: {observed} vs {f}");
        }
    }

    #[test]
    fn scores_validate_and_splits_are_per_topic() {
        let data = generate(&small(5)).unwrap();
        for bundle in data.scores.values() {
            let mut b = bundle.clone();
            assert!(b.validate(1).unwrap().is_empty());
        }
        let mut split_of: HashMap<&str, Split> = HashMap::new();
        for p in data.graph.pairs() {
            let topic = p.topic.as_deref().unwrap();
            assert_eq!(*split_of.entry(topic).or_insert(p.split), p.split);
        }
        assert!(data.graph.has_indirect());
        assert!(data.graph.pairs().iter().all(|p| data.scores.contains_key(&p.pair_id)));
    }

    #[test]
    fn infeasible_and_invalid_configs() {
        let shallow = SynthConfig { tree_depth: 1, ..small(0) };
        assert!(generate(&shallow).is_err());
        let binary_neutral = SynthConfig { task_mode: TaskMode::Binary, ..small(0) };
        assert!(generate(&binary_neutral).is_err());
        let bad_fracs =
            SynthConfig { fractions: LabelFractions { support: 0.5, attack: 0.5, neutral: 0.5 }, ..small(0) };
        assert!(generate(&bad_fracs).is_err());
        assert!(plant_chain_scenario(&SynthConfig { tree_depth: 2, ..small(0) }, 0.3).is_err());
    }

    #[test]
    fn chain_scenario_masking() {
        let config = small(8);
        let plain = generate(&config).unwrap();
        let zero = plant_chain_scenario(&config, 0.0).unwrap();
        assert!(zero.masked.is_empty());
        assert_eq!(zero.dataset.scores, plain.scores);

        let s = plant_chain_scenario(&config, 0.3).unwrap();
        let edges = plain.golds().iter().filter(|(_, g)| *g != RelationLabel::Neutral).count();
        assert_eq!(s.masked.len(), (edges as f64 * 0.3).round() as usize);
        for id in &s.masked {
            let v = evaluate_all(&s.dataset.scores[id]);
            assert!(v.iter().all(|(_, x)| x == 0.0));
        }
    }

    #[test]
    fn compose_relations() {
        use RelationLabel::*;
        assert_eq!(compose(Support, Support), Support);
        assert_eq!(compose(Attack, Attack), Support);
        assert_eq!(compose(Support, Attack), Attack);
        assert_eq!(compose(Attack, Support), Attack);
        assert_eq!(compose(Neutral, Support), Neutral);
    }
}
