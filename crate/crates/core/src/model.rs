//! Argument graph, relation labels and the upstream score bundles attached to pairs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationLabel {
    Support,
    Attack,
    Neutral,
}

impl RelationLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RelationLabel::Support => "support",
            RelationLabel::Attack => "attack",
            RelationLabel::Neutral => "neutral",
        }
    }
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "support" => Ok(RelationLabel::Support),
            "attack" => Ok(RelationLabel::Attack),
            "neutral" => Ok(RelationLabel::Neutral),
            other => Err(Error::Invalid(format!("unknown relation label `{other}`"))),
        }
    }
}

/// Ternary classification uses support/attack/neutral; binary drops neutral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskMode {
    #[default]
    Ternary,
    Binary,
}

impl TaskMode {
    /// Legal labels, in atom order.
    pub fn labels(self) -> &'static [RelationLabel] {
        match self {
            TaskMode::Ternary => &[RelationLabel::Support, RelationLabel::Attack, RelationLabel::Neutral],
            TaskMode::Binary => &[RelationLabel::Support, RelationLabel::Attack],
        }
    }

    pub fn num_labels(self) -> usize {
        self.labels().len()
    }

    /// The relation assumed when a pair carries no strong evidence.
    pub fn default_relation(self) -> RelationLabel {
        match self {
            TaskMode::Ternary => RelationLabel::Neutral,
            TaskMode::Binary => RelationLabel::Attack,
        }
    }

    pub fn allows(self, label: RelationLabel) -> bool {
        self.labels().contains(&label)
    }

    /// Position of `label` among this mode's atoms.
    pub fn label_index(self, label: RelationLabel) -> Option<usize> {
        self.labels().iter().position(|&l| l == label)
    }
}

impl fmt::Display for TaskMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaskMode::Ternary => "ternary",
            TaskMode::Binary => "binary",
        })
    }
}

impl FromStr for TaskMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ternary" => Ok(TaskMode::Ternary),
            "binary" => Ok(TaskMode::Binary),
            other => Err(Error::Invalid(format!("unknown task mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Direct,
    Indirect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Fit,
    Val,
    Test,
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fit" => Ok(Split::Fit),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => Err(Error::Invalid(format!("unknown split `{other}`"))),
        }
    }
}

/// A (statement, claim) pair whose argumentative relation is to be inferred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgumentPair {
    pub pair_id: String,
    pub statement_id: String,
    pub claim_id: String,
    pub kind: PairKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold: Option<RelationLabel>,
    pub split: Split,
    /// Metadata only; inference never reads it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topic: Option<String>,
}

impl ArgumentPair {
    pub fn direct(
        pair_id: impl Into<String>,
        statement_id: impl Into<String>,
        claim_id: impl Into<String>,
        split: Split,
    ) -> Self {
        ArgumentPair {
            pair_id: pair_id.into(),
            statement_id: statement_id.into(),
            claim_id: claim_id.into(),
            kind: PairKind::Direct,
            gold: None,
            split,
            topic: None,
        }
    }

    pub fn with_gold(mut self, gold: RelationLabel) -> Self {
        self.gold = Some(gold);
        self
    }

    pub fn is_direct(&self) -> bool {
        self.kind == PairKind::Direct
    }
}

/// Pairs plus a node -> incident-pair index.
#[derive(Debug, Clone)]
pub struct ArgumentGraph {
    task_mode: TaskMode,
    pairs: Vec<ArgumentPair>,
    by_id: HashMap<String, usize>,
    incident: BTreeMap<String, Vec<usize>>,
}

impl ArgumentGraph {
    pub fn new(task_mode: TaskMode) -> Self {
        ArgumentGraph { task_mode, pairs: Vec::new(), by_id: HashMap::new(), incident: BTreeMap::new() }
    }

    /// Builds a graph and checks the indirect-pair derivability invariant.
    pub fn from_pairs(task_mode: TaskMode, pairs: impl IntoIterator<Item = ArgumentPair>) -> Result<Self> {
        let mut graph = ArgumentGraph::new(task_mode);
        for pair in pairs {
            graph.add_pair(pair)?;
        }
        graph.check_indirect()?;
        Ok(graph)
    }

    pub fn task_mode(&self) -> TaskMode {
        self.task_mode
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[ArgumentPair] {
        &self.pairs
    }

    pub fn pair(&self, index: usize) -> &ArgumentPair {
        &self.pairs[index]
    }

    pub fn index_of(&self, pair_id: &str) -> Option<usize> {
        self.by_id.get(pair_id).copied()
    }

    pub fn get(&self, pair_id: &str) -> Option<&ArgumentPair> {
        self.index_of(pair_id).map(|i| &self.pairs[i])
    }

    /// Indices of pairs that have `node` as statement or claim.
    pub fn incident(&self, node: &str) -> &[usize] {
        self.incident.get(node).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn direct_pairs(&self) -> impl Iterator<Item = (usize, &ArgumentPair)> {
        self.pairs.iter().enumerate().filter(|(_, p)| p.is_direct())
    }

    pub fn has_indirect(&self) -> bool {
        self.pairs.iter().any(|p| !p.is_direct())
    }

    pub fn add_pair(&mut self, pair: ArgumentPair) -> Result<usize> {
        if pair.statement_id == pair.claim_id {
            return Err(Error::Invalid(format!(
                "pair `{}` has identical statement and claim `{}`",
                pair.pair_id, pair.statement_id
            )));
        }
        if self.by_id.contains_key(&pair.pair_id) {
            return Err(Error::Invalid(format!("duplicate pair_id `{}`", pair.pair_id)));
        }
        if let Some(gold) = pair.gold {
            if !self.task_mode.allows(gold) {
                return Err(Error::Invalid(format!(
                    "pair `{}` has gold label `{gold}`, which is illegal in binary mode",
                    pair.pair_id
                )));
            }
        }
        let index = self.pairs.len();
        self.by_id.insert(pair.pair_id.clone(), index);
        self.incident.entry(pair.statement_id.clone()).or_default().push(index);
        self.incident.entry(pair.claim_id.clone()).or_default().push(index);
        self.pairs.push(pair);
        Ok(index)
    }

    /// Every indirect pair (S, C) must be backed by direct (S, I) and (I, C) in its split.
    pub fn check_indirect(&self) -> Result<()> {
        for pair in self.pairs.iter().filter(|p| !p.is_direct()) {
            let derivable = self.incident(&pair.statement_id).iter().any(|&first| {
                let first = &self.pairs[first];
                first.is_direct()
                    && first.split == pair.split
                    && first.statement_id == pair.statement_id
                    && self.incident(&first.claim_id).iter().any(|&second| {
                        let second = &self.pairs[second];
                        second.is_direct()
                            && second.split == pair.split
                            && second.statement_id == first.claim_id
                            && second.claim_id == pair.claim_id
                    })
            });
            if !derivable {
                return Err(Error::Invalid(format!(
                    "indirect pair `{}` is not derivable from two direct pairs",
                    pair.pair_id
                )));
            }
        }
        Ok(())
    }

    /// Partitions pair indices into connected components (pairs sharing a node are connected).
    ///
    /// Components are ordered by their smallest pair index; indices inside are ascending.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut sets = DisjointSets::new(self.pairs.len());
        for members in self.incident.values() {
            for window in members.windows(2) {
                sets.union(window[0], window[1]);
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut root_order: HashMap<usize, usize> = HashMap::new();
        for i in 0..self.pairs.len() {
            let root = sets.find(i);
            let key = *root_order.entry(root).or_insert(i);
            by_root.entry(key).or_default().push(i);
        }
        by_root.into_values().collect()
    }

    /// A new graph holding only the pairs selected by `keep`, in original order.
    pub fn filtered(&self, mut keep: impl FnMut(&ArgumentPair) -> bool) -> ArgumentGraph {
        let mut graph = ArgumentGraph::new(self.task_mode);
        for pair in self.pairs.iter().filter(|p| keep(p)) {
            graph.add_pair(pair.clone()).expect("pairs of a valid graph stay valid");
        }
        graph
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Score bundles

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NliScores {
    pub p_ent: f64,
    pub p_con: f64,
    pub p_neu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotScores {
    pub p_ent: f64,
    pub p_con: f64,
}

/// Slot-aligned entailment/contradiction scores for one pair of relation tuples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuplePairScores {
    pub slots: Vec<SlotScores>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentDist {
    pub p_pos: f64,
    pub p_neg: f64,
    pub p_neu: f64,
}

/// One statement target against one claim target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentiPairScores {
    /// Probability that both targets denote the same thing.
    pub p_match: f64,
    pub s_stmt: SentimentDist,
    pub s_claim: SentimentDist,
}

/// `sc_*`: statement causes/obstructs claim; `cs_*`: claim causes/obstructs statement.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CausalScores {
    pub sc_cause: f64,
    pub sc_obstruct: f64,
    pub cs_cause: f64,
    pub cs_obstruct: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NormativeScores {
    /// P(S is a consequence).
    pub p_conseq: f64,
    /// P(S is normative).
    pub p_norm: f64,
    /// P(consequence is positive / negative).
    pub q_pos: f64,
    pub q_neg: f64,
    /// P(S advocates for / opposes its norm target).
    pub p_adv: f64,
    pub p_opp: f64,
    /// P(source or norm target is consistent with / contrary to the claim's stance).
    pub r_consist: f64,
    pub r_contra: f64,
}

/// Raw upstream probabilities for one pair. Absent blocks were not computed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreBundle {
    pub pair_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nli: Option<NliScores>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fact_pairs: Option<Vec<TuplePairScores>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub senti_pairs: Option<Vec<SentiPairScores>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub causal: Option<CausalScores>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normative: Option<NormativeScores>,
}

/// Distributions whose sum is off by more than this are rejected; smaller drift is renormalized.
pub const DISTRIBUTION_TOLERANCE: f64 = 0.02;
/// Slack allowed on sub-stochastic pairs such as `q_pos + q_neg <= 1`.
pub const PARTIAL_SUM_TOLERANCE: f64 = 1e-3;
/// Below this drift a distribution is accepted without a warning.
const SILENT_DRIFT: f64 = 1e-9;

impl ScoreBundle {
    pub fn new(pair_id: impl Into<String>) -> Self {
        ScoreBundle { pair_id: pair_id.into(), ..ScoreBundle::default() }
    }

    /// Checks bounds and renormalizes slightly-off distributions in place.
    ///
    /// `line` is used in error messages; warnings are returned for the caller to report.
    pub fn validate(&mut self, line: usize) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if let Some(nli) = &mut self.nli {
            let mut v = [nli.p_ent, nli.p_con, nli.p_neu];
            normalize_distribution(&mut v, "nli", ["p_ent", "p_con", "p_neu"], line, &mut warnings)?;
            [nli.p_ent, nli.p_con, nli.p_neu] = v;
        }
        if let Some(fact_pairs) = &self.fact_pairs {
            for (i, tuple) in fact_pairs.iter().enumerate() {
                if tuple.slots.is_empty() {
                    return Err(Error::field(line, format!("fact_pairs[{i}].slots"), "must be non-empty"));
                }
                for (k, slot) in tuple.slots.iter().enumerate() {
                    let prefix = format!("fact_pairs[{i}].slots[{k}]");
                    check_probability(slot.p_ent, &format!("{prefix}.p_ent"), line)?;
                    check_probability(slot.p_con, &format!("{prefix}.p_con"), line)?;
                }
            }
        }
        if let Some(senti_pairs) = &mut self.senti_pairs {
            for (i, senti) in senti_pairs.iter_mut().enumerate() {
                check_probability(senti.p_match, &format!("senti_pairs[{i}].p_match"), line)?;
                for (name, dist) in [("s_stmt", &mut senti.s_stmt), ("s_claim", &mut senti.s_claim)] {
                    let mut v = [dist.p_pos, dist.p_neg, dist.p_neu];
                    normalize_distribution(
                        &mut v,
                        &format!("senti_pairs[{i}].{name}"),
                        ["p_pos", "p_neg", "p_neu"],
                        line,
                        &mut warnings,
                    )?;
                    [dist.p_pos, dist.p_neg, dist.p_neu] = v;
                }
            }
        }
        if let Some(c) = &self.causal {
            check_probability(c.sc_cause, "causal.sc_cause", line)?;
            check_probability(c.sc_obstruct, "causal.sc_obstruct", line)?;
            check_probability(c.cs_cause, "causal.cs_cause", line)?;
            check_probability(c.cs_obstruct, "causal.cs_obstruct", line)?;
        }
        if let Some(n) = &self.normative {
            for (name, value) in [
                ("p_conseq", n.p_conseq),
                ("p_norm", n.p_norm),
                ("q_pos", n.q_pos),
                ("q_neg", n.q_neg),
                ("p_adv", n.p_adv),
                ("p_opp", n.p_opp),
                ("r_consist", n.r_consist),
                ("r_contra", n.r_contra),
            ] {
                check_probability(value, &format!("normative.{name}"), line)?;
            }
            for (name, a, b) in [
                ("q_pos + q_neg", n.q_pos, n.q_neg),
                ("p_adv + p_opp", n.p_adv, n.p_opp),
                ("r_consist + r_contra", n.r_consist, n.r_contra),
            ] {
                if a + b > 1.0 + PARTIAL_SUM_TOLERANCE {
                    return Err(Error::field(line, format!("normative.{name}"), format!("sum {} exceeds 1", a + b)));
                }
            }
        }
        Ok(warnings)
    }
}

fn check_probability(value: f64, field: &str, line: usize) -> Result<()> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::field(line, field, format!("probability {value} outside [0, 1]")))
    }
}

fn normalize_distribution(
    values: &mut [f64; 3],
    block: &str,
    names: [&str; 3],
    line: usize,
    warnings: &mut Vec<String>,
) -> Result<()> {
    for (value, name) in values.iter().zip(names) {
        check_probability(*value, &format!("{block}.{name}"), line)?;
    }
    let sum: f64 = values.iter().sum();
    let drift = (sum - 1.0).abs();
    if drift > DISTRIBUTION_TOLERANCE {
        return Err(Error::field(line, block, format!("distribution sums to {sum}, expected 1")));
    }
    if drift > SILENT_DRIFT {
        for value in values.iter_mut() {
            *value /= sum;
        }
        warnings.push(format!("line {line}: `{block}` summed to {sum}; renormalized"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(id: &str, s: &str, c: &str) -> ArgumentPair {
        ArgumentPair::direct(id, s, c, Split::Test)
    }

    #[test]
    fn shared_node_joins_components() {
        let g = ArgumentGraph::from_pairs(TaskMode::Ternary, [pair("a", "Y", "X"), pair("b", "X", "R")]).unwrap();
        assert_eq!(g.connected_components(), vec![vec![0, 1]]);
    }

    #[test]
    fn disjoint_pairs_are_separate_components() {
        let g = ArgumentGraph::from_pairs(TaskMode::Ternary, [pair("a", "A", "B"), pair("b", "C", "D")]).unwrap();
        assert_eq!(g.connected_components(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn chain_closure_is_one_component() {
        let mut indirect = pair("si", "S", "C");
        indirect.kind = PairKind::Indirect;
        let g =
            ArgumentGraph::from_pairs(TaskMode::Ternary, [pair("a", "S", "I"), pair("b", "I", "C"), indirect]).unwrap();
        assert_eq!(g.connected_components(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn rejects_neutral_gold_in_binary_mode() {
        let err = ArgumentGraph::from_pairs(TaskMode::Binary, [pair("a", "A", "B").with_gold(RelationLabel::Neutral)])
            .unwrap_err();
        assert!(err.to_string().contains("binary"), "{err}");
    }

    #[test]
    fn rejects_duplicates_and_self_loops() {
        assert!(ArgumentGraph::from_pairs(TaskMode::Ternary, [pair("a", "A", "B"), pair("a", "B", "C")]).is_err());
        assert!(ArgumentGraph::from_pairs(TaskMode::Ternary, [pair("a", "A", "A")]).is_err());
    }

    #[test]
    fn underivable_indirect_pair_is_rejected() {
        let mut indirect = pair("x", "A", "C");
        indirect.kind = PairKind::Indirect;
        assert!(ArgumentGraph::from_pairs(TaskMode::Ternary, [pair("a", "A", "B"), indirect]).is_err());
    }

    #[test]
    fn renormalizes_small_drift_with_warning() {
        let mut b = ScoreBundle::new("p");
        b.nli = Some(NliScores { p_ent: 0.50, p_con: 0.30, p_neu: 0.21 });
        let warnings = b.validate(3).unwrap();
        assert_eq!(warnings.len(), 1);
        let nli = b.nli.unwrap();
        assert!((nli.p_ent + nli.p_con + nli.p_neu - 1.0).abs() < 1e-12);
        assert!((nli.p_ent - 0.50 / 1.01).abs() < 1e-12);
    }

    #[test]
    fn rejects_large_drift_and_out_of_range() {
        let mut b = ScoreBundle::new("p");
        b.nli = Some(NliScores { p_ent: 0.6, p_con: 0.3, p_neu: 0.3 });
        assert!(b.validate(1).is_err());

        let mut b = ScoreBundle::new("p");
        b.nli = Some(NliScores { p_ent: 1.2, p_con: 0.0, p_neu: 0.0 });
        let err = b.validate(7).unwrap_err().to_string();
        assert!(err.contains("nli.p_ent") && err.contains("line 7"), "{err}");
    }

    #[test]
    fn rejects_normative_partial_sums_above_one() {
        let mut b = ScoreBundle::new("p");
        b.normative = Some(NormativeScores { q_pos: 0.7, q_neg: 0.5, ..Default::default() });
        assert!(b.validate(1).is_err());
    }

    #[test]
    fn rejects_empty_tuple_slots() {
        let mut b = ScoreBundle::new("p");
        b.fact_pairs = Some(vec![TuplePairScores { slots: vec![] }]);
        assert!(b.validate(1).is_err());
    }
}
