//! Weighted rule templates, their configuration, and objective-based weight selection.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::Dataset;
use crate::model::{RelationLabel, Split, TaskMode};
use crate::predicates::{Mechanism, Predicate};
use crate::psl::{self, SolverParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
    R14,
    R15,
    R16,
    R17,
    C1,
    C2,
}

impl RuleId {
    pub const LOGIC: [RuleId; 13] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
        RuleId::R9,
        RuleId::R10,
        RuleId::R11,
        RuleId::R12,
        RuleId::R13,
    ];

    pub const CHAIN: [RuleId; 4] = [RuleId::R14, RuleId::R15, RuleId::R16, RuleId::R17];

    /// The observed predicate in the body of a logic rule and the relation it implies.
    pub fn logic_template(self) -> Option<(Predicate, RelationLabel)> {
        use Predicate::*;
        use RelationLabel::{Attack, Support};
        let t = match self {
            RuleId::R1 => (FactEntail, Support),
            RuleId::R2 => (FactContradict, Attack),
            RuleId::R3 => (FactConflict, Attack),
            RuleId::R4 => (SentiConflict, Attack),
            RuleId::R5 => (SentiCoherent, Support),
            RuleId::R6 => (CauseSc, Support),
            RuleId::R7 => (ObstructSc, Attack),
            RuleId::R8 => (CauseCs, Support),
            RuleId::R9 => (ObstructCs, Attack),
            RuleId::R10 => (BackingConseq, Support),
            RuleId::R11 => (RefutingConseq, Attack),
            RuleId::R12 => (BackingNorm, Support),
            RuleId::R13 => (RefutingNorm, Attack),
            _ => return None,
        };
        Some(t)
    }

    /// `(relation of first hop, relation of second hop, implied outer relation)`.
    pub fn chain_template(self) -> Option<(RelationLabel, RelationLabel, RelationLabel)> {
        use RelationLabel::{Attack, Support};
        match self {
            RuleId::R14 => Some((Support, Support, Support)),
            RuleId::R15 => Some((Attack, Attack, Support)),
            RuleId::R16 => Some((Support, Attack, Attack)),
            RuleId::R17 => Some((Attack, Support, Attack)),
            _ => None,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Which pair of a chain triple a body atom refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hop {
    /// (S, I)
    First,
    /// (I, C)
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyAtom {
    Observed(Predicate),
    Relation { hop: Hop, label: RelationLabel },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub id: RuleId,
    pub body: Vec<BodyAtom>,
    /// Relation atom of the grounded pair (the outer pair for chain rules). `None` for C2.
    pub head: Option<RelationLabel>,
    pub weight: f64,
    pub hard: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HingePower {
    #[default]
    Linear,
    Squared,
}

impl HingePower {
    pub fn exponent(self) -> u32 {
        match self {
            HingePower::Linear => 1,
            HingePower::Squared => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RuleSetConfig {
    pub task_mode: TaskMode,
    /// Weights of R1..R13 in rule order.
    pub w_logic: [f64; 13],
    /// Whether R14..R17 are grounded.
    pub chains: bool,
    /// Shared weight of R14..R17.
    pub w_chain: f64,
    /// Weight of the default-relation prior C1.
    pub w_prior: f64,
    /// Ground C1 on indirect pairs too.
    pub prior_on_indirect: bool,
    pub hinge_power: HingePower,
    /// Mechanisms whose predicates are forced absent before grounding.
    pub ablate: BTreeSet<Mechanism>,
}

impl Default for RuleSetConfig {
    fn default() -> Self {
        RuleSetConfig {
            task_mode: TaskMode::Ternary,
            w_logic: [1.0; 13],
            chains: false,
            w_chain: 1.0,
            w_prior: 0.2,
            prior_on_indirect: true,
            hinge_power: HingePower::Linear,
            ablate: BTreeSet::new(),
        }
    }
}

impl RuleSetConfig {
    pub fn new(task_mode: TaskMode) -> Self {
        RuleSetConfig { task_mode, ..RuleSetConfig::default() }
    }

    pub fn default_relation(&self) -> RelationLabel {
        self.task_mode.default_relation()
    }

    pub fn validate(&self) -> Result<()> {
        let weights = self.w_logic.iter().copied().chain([self.w_chain, self.w_prior]);
        for w in weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Config(format!("rule weight {w} must be finite and non-negative")));
            }
        }
        Ok(())
    }

    /// Sum of the soft rule-template weights active in this configuration.
    pub fn soft_weight_mass(&self) -> f64 {
        let logic: f64 = self.w_logic.iter().sum();
        let chain = if self.chains { 4.0 * self.w_chain } else { 0.0 };
        logic + chain + self.w_prior
    }

    /// Multiplies every soft weight by `factor`.
    pub fn scaled(&self, factor: f64) -> RuleSetConfig {
        let mut c = self.clone();
        c.w_logic.iter_mut().for_each(|w| *w *= factor);
        c.w_chain *= factor;
        c.w_prior *= factor;
        c
    }
}

pub fn build_ruleset(config: &RuleSetConfig) -> Result<Vec<Rule>> {
    config.validate()?;
    let mut rules = Vec::with_capacity(19);
    for (id, &weight) in RuleId::LOGIC.iter().zip(&config.w_logic) {
        let (predicate, head) = id.logic_template().expect("logic rule");
        rules.push(Rule { id: *id, body: vec![BodyAtom::Observed(predicate)], head: Some(head), weight, hard: false });
    }
    if config.chains {
        for id in RuleId::CHAIN {
            let (first, second, head) = id.chain_template().expect("chain rule");
            rules.push(Rule {
                id,
                body: vec![
                    BodyAtom::Relation { hop: Hop::First, label: first },
                    BodyAtom::Relation { hop: Hop::Second, label: second },
                ],
                head: Some(head),
                weight: config.w_chain,
                hard: false,
            });
        }
    }
    rules.push(Rule {
        id: RuleId::C1,
        body: Vec::new(),
        head: Some(config.default_relation()),
        weight: config.w_prior,
        hard: false,
    });
    rules.push(Rule { id: RuleId::C2, body: Vec::new(), head: None, weight: 0.0, hard: true });
    Ok(rules)
}

/// Candidate values explored for the chain-rule weight and the prior weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepGrid {
    pub w_chain: Vec<f64>,
    pub w_prior: Vec<f64>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid { w_chain: vec![1.0, 0.5, 0.1], w_prior: vec![0.2, 0.3] }
    }
}

impl SweepGrid {
    /// Grid configs in declaration order: `w_chain` outer, `w_prior` inner.
    pub fn expand(&self, base: &RuleSetConfig) -> Result<Vec<RuleSetConfig>> {
        if self.w_chain.is_empty() || self.w_prior.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        let mut configs = Vec::with_capacity(self.w_chain.len() * self.w_prior.len());
        for &w_chain in &self.w_chain {
            for &w_prior in &self.w_prior {
                configs.push(RuleSetConfig { w_chain, w_prior, ..base.clone() });
            }
        }
        Ok(configs)
    }
}

/// The JSON configuration file: a rule-set config, solver parameters and sweep grids.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConfigFile {
    #[serde(flatten)]
    pub rules: RuleSetConfig,
    pub solver: SolverParams,
    pub grid: SweepGrid,
}

impl ConfigFile {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub config: RuleSetConfig,
    pub raw_objective: f64,
    pub normalized_objective: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub best: usize,
    pub pairs: usize,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    pub fn best_config(&self) -> &RuleSetConfig {
        &self.entries[self.best].config
    }
}

/// Runs MAP inference on the validation split for every config and picks the lowest
/// normalized objective (energy / (soft weight mass * pairs)). Gold labels are never read.
///
/// Ties go to the config declared first.
pub fn sweep(configs: &[RuleSetConfig], dataset: &Dataset, solver: &SolverParams) -> Result<SweepReport> {
    if configs.is_empty() {
        return Err(Error::Config("sweep needs at least one config".into()));
    }
    let validation = dataset.graph.filtered(|p| p.split == Split::Val);
    if validation.is_empty() {
        return Err(Error::Invalid("validation split is empty".into()));
    }
    let entries = configs
        .par_iter()
        .enumerate()
        .map(|(index, config)| {
            let outcome = psl::infer(&validation, &dataset.scores, config, solver)
                .map_err(|e| Error::Sweep { index, source: Box::new(e) })?;
            let pairs = outcome.predictions.len();
            let mass = config.soft_weight_mass();
            let normalized = if mass > 0.0 { outcome.total_energy / (mass * pairs as f64) } else { 0.0 };
            Ok((
                pairs,
                SweepEntry {
                    config: config.clone(),
                    raw_objective: outcome.total_energy,
                    normalized_objective: normalized,
                    converged: outcome.all_converged(),
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs = entries[0].0;
    let entries: Vec<SweepEntry> = entries.into_iter().map(|(_, e)| e).collect();
    let mut best = 0;
    for (i, e) in entries.iter().enumerate() {
        if e.normalized_objective < entries[best].normalized_objective {
            best = i;
        }
    }
    Ok(SweepReport { best, pairs, entries })
}
