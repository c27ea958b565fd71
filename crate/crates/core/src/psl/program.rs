//! Ground hinge-loss programs: potentials over relation atoms plus per-pair simplex constraints.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use crate::chain::ChainTriple;
use crate::error::{Error, Result};
use crate::model::{ArgumentGraph, PairKind, RelationLabel, TaskMode};
use crate::predicates::PredicateVector;
use crate::ruleset::{BodyAtom, HingePower, Hop, Rule, RuleId};

/// Feasibility slack for simplex constraints.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-6;

/// Lukasiewicz distance to satisfaction of `body -> head`: `max(0, sum(body) - (|body| - 1) - head)`.
///
/// With an empty body this is `1 - head`.
pub fn distance_to_satisfaction(body: &[f64], head: f64) -> f64 {
    let n = body.len() as f64;
    (body.iter().sum::<f64>() - (n - 1.0) - head).max(0.0)
}

/// `weight * distance^power`, where the distance is an implication with observed values
/// inlined and free atoms referenced by index.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundPotential {
    pub rule: RuleId,
    pub weight: f64,
    pub power: HingePower,
    pub body_atoms: Vec<usize>,
    pub observed: Vec<f64>,
    pub head_atom: usize,
    /// Local index of the pair owning the head atom.
    pub head_pair: usize,
}

impl GroundPotential {
    /// Constant part of the linear form: `sum(observed) - (|body| - 1)`.
    pub fn offset(&self) -> f64 {
        let arity = (self.body_atoms.len() + self.observed.len()) as f64;
        self.observed.iter().sum::<f64>() - (arity - 1.0)
    }

    /// Linear form `offset + sum coef * x` whose positive part is the distance.
    pub fn linear_terms(&self) -> Vec<(usize, f64)> {
        self.body_atoms.iter().map(|&a| (a, 1.0)).chain(std::iter::once((self.head_atom, -1.0))).collect()
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        let body: f64 = self.body_atoms.iter().map(|&a| x[a]).sum();
        (self.offset() + body - x[self.head_atom]).max(0.0)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let d = self.distance(x);
        match self.power {
            HingePower::Linear => self.weight * d,
            HingePower::Squared => self.weight * d * d,
        }
    }
}

/// One pair's relation atoms must form a probability distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplex {
    pub pair: usize,
    pub atoms: Range<usize>,
}

/// A grounded component. Atoms are laid out pair-major: atom `p * k + l` is label `l` of
/// local pair `p`, where `k` is the number of labels of the task mode.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundProgram {
    pub task_mode: TaskMode,
    /// Graph indices of the component's pairs, by local index.
    pub pairs: Vec<usize>,
    pub pair_ids: Vec<String>,
    pub potentials: Vec<GroundPotential>,
    pub simplices: Vec<Simplex>,
}

impl GroundProgram {
    pub fn labels(&self) -> &'static [RelationLabel] {
        self.task_mode.labels()
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn num_atoms(&self) -> usize {
        self.pairs.len() * self.task_mode.num_labels()
    }

    pub fn atom(&self, pair: usize, label: RelationLabel) -> usize {
        let l = self.task_mode.label_index(label).expect("label legal in task mode");
        pair * self.task_mode.num_labels() + l
    }

    /// Local pair and label of an atom index.
    pub fn atom_info(&self, atom: usize) -> (usize, RelationLabel) {
        let k = self.task_mode.num_labels();
        (atom / k, self.labels()[atom % k])
    }

    pub fn total_weight(&self) -> f64 {
        self.potentials.iter().map(|p| p.weight).sum()
    }

    pub fn count(&self, rule: RuleId) -> usize {
        self.potentials.iter().filter(|p| p.rule == rule).count()
    }

    pub fn counts(&self) -> BTreeMap<RuleId, usize> {
        let mut counts = BTreeMap::new();
        for p in &self.potentials {
            *counts.entry(p.rule).or_insert(0) += 1;
        }
        counts
    }

    /// Errors if any simplex constraint is violated beyond [`FEASIBILITY_TOLERANCE`].
    pub fn check_feasible(&self, x: &[f64]) -> Result<()> {
        for s in &self.simplices {
            let values = &x[s.atoms.clone()];
            let sum: f64 = values.iter().sum();
            let in_box = values.iter().all(|v| (-FEASIBILITY_TOLERANCE..=1.0 + FEASIBILITY_TOLERANCE).contains(v));
            if !in_box || (sum - 1.0).abs() > FEASIBILITY_TOLERANCE || !sum.is_finite() {
                return Err(Error::Infeasible { pair: self.pair_ids[s.pair].clone(), sum });
            }
        }
        Ok(())
    }

    /// Energy attributed to each local pair (each potential is charged to its head pair).
    pub fn energy_by_pair(&self, x: &[f64]) -> Vec<f64> {
        let mut shares = vec![0.0; self.num_pairs()];
        for p in &self.potentials {
            shares[p.head_pair] += p.value(x);
        }
        shares
    }
}

/// Weighted sum of potential values of a feasible assignment.
pub fn energy(program: &GroundProgram, x: &[f64]) -> Result<f64> {
    if x.len() != program.num_atoms() {
        return Err(Error::Invalid(format!(
            "assignment has {} values, program has {} atoms",
            x.len(),
            program.num_atoms()
        )));
    }
    program.check_feasible(x)?;
    Ok(program.potentials.iter().map(|p| p.value(x)).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundOptions {
    pub power: HingePower,
    pub prior_on_indirect: bool,
}

impl Default for GroundOptions {
    fn default() -> Self {
        GroundOptions { power: HingePower::Linear, prior_on_indirect: true }
    }
}

/// Instantiates `rules` over the pairs `component` (graph indices).
///
/// `predicates` is indexed by graph pair index. Triples whose outer pair lies in the
/// component are grounded with the chain rules; their hops must lie in it too.
pub fn ground(
    rules: &[Rule],
    graph: &ArgumentGraph,
    component: &[usize],
    predicates: &[PredicateVector],
    triples: &[ChainTriple],
    options: GroundOptions,
) -> Result<GroundProgram> {
    let mode = graph.task_mode();
    let local: HashMap<usize, usize> = component.iter().enumerate().map(|(l, &g)| (g, l)).collect();
    let mut program = GroundProgram {
        task_mode: mode,
        pairs: component.to_vec(),
        pair_ids: component.iter().map(|&g| graph.pair(g).pair_id.clone()).collect(),
        potentials: Vec::new(),
        simplices: Vec::new(),
    };
    let k = mode.num_labels();

    for (l, &g) in component.iter().enumerate() {
        let pair = graph.pair(g);
        let preds = &predicates[g];
        for rule in rules.iter().filter(|r| !r.hard) {
            let head = match rule.head {
                Some(h) => h,
                None => continue,
            };
            match rule.body.as_slice() {
                [BodyAtom::Observed(predicate)] => {
                    if let Some(value) = preds.get(*predicate) {
                        program.potentials.push(GroundPotential {
                            rule: rule.id,
                            weight: rule.weight,
                            power: options.power,
                            body_atoms: Vec::new(),
                            observed: vec![value],
                            head_atom: program.atom(l, head),
                            head_pair: l,
                        });
                    }
                }
                [] => {
                    if pair.kind == PairKind::Indirect && !options.prior_on_indirect {
                        continue;
                    }
                    program.potentials.push(GroundPotential {
                        rule: rule.id,
                        weight: rule.weight,
                        power: options.power,
                        body_atoms: Vec::new(),
                        observed: Vec::new(),
                        head_atom: program.atom(l, head),
                        head_pair: l,
                    });
                }
                _ => {}
            }
        }
        // C2 holds for every pair, whether or not the rule list spells it out.
        program.simplices.push(Simplex { pair: l, atoms: l * k..(l + 1) * k });
    }

    let chain_rules: Vec<&Rule> =
        rules.iter().filter(|r| r.body.iter().any(|b| matches!(b, BodyAtom::Relation { .. }))).collect();
    if chain_rules.is_empty() {
        return Ok(program);
    }
    for t in triples {
        let Some(&outer) = local.get(&t.outer) else {
            continue;
        };
        let (Some(&first), Some(&second)) = (local.get(&t.first_hop), local.get(&t.second_hop)) else {
            return Err(Error::Invalid(format!(
                "chain triple for `{}` has a member pair outside the grounded component",
                graph.pair(t.outer).pair_id
            )));
        };
        for rule in &chain_rules {
            let head = rule.head.expect("chain rules have a head");
            let body_atoms = rule
                .body
                .iter()
                .map(|b| match *b {
                    BodyAtom::Relation { hop: Hop::First, label } => Ok(program.atom(first, label)),
                    BodyAtom::Relation { hop: Hop::Second, label } => Ok(program.atom(second, label)),
                    BodyAtom::Observed(_) => {
                        Err(Error::Invalid(format!("rule {} mixes observed and relation atoms", rule.id)))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            program.potentials.push(GroundPotential {
                rule: rule.id,
                weight: rule.weight,
                power: options.power,
                body_atoms,
                observed: Vec::new(),
                head_atom: program.atom(outer, head),
                head_pair: outer,
            });
        }
    }
    Ok(program)
}
