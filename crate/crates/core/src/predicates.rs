//! Closed-form rule-body predicates computed from a pair's score bundle.

use serde::{Deserialize, Serialize};

use crate::model::{CausalScores, NliScores, NormativeScores, ScoreBundle, SentiPairScores, TuplePairScores};

/// Scoring mechanism a predicate belongs to; the unit of ablation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    Fact,
    Sentiment,
    Causal,
    Normative,
}

impl Mechanism {
    pub const ALL: [Mechanism; 4] = [Mechanism::Fact, Mechanism::Sentiment, Mechanism::Causal, Mechanism::Normative];

    pub fn as_str(self) -> &'static str {
        match self {
            Mechanism::Fact => "fact",
            Mechanism::Sentiment => "sentiment",
            Mechanism::Causal => "causal",
            Mechanism::Normative => "normative",
        }
    }
}

impl std::str::FromStr for Mechanism {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        Mechanism::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| crate::Error::Invalid(format!("unknown mechanism `{s}`")))
    }
}

/// The thirteen observed predicates, in rule order (R1..R13).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    FactEntail,
    FactContradict,
    FactConflict,
    SentiConflict,
    SentiCoherent,
    CauseSc,
    ObstructSc,
    CauseCs,
    ObstructCs,
    BackingConseq,
    RefutingConseq,
    BackingNorm,
    RefutingNorm,
}

impl Predicate {
    pub const ALL: [Predicate; 13] = [
        Predicate::FactEntail,
        Predicate::FactContradict,
        Predicate::FactConflict,
        Predicate::SentiConflict,
        Predicate::SentiCoherent,
        Predicate::CauseSc,
        Predicate::ObstructSc,
        Predicate::CauseCs,
        Predicate::ObstructCs,
        Predicate::BackingConseq,
        Predicate::RefutingConseq,
        Predicate::BackingNorm,
        Predicate::RefutingNorm,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn mechanism(self) -> Mechanism {
        use Predicate::*;
        match self {
            FactEntail | FactContradict | FactConflict => Mechanism::Fact,
            SentiConflict | SentiCoherent => Mechanism::Sentiment,
            CauseSc | ObstructSc | CauseCs | ObstructCs => Mechanism::Causal,
            BackingConseq | RefutingConseq | BackingNorm | RefutingNorm => Mechanism::Normative,
        }
    }
}

/// Evaluated predicate values for one pair; `None` where the source block was absent.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PredicateVector {
    values: [Option<f64>; 13],
}

impl PredicateVector {
    pub fn get(&self, predicate: Predicate) -> Option<f64> {
        self.values[predicate.index()]
    }

    pub fn set(&mut self, predicate: Predicate, value: Option<f64>) {
        self.values[predicate.index()] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Predicate, f64)> + '_ {
        Predicate::ALL.into_iter().filter_map(|p| self.get(p).map(|v| (p, v)))
    }

    pub fn present(&self) -> usize {
        self.values.iter().flatten().count()
    }

    /// Forces every predicate of `mechanism` to absent.
    pub fn ablate(&mut self, mechanism: Mechanism) {
        for p in Predicate::ALL {
            if p.mechanism() == mechanism {
                self.set(p, None);
            }
        }
    }
}

/// `(FactEntail, FactContradict)`.
pub fn eval_fact(nli: &NliScores) -> (f64, f64) {
    (nli.p_ent, nli.p_con)
}

/// Max over tuple pairs and slots of `p_con(k) * prod_{k' != k} p_ent(k')`; empty input gives 0.
pub fn eval_fact_conflict(fact_pairs: &[TuplePairScores]) -> f64 {
    let mut best = 0.0_f64;
    for tuple in fact_pairs {
        let slots = &tuple.slots;
        // prefix[k] = prod of p_ent over slots < k, computed without division so p_ent = 0 is safe
        let mut prefix = Vec::with_capacity(slots.len() + 1);
        prefix.push(1.0);
        for s in slots {
            prefix.push(prefix.last().unwrap() * s.p_ent);
        }
        let mut suffix = 1.0;
        for k in (0..slots.len()).rev() {
            best = best.max(slots[k].p_con * prefix[k] * suffix);
            suffix *= slots[k].p_ent;
        }
    }
    best
}

/// `(SentiConflict, SentiCoherent)`: each is a separate max over target pairs.
pub fn eval_sentiment(senti_pairs: &[SentiPairScores]) -> (f64, f64) {
    senti_pairs.iter().fold((0.0_f64, 0.0_f64), |(conflict, coherent), p| {
        let (s, c) = (&p.s_stmt, &p.s_claim);
        (
            conflict.max(p.p_match * (s.p_pos * c.p_neg + s.p_neg * c.p_pos)),
            coherent.max(p.p_match * (s.p_pos * c.p_pos + s.p_neg * c.p_neg)),
        )
    })
}

/// `(Cause(S,C), Obstruct(S,C), Cause(C,S), Obstruct(C,S))`.
pub fn eval_causal(causal: &CausalScores) -> (f64, f64, f64, f64) {
    (causal.sc_cause, causal.sc_obstruct, causal.cs_cause, causal.cs_obstruct)
}

/// `(BackingConseq, RefutingConseq, BackingNorm, RefutingNorm)`.
pub fn eval_normative(n: &NormativeScores) -> (f64, f64, f64, f64) {
    let backing_conseq = n.p_conseq * (n.q_pos * n.r_consist + n.q_neg * n.r_contra);
    let refuting_conseq = n.p_conseq * (n.q_neg * n.r_consist + n.q_pos * n.r_contra);
    let backing_norm = n.p_norm * (n.p_adv * n.r_consist + n.p_opp * n.r_contra);
    let refuting_norm = n.p_norm * (n.p_opp * n.r_consist + n.p_adv * n.r_contra);
    (backing_conseq, refuting_conseq, backing_norm, refuting_norm)
}

pub fn evaluate_all(bundle: &ScoreBundle) -> PredicateVector {
    use Predicate::*;
    let mut v = PredicateVector::default();
    if let Some(nli) = &bundle.nli {
        let (entail, contradict) = eval_fact(nli);
        v.set(FactEntail, Some(entail));
        v.set(FactContradict, Some(contradict));
    }
    if let Some(fact_pairs) = &bundle.fact_pairs {
        v.set(FactConflict, Some(eval_fact_conflict(fact_pairs)));
    }
    if let Some(senti_pairs) = &bundle.senti_pairs {
        let (conflict, coherent) = eval_sentiment(senti_pairs);
        v.set(SentiConflict, Some(conflict));
        v.set(SentiCoherent, Some(coherent));
    }
    if let Some(causal) = &bundle.causal {
        let (c_sc, o_sc, c_cs, o_cs) = eval_causal(causal);
        v.set(CauseSc, Some(c_sc));
        v.set(ObstructSc, Some(o_sc));
        v.set(CauseCs, Some(c_cs));
        v.set(ObstructCs, Some(o_cs));
    }
    if let Some(normative) = &bundle.normative {
        let (bc, rc, bn, rn) = eval_normative(normative);
        v.set(BackingConseq, Some(bc));
        v.set(RefutingConseq, Some(rc));
        v.set(BackingNorm, Some(bn));
        v.set(RefutingNorm, Some(rn));
    }
    v
}
