//! Indirect arguments built from two chained direct arguments, and the scoring manifest.

use std::collections::{BTreeMap, HashMap};

use crate::io::ManifestRecord;
use crate::model::{ArgumentGraph, ArgumentPair, PairKind, ScoreBundle, Split};

/// Indices (into the graph) of an indirect pair (S, C) and the direct hops (S, I), (I, C).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainTriple {
    pub outer: usize,
    pub first_hop: usize,
    pub second_hop: usize,
}

/// Deterministic id for the indirect pair (statement, claim) within a split.
pub fn indirect_pair_id(statement: &str, claim: &str, split: Split) -> String {
    let split = match split {
        Split::Fit => "fit",
        Split::Val => "val",
        Split::Test => "test",
    };
    format!("ind:{split}:{statement}:{claim}")
}

/// Adds one indirect pair per distinct depth-2 chain (S, I), (I, C) with S != C inside a
/// split, reusing indirect pairs already present. Returns the augmented graph and all triples.
pub fn build_indirect(graph: &ArgumentGraph) -> (ArgumentGraph, Vec<ChainTriple>) {
    let mut out = graph.clone();
    let mut existing: HashMap<(String, String, Split), usize> = graph
        .pairs()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.kind == PairKind::Indirect)
        .map(|(i, p)| ((p.statement_id.clone(), p.claim_id.clone(), p.split), i))
        .collect();

    let mut triples = Vec::new();
    for (first_idx, first) in graph.direct_pairs() {
        for &second_idx in graph.incident(&first.claim_id) {
            let second = graph.pair(second_idx);
            if !second.is_direct() || second.split != first.split || second.statement_id != first.claim_id {
                continue;
            }
            if second.claim_id == first.statement_id {
                log::warn!(
                    "skipping self-loop chain {} -> {} -> {}",
                    first.statement_id,
                    first.claim_id,
                    second.claim_id
                );
                continue;
            }
            let key = (first.statement_id.clone(), second.claim_id.clone(), first.split);
            let outer = match existing.get(&key) {
                Some(&i) => i,
                None => {
                    let pair = ArgumentPair {
                        pair_id: indirect_pair_id(&key.0, &key.1, key.2),
                        statement_id: key.0.clone(),
                        claim_id: key.1.clone(),
                        kind: PairKind::Indirect,
                        gold: None,
                        split: first.split,
                        topic: first.topic.clone(),
                    };
                    let i = out.add_pair(pair).expect("indirect pair ids are unique per (split, statement, claim)");
                    existing.insert(key, i);
                    i
                }
            };
            triples.push(ChainTriple { outer, first_hop: first_idx, second_hop: second_idx });
        }
    }
    (out, triples)
}

/// Pairs (direct and indirect) lacking a score bundle, ordered by pair id.
pub fn emit_pair_manifest(graph: &ArgumentGraph, scores: &BTreeMap<String, ScoreBundle>) -> Vec<ManifestRecord> {
    let mut manifest: Vec<ManifestRecord> = graph
        .pairs()
        .iter()
        .filter(|p| !scores.contains_key(&p.pair_id))
        .map(|p| ManifestRecord {
            pair_id: p.pair_id.clone(),
            statement_id: p.statement_id.clone(),
            claim_id: p.claim_id.clone(),
            kind: p.kind,
        })
        .collect();
    manifest.sort_by(|a, b| a.pair_id.cmp(&b.pair_id));
    manifest
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TaskMode;

    fn graph(edges: &[(&str, &str)]) -> ArgumentGraph {
        ArgumentGraph::from_pairs(
            TaskMode::Ternary,
            edges.iter().enumerate().map(|(i, (s, c))| ArgumentPair::direct(format!("d{i}"), *s, *c, Split::Test)),
        )
        .unwrap()
    }

    fn endpoints(g: &ArgumentGraph) -> Vec<(String, String)> {
        let mut v: Vec<_> =
            g.pairs().iter().filter(|p| !p.is_direct()).map(|p| (p.statement_id.clone(), p.claim_id.clone())).collect();
        v.sort();
        v
    }

    #[test]
    fn single_chain() {
        let (g, triples) = build_indirect(&graph(&[("Y", "X"), ("X", "R")]));
        assert_eq!(endpoints(&g), vec![("Y".into(), "R".into())]);
        assert_eq!(triples, vec![ChainTriple { outer: 2, first_hop: 0, second_hop: 1 }]);
    }

    #[test]
    fn disjoint_pairs_make_no_chains() {
        let (g, triples) = build_indirect(&graph(&[("A", "B"), ("C", "D")]));
        assert_eq!(g.len(), 2);
        assert!(triples.is_empty());
    }

    #[test]
    fn path_of_three_only_combines_adjacent_hops() {
        let (g, triples) = build_indirect(&graph(&[("D", "C"), ("C", "B"), ("B", "A")]));
        assert_eq!(endpoints(&g), vec![("C".into(), "A".into()), ("D".into(), "B".into())]);
        assert_eq!(triples.len(), 2);
    }

    #[test]
    fn self_loops_are_skipped() {
        let (g, triples) = build_indirect(&graph(&[("A", "B"), ("B", "A")]));
        assert_eq!(g.len(), 2);
        assert!(triples.is_empty());
    }

    #[test]
    fn chains_stay_within_a_split() {
        let g = ArgumentGraph::from_pairs(
            TaskMode::Ternary,
            [ArgumentPair::direct("a", "S", "I", Split::Val), ArgumentPair::direct("b", "I", "C", Split::Test)],
        )
        .unwrap();
        assert!(build_indirect(&g).1.is_empty());
    }

    #[test]
    fn idempotent() {
        let (once, t1) = build_indirect(&graph(&[("D", "C"), ("C", "B"), ("B", "A"), ("E", "C")]));
        let (twice, t2) = build_indirect(&once);
        assert_eq!(once.pairs(), twice.pairs());
        assert_eq!(t1, t2);
    }

    #[test]
    fn manifest_lists_unscored_pairs_in_id_order() {
        let (g, _) = build_indirect(&graph(&[("Y", "X"), ("X", "R")]));
        let mut scores = BTreeMap::new();
        for id in ["d0", "d1"] {
            scores.insert(id.to_string(), ScoreBundle::new(id));
        }
        let manifest = emit_pair_manifest(&g, &scores);
        assert_eq!(manifest.len(), 1);
        assert_eq!(manifest[0].kind, PairKind::Indirect);
        assert_eq!(manifest[0].pair_id, indirect_pair_id("Y", "R", Split::Test));

        let ind = manifest[0].pair_id.clone();
        scores.insert(ind.clone(), ScoreBundle::new(ind));
        assert!(emit_pair_manifest(&g, &scores).is_empty());

        let all = emit_pair_manifest(&g, &BTreeMap::new());
        let ids: Vec<_> = all.iter().map(|m| m.pair_id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }
}
