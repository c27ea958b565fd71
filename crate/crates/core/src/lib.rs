//! Probabilistic soft logic for classifying argumentative relations.
//!
//! Pairs of statements and claims are scored by upstream models (entailment, sentiment,
//! causal and normative extractors). Those scores feed thirteen predicates, which ground
//! weighted logic rules into a hinge-loss Markov random field. MAP inference over the field
//! yields a soft support/attack/neutral assignment per pair.

pub mod baselines;
pub mod chain;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod model;
pub mod predicates;
pub mod psl;
pub mod ruleset;
pub mod synth;

pub use error::{Error, Result};
