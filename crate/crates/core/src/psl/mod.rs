//! Hinge-loss MRF grounding and MAP inference.

mod admm;
mod grid;
mod infer;
mod program;
mod simplex;

use serde::{Deserialize, Serialize};

pub use admm::{solve_map_admm, SolverParams};
pub use grid::{solve_map_grid, GRID_MAX_PAIRS};
pub use infer::{infer, ComponentReport, InferenceOutcome, PairPrediction};
pub use program::{
    distance_to_satisfaction, energy, ground, GroundOptions, GroundPotential, GroundProgram, Simplex,
    FEASIBILITY_TOLERANCE,
};
pub use simplex::{project_simplex, project_simplex_in_place};

use crate::error::Result;
use crate::model::RelationLabel;

/// Atom values closer than this count as tied when picking a label.
pub const LABEL_TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub converged: bool,
}

/// MAP values of a program's atoms with per-pair labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// Value per free atom, in program atom order.
    pub values: Vec<f64>,
    pub energy: f64,
    /// Predicted label per local pair.
    pub labels: Vec<RelationLabel>,
    /// Energy charged to each local pair.
    pub energy_shares: Vec<f64>,
    pub diagnostics: SolverDiagnostics,
}

impl Assignment {
    /// Projects each pair's block of `values` onto its simplex, then scores it.
    pub(crate) fn from_consensus(
        program: &GroundProgram,
        mut values: Vec<f64>,
        diagnostics: SolverDiagnostics,
    ) -> Result<Assignment> {
        let mut scratch = Vec::new();
        for s in &program.simplices {
            project_simplex_in_place(&mut values[s.atoms.clone()], &mut scratch);
        }
        Assignment::from_feasible(program, values, diagnostics)
    }

    pub(crate) fn from_feasible(
        program: &GroundProgram,
        values: Vec<f64>,
        diagnostics: SolverDiagnostics,
    ) -> Result<Assignment> {
        let energy = energy(program, &values)?;
        let k = program.task_mode.num_labels();
        let labels = values.chunks(k).map(|block| predict_label(block, program.labels())).collect();
        let energy_shares = program.energy_by_pair(&values);
        Ok(Assignment { values, energy, labels, energy_shares, diagnostics })
    }

    /// Atom values of one local pair, in label order.
    pub fn pair_values(&self, program: &GroundProgram, pair: usize) -> &[f64] {
        let k = program.task_mode.num_labels();
        &self.values[pair * k..(pair + 1) * k]
    }
}

/// Arg-max label; near-ties resolve as neutral, then attack, then support.
pub fn predict_label(values: &[f64], labels: &[RelationLabel]) -> RelationLabel {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tied = |label: RelationLabel| {
        labels.iter().position(|&l| l == label).is_some_and(|i| values[i] >= max - LABEL_TIE_TOLERANCE)
    };
    [RelationLabel::Neutral, RelationLabel::Attack, RelationLabel::Support]
        .into_iter()
        .find(|&l| tied(l))
        .expect("values are non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TaskMode;

    #[test]
    fn ties_prefer_neutral_then_attack() {
        let ternary = TaskMode::Ternary.labels();
        assert_eq!(predict_label(&[0.5, 0.5, 0.0], ternary), RelationLabel::Attack);
        assert_eq!(predict_label(&[1.0 / 3.0; 3], ternary), RelationLabel::Neutral);
        assert_eq!(predict_label(&[0.6, 0.4, 0.0], ternary), RelationLabel::Support);
        assert_eq!(predict_label(&[0.5, 0.5], TaskMode::Binary.labels()), RelationLabel::Attack);
    }
}
