//! Consensus ADMM for hinge-loss MAP inference.
//!
//! Every potential and every simplex constraint keeps a local copy of the atoms it touches.
//! One iteration solves each local problem in closed form against `z - u`, sets the
//! consensus `z` to the box-clipped mean of `x + u` over all copies of an atom, and takes a
//! scaled dual step `u += x - z`. Loops run in a fixed order, so results are bitwise
//! reproducible.

use serde::{Deserialize, Serialize};

use super::program::{GroundPotential, GroundProgram};
use super::simplex::project_simplex_in_place;
use super::{Assignment, SolverDiagnostics};
use crate::error::{Error, Result};
use crate::ruleset::HingePower;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverParams {
    /// ADMM penalty.
    pub rho: f64,
    pub eps_abs: f64,
    pub eps_rel: f64,
    pub max_iters: usize,
    /// Step of the brute-force oracle's simplex grid.
    pub grid_resolution: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams { rho: 1.0, eps_abs: 1e-5, eps_rel: 1e-4, max_iters: 25_000, grid_resolution: 0.05 }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.rho)
            && positive(self.eps_abs)
            && positive(self.eps_rel)
            && positive(self.grid_resolution)
            && self.max_iters > 0)
        {
            return Err(Error::Config(format!("solver parameters must be positive: {self:?}")));
        }
        Ok(())
    }
}

enum Block {
    Hinge {
        weight: f64,
        squared: bool,
        offset: f64,
        /// Squared norm of the coefficient vector.
        norm2: f64,
    },
    Simplex,
}

struct Layout {
    blocks: Vec<(Block, std::ops::Range<usize>)>,
    /// Atom of each local copy.
    var: Vec<usize>,
    /// Linear coefficient of each copy (unused for simplex copies).
    coef: Vec<f64>,
    copies_per_atom: Vec<f64>,
}

impl Layout {
    fn new(program: &GroundProgram) -> Self {
        let mut layout = Layout {
            blocks: Vec::with_capacity(program.potentials.len() + program.simplices.len()),
            var: Vec::new(),
            coef: Vec::new(),
            copies_per_atom: vec![0.0; program.num_atoms()],
        };
        for p in &program.potentials {
            layout.push_hinge(p);
        }
        for s in &program.simplices {
            let start = layout.var.len();
            for atom in s.atoms.clone() {
                layout.var.push(atom);
                layout.coef.push(0.0);
                layout.copies_per_atom[atom] += 1.0;
            }
            layout.blocks.push((Block::Simplex, start..layout.var.len()));
        }
        layout
    }

    fn push_hinge(&mut self, p: &GroundPotential) {
        let start = self.var.len();
        let terms = p.linear_terms();
        let norm2 = terms.iter().map(|(_, c)| c * c).sum();
        for (atom, c) in terms {
            self.var.push(atom);
            self.coef.push(c);
            self.copies_per_atom[atom] += 1.0;
        }
        self.blocks.push((
            Block::Hinge { weight: p.weight, squared: p.power == HingePower::Squared, offset: p.offset(), norm2 },
            start..self.var.len(),
        ));
    }
}

/// Minimizes `weight * max(0, offset + a.x)^p + rho/2 |x - v|^2` in place (`x` holds `v`).
fn hinge_prox(x: &mut [f64], a: &[f64], weight: f64, squared: bool, offset: f64, norm2: f64, rho: f64) {
    let s = offset + a.iter().zip(x.iter()).map(|(c, v)| c * v).sum::<f64>();
    if s <= 0.0 || weight == 0.0 {
        return;
    }
    let step = if squared {
        2.0 * weight * s / (rho + 2.0 * weight * norm2)
    } else if s - weight / rho * norm2 >= 0.0 {
        weight / rho
    } else {
        // The full gradient step overshoots the kink: land on the hyperplane.
        s / norm2
    };
    for (xi, c) in x.iter_mut().zip(a) {
        *xi -= step * c;
    }
}

/// MAP inference by consensus ADMM. Non-convergence is reported, not an error.
pub fn solve_map_admm(program: &GroundProgram, params: &SolverParams) -> Result<Assignment> {
    params.validate()?;
    let n_atoms = program.num_atoms();
    let k = program.task_mode.num_labels() as f64;
    let layout = Layout::new(program);
    let n_copies = layout.var.len();
    let rho = params.rho;

    let mut z = vec![1.0 / k; n_atoms];
    let mut z_prev = z.clone();
    let mut x: Vec<f64> = layout.var.iter().map(|&a| z[a]).collect();
    let mut u = vec![0.0; n_copies];
    let mut acc = vec![0.0; n_atoms];
    let mut scratch = Vec::new();

    let sqrt_copies = (n_copies as f64).sqrt();
    let mut diagnostics = SolverDiagnostics::default();

    for iteration in 1..=params.max_iters {
        // local steps
        for (block, range) in &layout.blocks {
            let xs = &mut x[range.clone()];
            for (xi, (&var, &ui)) in xs.iter_mut().zip(layout.var[range.clone()].iter().zip(&u[range.clone()])) {
                *xi = z[var] - ui;
            }
            match *block {
                Block::Hinge { weight, squared, offset, norm2 } => {
                    hinge_prox(xs, &layout.coef[range.clone()], weight, squared, offset, norm2, rho)
                }
                Block::Simplex => project_simplex_in_place(xs, &mut scratch),
            }
        }

        // consensus step
        std::mem::swap(&mut z, &mut z_prev);
        acc.iter_mut().for_each(|a| *a = 0.0);
        for i in 0..n_copies {
            acc[layout.var[i]] += x[i] + u[i];
        }
        for a in 0..n_atoms {
            z[a] = (acc[a] / layout.copies_per_atom[a]).clamp(0.0, 1.0);
        }

        // dual step and residuals
        let mut primal2 = 0.0;
        let mut dual2 = 0.0;
        let mut x_norm2 = 0.0;
        let mut z_norm2 = 0.0;
        let mut u_norm2 = 0.0;
        for i in 0..n_copies {
            let zi = z[layout.var[i]];
            let r = x[i] - zi;
            u[i] += r;
            primal2 += r * r;
            let dz = zi - z_prev[layout.var[i]];
            dual2 += dz * dz;
            x_norm2 += x[i] * x[i];
            z_norm2 += zi * zi;
            u_norm2 += u[i] * u[i];
        }
        if !primal2.is_finite() || !u_norm2.is_finite() {
            return Err(Error::NonFinite { iteration });
        }
        let primal = primal2.sqrt();
        let dual = rho * dual2.sqrt();
        diagnostics.iterations = iteration;
        diagnostics.primal_residual = primal;
        diagnostics.dual_residual = dual;

        let eps_primal = sqrt_copies * params.eps_abs + params.eps_rel * x_norm2.sqrt().max(z_norm2.sqrt());
        let eps_dual = sqrt_copies * params.eps_abs + params.eps_rel * rho * u_norm2.sqrt();
        if primal <= eps_primal && dual <= eps_dual {
            diagnostics.converged = true;
            break;
        }
    }

    if !diagnostics.converged {
        log::warn!(
            "ADMM did not converge in {} iterations (primal {:.3e}, dual {:.3e}) on a component of {} pairs",
            diagnostics.iterations,
            diagnostics.primal_residual,
            diagnostics.dual_residual,
            program.num_pairs()
        );
    }
    Assignment::from_consensus(program, z, diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_prox_stops_at_kink() {
        // minimize w * max(0, 0.5 - x) + rho/2 (x - 0)^2 with w = 10: optimum at the kink x = 0.5
        let mut x = [0.0];
        hinge_prox(&mut x, &[-1.0], 10.0, false, 0.5, 1.0, 1.0);
        assert!((x[0] - 0.5).abs() < 1e-12);
        // with w = 0.1 the gradient step does not reach the kink
        let mut x = [0.0];
        hinge_prox(&mut x, &[-1.0], 0.1, false, 0.5, 1.0, 1.0);
        assert!((x[0] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn squared_prox_closed_form() {
        // minimize (0.5 - x)^2 + 1/2 x^2 => x = 1/3
        let mut x = [0.0];
        hinge_prox(&mut x, &[-1.0], 1.0, true, 0.5, 1.0, 1.0);
        assert!((x[0] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_params() {
        let params = SolverParams { rho: 0.0, ..SolverParams::default() };
        assert!(params.validate().is_err());
    }
}
