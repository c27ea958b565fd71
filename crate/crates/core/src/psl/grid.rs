//! Exhaustive MAP search over discretized simplices; a reference for small programs.

use super::program::GroundProgram;
use super::{Assignment, SolverDiagnostics};
use crate::error::{Error, Result};

pub const GRID_MAX_PAIRS: usize = 3;

/// Points `(i/n, j/n, ...)` of the simplex grid with step `1/n`, in lexicographic order.
fn simplex_points(dim: usize, n: usize) -> Vec<Vec<f64>> {
    fn rec(dim: usize, remaining: usize, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if dim == 1 {
            prefix.push(remaining);
            out.push(prefix.iter().map(|&c| c as f64 / n as f64).collect());
            prefix.pop();
            return;
        }
        for c in 0..=remaining {
            prefix.push(c);
            rec(dim - 1, remaining - c, n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, n, n, &mut Vec::new(), &mut out);
    out
}

/// Minimizes the energy over the product of per-pair simplex grids of step `resolution`
/// (which must divide 1). The first minimizer in lexicographic order wins.
pub fn solve_map_grid(program: &GroundProgram, resolution: f64) -> Result<Assignment> {
    let pairs = program.num_pairs();
    if pairs > GRID_MAX_PAIRS {
        return Err(Error::ProgramTooLarge { pairs, max: GRID_MAX_PAIRS });
    }
    let steps = (1.0 / resolution).round();
    if resolution.is_nan() || resolution <= 0.0 || steps < 1.0 || (steps * resolution - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!("grid resolution {resolution} must divide 1")));
    }
    let k = program.task_mode.num_labels();
    let points = simplex_points(k, steps as usize);

    // Potentials whose atoms all belong to one pair are tabulated per grid point.
    let pair_of = |atom: usize| atom / k;
    let mut local: Vec<Vec<usize>> = vec![Vec::new(); pairs];
    let mut cross = Vec::new();
    for (i, p) in program.potentials.iter().enumerate() {
        let owner = pair_of(p.head_atom);
        if p.body_atoms.iter().all(|&a| pair_of(a) == owner) {
            local[owner].push(i);
        } else {
            cross.push(i);
        }
    }
    let mut x = vec![0.0; program.num_atoms()];
    let tables: Vec<Vec<f64>> = (0..pairs)
        .map(|pair| {
            points
                .iter()
                .map(|pt| {
                    x[pair * k..(pair + 1) * k].copy_from_slice(pt);
                    local[pair].iter().map(|&i| program.potentials[i].value(&x)).sum()
                })
                .collect()
        })
        .collect();

    let mut digits = vec![0usize; pairs];
    for pair in 0..pairs {
        x[pair * k..(pair + 1) * k].copy_from_slice(&points[0]);
    }
    let mut best = (f64::INFINITY, digits.clone());
    loop {
        let e: f64 = (0..pairs).map(|p| tables[p][digits[p]]).sum::<f64>()
            + cross.iter().map(|&i| program.potentials[i].value(&x)).sum::<f64>();
        if e < best.0 {
            best = (e, digits.clone());
        }
        // increment, last pair fastest
        let mut pos = pairs;
        loop {
            if pos == 0 {
                let values = best.1.iter().flat_map(|&d| points[d].iter().copied()).collect();
                let diagnostics = SolverDiagnostics { converged: true, ..SolverDiagnostics::default() };
                return Assignment::from_feasible(program, values, diagnostics);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < points.len() {
                x[pos * k..(pos + 1) * k].copy_from_slice(&points[digits[pos]]);
                break;
            }
            digits[pos] = 0;
            x[pos * k..(pos + 1) * k].copy_from_slice(&points[0]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(simplex_points(3, 20).len(), 231);
        assert_eq!(simplex_points(2, 20).len(), 21);
        assert_eq!(simplex_points(3, 20)[0], vec![0.0, 0.0, 1.0]);
        for p in simplex_points(3, 20) {
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
