use nalgebra::DMatrix;

use super::simplex::{LinearProgram, Relation};
use super::{
    check_inputs, constraint_residual, l1_objective, regularize_weights, SolveResult, SolveStatus,
};
use crate::{Error, Result};

/// Minimizes `Σ w_j |Ψ_j|` subject to `AᵀΨ = r`.
///
/// Split-variable LP `Ψ = Ψ⁺ − Ψ⁻`, `Ψ± ≥ 0`, with columns ordered
/// `[Ψ⁺_1 … Ψ⁺_v, Ψ⁻_1 … Ψ⁻_v]`. The optimum is a vertex with at most `n_r`
/// nonzero weights; among alternative optima the lowest-index vertex reached
/// by the simplex is returned.
pub fn solve_l1_equality(a: &DMatrix<f64>, w: &[f64], r: &[f64]) -> Result<SolveResult> {
    check_inputs(a, w, r)?;
    let w = regularize_weights(w);
    let v = a.nrows();

    let mut lp = LinearProgram::new(w.iter().chain(&w).copied().collect());
    lp.rows = (0..a.ncols())
        .map(|i| {
            let col = a.column(i);
            let coef = col.iter().copied().chain(col.iter().map(|x| -x)).collect();
            (coef, Relation::Eq, r[i])
        })
        .collect();
    let solution = lp.solve()?;

    let psi: Vec<f64> = (0..v).map(|j| solution.x[j] - solution.x[v + j]).collect();
    let residual = constraint_residual(a, &psi, r);
    if !(residual <= super::FEASIBILITY_TOL) {
        return Err(Error::Infeasible { residual });
    }
    Ok(SolveResult {
        objective: l1_objective(&w, &psi),
        psi,
        constraint_residual_inf: residual,
        status: SolveStatus::Optimal,
        tied: solution.tied,
    })
}
