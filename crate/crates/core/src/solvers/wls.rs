use nalgebra::{DMatrix, DVector};

use super::{
    check_inputs, constraint_residual, regularize_weights, SolveResult, SolveStatus,
    FEASIBILITY_TOL,
};
use crate::{Error, Result};

/// Minimizes `ΨᵀWΨ` subject to `AᵀΨ = r`.
///
/// Closed form `Ψ = W⁻¹A(AᵀW⁻¹A)⁻¹r`. When `AᵀW⁻¹A` is singular the
/// Moore-Penrose pseudo-inverse replaces the inverse and the status becomes
/// [`SolveStatus::DegenerateRegularized`]; if `r` is then still not reachable
/// the constraints are infeasible.
pub fn solve_weighted_ls(a: &DMatrix<f64>, w: &[f64], r: &[f64]) -> Result<SolveResult> {
    check_inputs(a, w, r)?;
    let w = regularize_weights(w);
    let inv_w: Vec<f64> = w.iter().map(|x| 1.0 / x).collect();

    // M = AᵀW⁻¹A
    let weighted = DMatrix::from_fn(a.nrows(), a.ncols(), |j, i| a[(j, i)] * inv_w[j]);
    let m = a.transpose() * &weighted;
    let rhs = DVector::from_column_slice(r);

    let psi_for =
        |lambda: &DVector<f64>| -> Vec<f64> { (&weighted * lambda).iter().copied().collect() };

    let mut status = SolveStatus::Optimal;
    let mut psi = None;
    if let Some(chol) = m.clone().cholesky() {
        let lambda = chol.solve(&rhs);
        let candidate = psi_for(&lambda);
        let scale = 1.0 + r.iter().fold(0.0_f64, |s, x| s.max(x.abs()));
        if lambda.iter().all(|x| x.is_finite())
            && constraint_residual(a, &candidate, r) <= 1e-9 * scale
        {
            psi = Some(candidate);
        }
    }
    let psi = match psi {
        Some(p) => p,
        None => {
            status = SolveStatus::DegenerateRegularized;
            let svd = m.svd(true, true);
            let tol = 1e-12 * svd.singular_values.max().max(f64::MIN_POSITIVE);
            let lambda = svd
                .solve(&rhs, tol)
                .map_err(|e| Error::InvalidParameter(format!("pseudo-inverse failed: {e}")))?;
            psi_for(&lambda)
        }
    };

    let residual = constraint_residual(a, &psi, r);
    if !(residual <= FEASIBILITY_TOL) {
        return Err(Error::Infeasible { residual });
    }
    let objective = psi.iter().zip(&w).map(|(p, w)| w * p * p).sum();
    Ok(SolveResult {
        psi,
        objective,
        constraint_residual_inf: residual,
        status,
        tied: false,
    })
}
