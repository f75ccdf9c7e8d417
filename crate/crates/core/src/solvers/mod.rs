//! The three weight programs.
//!
//! All share the equality constraint `AᵀΨ = r_k` and the diagonal weights
//! `w_j = σ + L‖z_{j-1} − z_k‖`:
//!
//! | program | objective | solver |
//! |---|---|---|
//! | [`solve_weighted_ls`] | `ΨᵀWΨ` | closed form |
//! | [`solve_l1_equality`] | `‖WΨ‖₁` | simplex |
//! | [`solve_combined`] | `‖WΨ‖₁` with `‖Ψ − Ψ^S‖₁ ≤ γ` | simplex |
//!
//! Before either program, every weight is raised by the floor
//! `1e-12·(1 + max w_j)` so that `W` stays invertible and the L1 objective
//! stays bounded when `σ = 0` and the query coincides with a stored embedding.

mod combined;
mod l1;
pub(crate) mod simplex;
mod wls;

pub use combined::{solve_combined, CombinedSolver};
pub use l1::solve_l1_equality;
pub use wls::solve_weighted_ls;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Tolerance on `‖AᵀΨ − r_k‖∞` for a solution to count as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// `AᵀW⁻¹A` was singular and a pseudo-inverse was used.
    DegenerateRegularized,
}

/// Weights produced by one of the programs.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub psi: Vec<f64>,
    pub objective: f64,
    pub constraint_residual_inf: f64,
    pub status: SolveStatus,
    /// Other weight vectors attain the same objective (reported, not resolved).
    pub tied: bool,
}

/// Adds the invertibility floor to every weight.
pub fn regularize_weights(w: &[f64]) -> Vec<f64> {
    let max = w.iter().copied().fold(0.0, f64::max);
    let eps = 1e-12 * (1.0 + max);
    w.iter().map(|x| x + eps).collect()
}

/// `‖AᵀΨ − r‖∞`
pub fn constraint_residual(a: &DMatrix<f64>, psi: &[f64], r: &[f64]) -> f64 {
    (0..a.ncols())
        .map(|i| {
            let s: f64 = a.column(i).iter().zip(psi).map(|(x, p)| x * p).sum();
            (s - r[i]).abs()
        })
        .fold(0.0, f64::max)
}

/// `Σ w_j |Ψ_j|`
pub fn l1_objective(w: &[f64], psi: &[f64]) -> f64 {
    w.iter().zip(psi).map(|(w, p)| w * p.abs()).sum()
}

fn check_inputs(a: &DMatrix<f64>, w: &[f64], r: &[f64]) -> Result<()> {
    if w.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: w.len(),
        });
    }
    if r.len() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.ncols(),
            got: r.len(),
        });
    }
    if a.nrows() < a.ncols() {
        return Err(Error::InsufficientData {
            rows: a.nrows(),
            features: a.ncols(),
        });
    }
    if let Some(bad) = w.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "weights must be finite and >= 0, got {bad}"
        )));
    }
    Ok(())
}
