use nalgebra::DMatrix;

use super::simplex::{LinearProgram, Relation};
use super::{
    check_inputs, constraint_residual, l1_objective, regularize_weights, solve_l1_equality,
    SolveResult, SolveStatus, FEASIBILITY_TOL,
};
use crate::{Error, Result};

/// Minimizes `‖WΨ‖₁` subject to `AᵀΨ = r` and `‖Ψ − Ψ^S‖₁ ≤ γ`.
///
/// Convenience wrapper around [`CombinedSolver`] for a single `γ`.
pub fn solve_combined(
    a: &DMatrix<f64>,
    w: &[f64],
    r: &[f64],
    psi_s: &[f64],
    gamma: f64,
) -> Result<SolveResult> {
    CombinedSolver::new(a, w, r, psi_s)?.solve(gamma)
}

/// The combined program for one query, reusable across many radii `γ`.
///
/// The unconstrained minimizer `Ψ^D` is computed once. Any radius reaching it
/// (`γ ≥ ‖Ψ^D − Ψ^S‖₁`) returns it directly, `γ = 0` returns `Ψ^S` exactly,
/// and radii in between solve a bounded-variable LP.
///
/// Each weight is written as `Ψ_j = lo_j − below_j + mid_j + above_j` with
/// `lo_j = min(0, Ψ^S_j)`, `0 ≤ mid_j ≤ |Ψ^S_j|` and `below_j, above_j ≥ 0`.
/// Both `|Ψ_j|` and `|Ψ_j − Ψ^S_j|` are linear on each piece and convex across
/// pieces, so the LP needs only the `n_r` equality rows plus one ball row.
#[derive(Debug, Clone)]
pub struct CombinedSolver {
    a: DMatrix<f64>,
    w: Vec<f64>,
    r: Vec<f64>,
    psi_s: Vec<f64>,
    deterministic: SolveResult,
    deterministic_radius: f64,
}

impl CombinedSolver {
    pub fn new(a: &DMatrix<f64>, w: &[f64], r: &[f64], psi_s: &[f64]) -> Result<Self> {
        check_inputs(a, w, r)?;
        if psi_s.len() != a.nrows() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: psi_s.len(),
            });
        }
        let residual = constraint_residual(a, psi_s, r);
        if !(residual <= FEASIBILITY_TOL) {
            return Err(Error::Infeasible { residual });
        }
        let deterministic = solve_l1_equality(a, w, r)?;
        let deterministic_radius = l1_distance(&deterministic.psi, psi_s);
        Ok(Self {
            a: a.clone(),
            w: regularize_weights(w),
            r: r.to_vec(),
            psi_s: psi_s.to_vec(),
            deterministic,
            deterministic_radius,
        })
    }

    /// `Ψ^D`, the solution for every sufficiently large radius.
    pub fn deterministic(&self) -> &SolveResult {
        &self.deterministic
    }

    pub fn stochastic(&self) -> &[f64] {
        &self.psi_s
    }

    /// `‖Ψ^D − Ψ^S‖₁`: radii at or above this return `Ψ^D`.
    pub fn deterministic_radius(&self) -> f64 {
        self.deterministic_radius
    }

    pub fn solve(&self, gamma: f64) -> Result<SolveResult> {
        if gamma.is_nan() || gamma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma must be >= 0, got {gamma}"
            )));
        }
        if gamma == 0.0 {
            return Ok(self.result(self.psi_s.clone(), false));
        }
        if gamma >= self.deterministic_radius {
            return Ok(self.deterministic.clone());
        }
        self.solve_ball(gamma)
    }

    fn result(&self, psi: Vec<f64>, tied: bool) -> SolveResult {
        SolveResult {
            objective: l1_objective(&self.w, &psi),
            constraint_residual_inf: constraint_residual(&self.a, &psi, &self.r),
            psi,
            status: SolveStatus::Optimal,
            tied,
        }
    }

    fn solve_ball(&self, gamma: f64) -> Result<SolveResult> {
        let v = self.a.nrows();
        let s = &self.psi_s;
        let lo: Vec<f64> = s.iter().map(|x| x.min(0.0)).collect();
        let mid_sign: Vec<f64> = s
            .iter()
            .map(|&x| if x >= 0.0 { 1.0 } else { -1.0 })
            .collect();

        // Columns: below (0..v), mid (v..2v), above (2v..3v).
        let mut cost = Vec::with_capacity(3 * v);
        cost.extend_from_slice(&self.w);
        cost.extend(self.w.iter().zip(&mid_sign).map(|(w, sg)| w * sg));
        cost.extend_from_slice(&self.w);
        let mut lp = LinearProgram::new(cost);
        for j in 0..v {
            lp.upper[v + j] = s[j].abs();
            // Start from Ψ = Ψ^S.
            lp.start_at_upper[v + j] = s[j] >= 0.0;
        }

        for i in 0..self.a.ncols() {
            let col = self.a.column(i);
            let mut coef = Vec::with_capacity(3 * v);
            coef.extend(col.iter().map(|x| -x));
            coef.extend(col.iter());
            coef.extend(col.iter());
            let offset: f64 = col.iter().zip(&lo).map(|(x, l)| x * l).sum();
            lp.rows.push((coef, Relation::Eq, self.r[i] - offset));
        }
        let mut ball = vec![1.0; 3 * v];
        for j in 0..v {
            ball[v + j] = -mid_sign[j];
        }
        let ball_offset: f64 = s.iter().filter(|x| **x >= 0.0).sum();
        lp.rows.push((ball, Relation::Le, gamma - ball_offset));

        let sol = lp.solve()?;
        let psi = (0..v)
            .map(|j| lo[j] - sol.x[j] + sol.x[v + j] + sol.x[2 * v + j])
            .collect();
        Ok(self.result(psi, sol.tied))
    }
}

pub(crate) fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
