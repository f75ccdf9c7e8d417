use super::Forecast;
use crate::solvers::{solve_weighted_ls, CombinedSolver, SolveResult};
use crate::{apply_regressor, weight_diagonal, DesignSet, Embedding, HyperParams, Result};

/// Combined-program forecast at `hp.gamma`.
pub fn predict_cp(design: &DesignSet, z_k: &Embedding, hp: &HyperParams) -> Result<Forecast> {
    CpQuery::new(design, z_k, hp.sigma, hp.l_const)?.forecast(hp.gamma)
}

/// One query point with `W`, `Ψ^S` and `Ψ^D` precomputed, so that many radii
/// can be evaluated cheaply.
#[derive(Debug, Clone)]
pub struct CpQuery {
    solver: CombinedSolver,
    weights: Vec<f64>,
    targets: Vec<f64>,
    sigma: f64,
}

impl CpQuery {
    pub fn new(design: &DesignSet, z_k: &Embedding, sigma: f64, l_const: f64) -> Result<Self> {
        let w = weight_diagonal(design, z_k, sigma, l_const)?;
        let r = apply_regressor(z_k, design.spec())?;
        let psi_s = solve_weighted_ls(design.matrix(), &w, &r)?;
        let solver = CombinedSolver::new(design.matrix(), &w, &r, &psi_s.psi)?;
        Ok(Self {
            solver,
            weights: w,
            targets: design.targets().to_vec(),
            sigma,
        })
    }

    pub fn solver(&self) -> &CombinedSolver {
        &self.solver
    }

    pub fn forecast(&self, gamma: f64) -> Result<Forecast> {
        let solved = self.solver.solve(gamma)?;
        Ok(self.to_forecast(solved))
    }

    fn to_forecast(&self, solved: SolveResult) -> Forecast {
        let value = solved
            .psi
            .iter()
            .zip(&self.targets)
            .map(|(p, y)| p * y)
            .sum();
        // Σ |Ψ_j| w_j + σ, with the unregularized weights.
        let bound = solved
            .psi
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| p.abs() * w)
            .sum::<f64>()
            + self.sigma;
        Forecast {
            value,
            weights: solved.psi,
            error_bound: Some(bound),
            status: solved.status,
        }
    }
}
