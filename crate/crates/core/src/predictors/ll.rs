use nalgebra::{DMatrix, DVector};

use super::{Forecast, Kernel};
use crate::solvers::SolveStatus;
use crate::{DesignSet, Embedding, Error, Result};

/// Relative ridge added to the local normal matrix when it is singular.
pub const LL_RIDGE: f64 = 1e-8;

/// Local linear forecast: kernel-weighted least squares on `[z; 1]`,
/// evaluated at `z_k`.
pub fn predict_ll(design: &DesignSet, z_k: &Embedding, kernel: &Kernel) -> Result<Forecast> {
    let weights: Vec<f64> = design
        .distances_to(z_k)?
        .into_iter()
        .map(|d| kernel.weight_at(d))
        .collect();
    local_linear(design.embeddings(), design.targets(), z_k, &weights)
}

/// Weighted local linear fit with arbitrary non-negative weights.
///
/// The returned `weights` are the equivalent kernel: `value = Σ ω_j y_j`.
/// A singular normal matrix gets a ridge of `LL_RIDGE · max diag` and the
/// status [`SolveStatus::DegenerateRegularized`].
pub fn local_linear(
    embeddings: &[Embedding],
    targets: &[f64],
    z_k: &Embedding,
    weights: &[f64],
) -> Result<Forecast> {
    if embeddings.len() != targets.len() || targets.len() != weights.len() || targets.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: targets.len(),
            got: weights.len(),
        });
    }
    if !weights.iter().any(|&k| k > 0.0) {
        return Err(Error::AllWeightsZero);
    }
    let p = z_k.dim();
    let n = p + 1;
    let row = |e: &Embedding| -> DVector<f64> {
        DVector::from_iterator(n, e.as_slice().iter().copied().chain(std::iter::once(1.0)))
    };
    let mut m = DMatrix::<f64>::zeros(n, n);
    let mut rows = Vec::with_capacity(targets.len());
    for (e, &k) in embeddings.iter().zip(weights) {
        if e.dim() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                got: e.dim(),
            });
        }
        let x = row(e);
        if k > 0.0 {
            m.syger(k, &x, &x, 1.0);
        }
        rows.push(x);
    }
    let query = row(z_k);

    let mut status = SolveStatus::Optimal;
    let u = match well_conditioned_solve(&m, &query) {
        Some(u) => u,
        None => {
            status = SolveStatus::DegenerateRegularized;
            let max_diag = m.diagonal().max().max(1.0);
            let mut ridged = m.clone();
            for i in 0..n {
                ridged[(i, i)] += LL_RIDGE * max_diag;
            }
            ridged
                .cholesky()
                .ok_or_else(|| {
                    Error::InvalidParameter(
                        "local linear normal matrix not positive definite".into(),
                    )
                })?
                .solve(&query)
        }
    };

    let omega: Vec<f64> = rows
        .iter()
        .zip(weights)
        .map(|(x, &k)| k * x.dot(&u))
        .collect();
    let value = omega.iter().zip(targets).map(|(o, y)| o * y).sum();
    Ok(Forecast {
        value,
        weights: omega,
        error_bound: None,
        status,
    })
}

fn well_conditioned_solve(m: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    let chol = m.clone().cholesky()?;
    let l = chol.l_dirty();
    let diag = l.diagonal();
    let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), d| {
        (lo.min(d.abs()), hi.max(d.abs()))
    });
    // Reciprocal condition estimate of M from its Cholesky factor.
    if !(lo > 0.0) || (lo / hi).powi(2) < 1e-14 {
        return None;
    }
    let u = chol.solve(rhs);
    u.iter().all(|x| x.is_finite()).then_some(u)
}
