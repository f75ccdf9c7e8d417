use super::{Forecast, Kernel};
use crate::solvers::SolveStatus;
use crate::{DesignSet, Embedding, Error, Result};

/// Nadaraya-Watson forecast `Σ K_j y_j / Σ K_j` with `K_j = K(‖z_{j-1} − z_k‖ / h)`.
///
/// Returns [`Error::AllWeightsZero`] when no stored embedding falls inside the
/// kernel support; callers decide the fallback.
pub fn predict_nw(design: &DesignSet, z_k: &Embedding, kernel: &Kernel) -> Result<Forecast> {
    let weights: Vec<f64> = design
        .distances_to(z_k)?
        .into_iter()
        .map(|d| kernel.weight_at(d))
        .collect();
    nadaraya_watson(design.targets(), &weights)
}

/// Normalized weighted average of `targets`.
pub fn nadaraya_watson(targets: &[f64], weights: &[f64]) -> Result<Forecast> {
    if targets.is_empty() || targets.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: targets.len(),
            got: weights.len(),
        });
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::AllWeightsZero);
    }
    let weights: Vec<f64> = weights.iter().map(|k| k / total).collect();
    let value = weights.iter().zip(targets).map(|(k, y)| k * y).sum();
    Ok(Forecast {
        value,
        weights,
        error_bound: None,
        status: SolveStatus::Optimal,
    })
}

/// Target of the closest stored embedding (lowest index on ties).
pub fn nearest_neighbor(design: &DesignSet, z_k: &Embedding) -> Result<Forecast> {
    let distances = design.distances_to(z_k)?;
    let (best, _) =
        distances.iter().enumerate().fold(
            (0, f64::INFINITY),
            |acc, (j, &d)| if d < acc.1 { (j, d) } else { acc },
        );
    let mut weights = vec![0.0; distances.len()];
    weights[best] = 1.0;
    Ok(Forecast {
        value: design.targets()[best],
        weights,
        error_bound: None,
        status: SolveStatus::Optimal,
    })
}
