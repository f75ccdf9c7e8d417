use nalgebra::DMatrix;

use crate::{Embedding, Error, RegressorSpec, Result, TrainingPair};

/// Training memory of the predictor: the regressor matrix `A` (one row
/// `r(z_{j-1})ᵀ` per pair), the aligned targets `b_Y` and the embeddings
/// themselves, kept for distance computations.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSet {
    matrix: DMatrix<f64>,
    targets: Vec<f64>,
    embeddings: Vec<Embedding>,
    spec: RegressorSpec,
}

/// Assembles the design set from training pairs.
pub fn build_design(pairs: &[TrainingPair], spec: &RegressorSpec) -> Result<DesignSet> {
    let features = spec.output_dim();
    if pairs.len() < features {
        return Err(Error::InsufficientData {
            rows: pairs.len(),
            features,
        });
    }
    let mut data = Vec::with_capacity(pairs.len() * features);
    for pair in pairs {
        if pair.embedding.dim() != spec.order() {
            return Err(Error::DimensionMismatch {
                expected: spec.order(),
                got: pair.embedding.dim(),
            });
        }
        spec.eval_into(pair.embedding.as_slice(), &mut data);
    }
    Ok(DesignSet {
        matrix: DMatrix::from_row_slice(pairs.len(), features, &data),
        targets: pairs.iter().map(|p| p.target).collect(),
        embeddings: pairs.iter().map(|p| p.embedding.clone()).collect(),
        spec: spec.clone(),
    })
}

impl DesignSet {
    /// Number of training pairs `v`.
    pub fn rows(&self) -> usize {
        self.targets.len()
    }

    /// Number of regressor components `n_r`.
    pub fn features(&self) -> usize {
        self.matrix.ncols()
    }

    /// The `v × n_r` matrix `A`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// The target vector `b_Y`.
    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn embeddings(&self) -> &[Embedding] {
        &self.embeddings
    }

    pub fn spec(&self) -> &RegressorSpec {
        &self.spec
    }

    /// Copy of the design set with row `row` removed (leave-one-out folds).
    pub fn without_row(&self, row: usize) -> Result<DesignSet> {
        if row >= self.rows() {
            return Err(Error::InvalidParameter(format!(
                "row {row} out of range for {} rows",
                self.rows()
            )));
        }
        if self.rows() - 1 < self.features() {
            return Err(Error::InsufficientData {
                rows: self.rows() - 1,
                features: self.features(),
            });
        }
        let mut targets = self.targets.clone();
        targets.remove(row);
        let mut embeddings = self.embeddings.clone();
        embeddings.remove(row);
        Ok(DesignSet {
            matrix: self.matrix.clone().remove_row(row),
            targets,
            embeddings,
            spec: self.spec.clone(),
        })
    }

    /// Euclidean distances from every stored embedding to `z`.
    pub fn distances_to(&self, z: &Embedding) -> Result<Vec<f64>> {
        self.embeddings.iter().map(|e| e.distance(z)).collect()
    }
}

/// Diagonal of `W_k`: `σ + L‖z_{j-1} − z_k‖₂` for every stored embedding.
pub fn weight_diagonal(
    design: &DesignSet,
    z_k: &Embedding,
    sigma: f64,
    l_const: f64,
) -> Result<Vec<f64>> {
    if !(sigma >= 0.0 && l_const >= 0.0 && sigma.is_finite() && l_const.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sigma and L must be finite and >= 0 (got {sigma}, {l_const})"
        )));
    }
    Ok(design
        .distances_to(z_k)?
        .into_iter()
        .map(|d| sigma + l_const * d)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{apply_regressor, build_embeddings, TimeSeries};

    fn pairs() -> Vec<TrainingPair> {
        build_embeddings(
            &TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap(),
            3,
            1,
        )
        .unwrap()
    }

    #[test]
    fn constant_design() {
        let d = build_design(&pairs(), &RegressorSpec::constant(3)).unwrap();
        assert_eq!(d.matrix(), &DMatrix::from_row_slice(2, 1, &[1.0, 1.0]));
        assert_eq!(d.rows(), 2);
    }

    #[test]
    fn autoregressive_design() {
        // Three pairs so that v >= n_r; the first two rows are ([3,2,1] -> 4), ([4,3,2] -> 5).
        let series = TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let pairs = build_embeddings(&series, 3, 1).unwrap();
        let d = build_design(&pairs, &RegressorSpec::autoregressive(3)).unwrap();
        assert_eq!(
            d.matrix(),
            &DMatrix::from_row_slice(3, 3, &[3.0, 2.0, 1.0, 4.0, 3.0, 2.0, 5.0, 4.0, 3.0])
        );
        assert_eq!(d.targets(), &[4.0, 5.0, 6.0]);
        assert_eq!(
            build_design(&pairs[..2], &RegressorSpec::autoregressive(3)),
            Err(Error::InsufficientData {
                rows: 2,
                features: 3
            })
        );
    }

    #[test]
    fn affine_needs_more_rows() {
        assert_eq!(
            build_design(&pairs(), &RegressorSpec::affine(3)),
            Err(Error::InsufficientData {
                rows: 2,
                features: 4
            })
        );
    }

    #[test]
    fn rows_reproduce_from_embeddings() {
        let series = TimeSeries::new((0..30).map(|t| (t as f64 * 0.37).cos()).collect()).unwrap();
        let pairs = build_embeddings(&series, 4, 2).unwrap();
        let spec = RegressorSpec::new("custom:0*0,1*3,2,1".parse().unwrap(), 4).unwrap();
        let d = build_design(&pairs, &spec).unwrap();
        for (j, e) in d.embeddings().iter().enumerate() {
            let row = apply_regressor(e, &spec).unwrap();
            let stored: Vec<f64> = d.matrix().row(j).iter().copied().collect();
            assert_eq!(row, stored);
        }
    }

    #[test]
    fn weights_sigma_only() {
        let d = build_design(&pairs(), &RegressorSpec::constant(3)).unwrap();
        let z = Embedding::new(vec![9.0, 9.0, 9.0], 0);
        assert_eq!(weight_diagonal(&d, &z, 1.0, 0.0).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn weights_zero_at_coincident_embedding() {
        let d = build_design(&pairs(), &RegressorSpec::constant(3)).unwrap();
        let z = d.embeddings()[1].clone();
        let w = weight_diagonal(&d, &z, 0.0, 1.0).unwrap();
        assert_eq!(w[1], 0.0);
        assert!(w[0] > 0.0);
    }

    #[test]
    fn weights_euclidean() {
        let pair = TrainingPair {
            embedding: Embedding::new(vec![0.0, 0.0], 1),
            target: 1.0,
        };
        let d = build_design(&[pair], &RegressorSpec::constant(2)).unwrap();
        let z = Embedding::new(vec![3.0, 4.0], 5);
        // sqrt(3² + 4²)
        assert_eq!(weight_diagonal(&d, &z, 0.0, 1.0).unwrap(), vec![5.0]);
    }

    #[test]
    fn weights_dimension_mismatch() {
        let d = build_design(&pairs(), &RegressorSpec::constant(3)).unwrap();
        let z = Embedding::new(vec![1.0, 2.0], 0);
        assert!(matches!(
            weight_diagonal(&d, &z, 0.0, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn without_row_drops_one_pair() {
        let d = build_design(&pairs(), &RegressorSpec::constant(3)).unwrap();
        let d0 = d.without_row(0).unwrap();
        assert_eq!(d0.targets(), &[5.0]);
        assert_eq!(d0.matrix().nrows(), 1);
        assert!(d0.without_row(0).is_err());
    }
}
