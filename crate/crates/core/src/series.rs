use crate::{Error, Result};

/// Ordered, finite, real-valued observations.
///
/// `origin_index` is the absolute position of the first value in the series it
/// was cut from, so that test portions keep their time indices.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    origin_index: usize,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_origin(values, 0)
    }

    pub fn with_origin(values: Vec<f64>, origin_index: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSeries("series is empty".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "non-finite value {} at index {i}",
                values[i]
            )));
        }
        Ok(Self {
            values,
            origin_index,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn origin_index(&self) -> usize {
        self.origin_index
    }
}

/// The `p` most recent observations up to `anchor_index`, newest first.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    vector: Vec<f64>,
    anchor_index: usize,
}

impl Embedding {
    pub fn new(vector: Vec<f64>, anchor_index: usize) -> Self {
        Self {
            vector,
            anchor_index,
        }
    }

    /// Embedding `[y_a, y_{a-1}, …, y_{a-p+1}]` of `values` at position `anchor`.
    pub fn at(values: &[f64], anchor: usize, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter(
                "embedding order must be >= 1".into(),
            ));
        }
        if anchor + 1 < order || anchor >= values.len() {
            return Err(Error::SeriesTooShort {
                needed: order.max(anchor + 1),
                got: values.len().min(anchor + 1),
            });
        }
        let vector = values[anchor + 1 - order..=anchor]
            .iter()
            .rev()
            .copied()
            .collect();
        Ok(Self::new(vector, anchor))
    }

    /// Embedding ending at the newest observation of `series`.
    pub fn latest(series: &TimeSeries, order: usize) -> Result<Self> {
        let mut e = Self::at(series.values(), series.len() - 1, order)?;
        e.anchor_index += series.origin_index();
        Ok(e)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn anchor_index(&self) -> usize {
        self.anchor_index
    }

    /// Euclidean distance to another embedding of the same dimension.
    pub fn distance(&self, other: &Embedding) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .vector
            .iter()
            .zip(&other.vector)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }
}

/// An embedding paired with the observation `h` steps after its anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingPair {
    pub embedding: Embedding,
    pub target: f64,
}

impl TrainingPair {
    /// Absolute index of the target observation.
    pub fn target_index(&self, horizon: usize) -> usize {
        self.embedding.anchor_index() + horizon
    }
}

/// Every `(z_{j-1}, y_{j-1+h})` pair constructible from `series`, oldest first.
///
/// Produces `len − p − h + 1` pairs.
pub fn build_embeddings(
    series: &TimeSeries,
    order: usize,
    horizon: usize,
) -> Result<Vec<TrainingPair>> {
    if order == 0 || horizon == 0 {
        return Err(Error::InvalidParameter(
            "embedding order and horizon must be >= 1".into(),
        ));
    }
    let values = series.values();
    if values.len() < order + horizon {
        return Err(Error::SeriesTooShort {
            needed: order + horizon,
            got: values.len(),
        });
    }
    (order - 1..values.len() - horizon)
        .map(|anchor| {
            let mut embedding = Embedding::at(values, anchor, order)?;
            embedding.anchor_index += series.origin_index();
            Ok(TrainingPair {
                embedding,
                target: values[anchor + horizon],
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs_of(values: &[f64], p: usize, h: usize) -> Result<Vec<(Vec<f64>, f64)>> {
        let series = TimeSeries::new(values.to_vec()).unwrap();
        Ok(build_embeddings(&series, p, h)?
            .into_iter()
            .map(|pair| (pair.embedding.as_slice().to_vec(), pair.target))
            .collect())
    }

    #[test]
    fn one_step_pairs() {
        let pairs = pairs_of(&[1.0, 2.0, 3.0, 4.0, 5.0], 3, 1).unwrap();
        assert_eq!(
            pairs,
            vec![(vec![3.0, 2.0, 1.0], 4.0), (vec![4.0, 3.0, 2.0], 5.0)]
        );
    }

    #[test]
    fn two_step_pairs() {
        let pairs = pairs_of(&[1.0, 2.0, 3.0, 4.0, 5.0], 3, 2).unwrap();
        assert_eq!(pairs, vec![(vec![3.0, 2.0, 1.0], 5.0)]);
    }

    #[test]
    fn too_short() {
        assert_eq!(
            pairs_of(&[1.0, 2.0, 3.0, 4.0], 3, 2),
            Err(Error::SeriesTooShort { needed: 5, got: 4 })
        );
    }

    #[test]
    fn pair_count_and_anchors() {
        let values: Vec<f64> = (0..20).map(f64::from).collect();
        let series = TimeSeries::with_origin(values, 100).unwrap();
        let pairs = build_embeddings(&series, 4, 3).unwrap();
        assert_eq!(pairs.len(), 20 - 4 - 3 + 1);
        for pair in &pairs {
            let anchor = pair.embedding.anchor_index();
            assert_eq!(pair.embedding.as_slice()[0], (anchor - 100) as f64);
            assert_eq!(pair.target, (pair.target_index(3) - 100) as f64);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(TimeSeries::new(vec![1.0, f64::NAN]).is_err());
        assert!(TimeSeries::new(vec![]).is_err());
    }

    #[test]
    fn latest_embedding() {
        let series = TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let z = Embedding::latest(&series, 2).unwrap();
        assert_eq!(z.as_slice(), &[4.0, 3.0]);
        assert_eq!(z.anchor_index(), 3);
    }
}
