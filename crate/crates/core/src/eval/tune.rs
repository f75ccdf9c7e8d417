use rayon::prelude::*;

use super::metrics::{Criterion, MetricPair};
use crate::predictors::{ModelId, PreparedQuery, Tuned};
use crate::preprocess::{MetricScale, TransformPipeline, TransformStep};
use crate::{
    build_design, build_embeddings, DesignSet, Embedding, Error, HyperParams, Result, TimeSeries,
};

/// Number of most recent training targets held out in turn by default.
pub const DEFAULT_CV_FOLDS: usize = 50;

/// `0.00, 0.01, …, 1.00` followed by `1.5, 2, 5, 10`.
pub fn default_gamma_grid() -> Vec<f64> {
    (0..=100)
        .map(|i| i as f64 / 100.0)
        .chain([1.5, 2.0, 5.0, 10.0])
        .collect()
}

/// `steps` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let ratio = (hi / lo).ln();
            (0..steps)
                .map(|i| lo * (ratio * i as f64 / (steps - 1) as f64).exp())
                .collect()
        }
    }
}

/// Median Euclidean distance over all pairs of stored embeddings; 1 when
/// every pair coincides.
pub fn median_pairwise_distance(design: &DesignSet) -> Result<f64> {
    let e = design.embeddings();
    let mut d = Vec::with_capacity(e.len() * e.len().saturating_sub(1) / 2);
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            d.push(e[i].distance(&e[j])?);
        }
    }
    if d.is_empty() {
        return Err(Error::EmptyGrid);
    }
    d.sort_by(f64::total_cmp);
    let n = d.len();
    let median = if n % 2 == 1 {
        d[n / 2]
    } else {
        0.5 * (d[n / 2 - 1] + d[n / 2])
    };
    Ok(if median > 0.0 { median } else { 1.0 })
}

/// 50 log-spaced bandwidths between 0.1× and 10× the median pairwise distance
/// of the stored embeddings.
pub fn default_bandwidth_grid(design: &DesignSet) -> Result<Vec<f64>> {
    let median = median_pairwise_distance(design)?;
    Ok(log_grid(0.1 * median, 10.0 * median, 50))
}

/// A series prepared for tuning and testing: raw values, transformed values,
/// the fitted pipeline and the split.
///
/// Test targets are the indices `test_start..len` (possibly none); `test_start` may exceed
/// `train_len`, in which case the observations in between are neither
/// trained on nor scored.
#[derive(Debug, Clone)]
pub struct EvalSetup {
    original: TimeSeries,
    transformed: TimeSeries,
    pipeline: TransformPipeline,
    train_len: usize,
    test_start: usize,
    pub metric_scale: MetricScale,
    /// Held-out training targets per grid value; `None` uses every row.
    pub cv_folds: Option<usize>,
}

impl EvalSetup {
    pub fn new(
        original: &TimeSeries,
        steps: &[TransformStep],
        train_len: usize,
        test_len: usize,
    ) -> Result<Self> {
        let n = original.len();
        if train_len == 0 || train_len + test_len > n {
            return Err(Error::EmptySplit {
                train: train_len,
                test: test_len,
            });
        }
        let original = TimeSeries::new(original.values().to_vec())?;
        let (transformed, pipeline) =
            TransformPipeline::fit_transform(&original, steps, train_len)?;
        Ok(Self {
            original,
            transformed,
            pipeline,
            train_len,
            test_start: n - test_len,
            metric_scale: MetricScale::Original,
            cv_folds: Some(DEFAULT_CV_FOLDS),
        })
    }

    pub fn with_metric_scale(mut self, scale: MetricScale) -> Self {
        self.metric_scale = scale;
        self
    }

    pub fn with_cv_folds(mut self, folds: Option<usize>) -> Self {
        self.cv_folds = folds;
        self
    }

    pub fn original(&self) -> &TimeSeries {
        &self.original
    }

    pub fn transformed(&self) -> &TimeSeries {
        &self.transformed
    }

    pub fn pipeline(&self) -> &TransformPipeline {
        &self.pipeline
    }

    pub fn train_len(&self) -> usize {
        self.train_len
    }

    pub fn test_start(&self) -> usize {
        self.test_start
    }

    pub fn test_len(&self) -> usize {
        self.original.len() - self.test_start
    }

    /// Design set built from the transformed training prefix only.
    pub fn training_design(&self, hp: &HyperParams) -> Result<DesignSet> {
        let train = TimeSeries::new(self.transformed.values()[..self.train_len].to_vec())?;
        build_design(
            &build_embeddings(&train, hp.order, hp.horizon)?,
            &hp.regressor,
        )
    }

    /// Maps a transformed-scale value at index `t` to the metric scale.
    pub fn to_metric(&self, value: f64, t: usize) -> Result<f64> {
        self.pipeline.invert_to(value, t, self.metric_scale)
    }

    /// Actual observation at index `t` on the metric scale.
    pub fn actual(&self, t: usize) -> Result<f64> {
        match self.metric_scale {
            MetricScale::Original => Ok(self.original.values()[t]),
            MetricScale::Log10 => self.to_metric(self.transformed.values()[t], t),
        }
    }
}

/// Leave-one-out scores of one model over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CvCurve {
    pub grid: Vec<f64>,
    /// `None` marks a grid value disqualified by a failing fold.
    pub mape: Vec<Option<f64>>,
    pub smape: Vec<Option<f64>>,
    pub folds: usize,
}

/// A grid value chosen by cross-validation and its leave-one-out score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub param: f64,
    pub cv_score: f64,
}

impl CvCurve {
    pub fn scores(&self, criterion: Criterion) -> &[Option<f64>] {
        match criterion {
            Criterion::Mape => &self.mape,
            Criterion::Smape => &self.smape,
        }
    }

    /// Minimum score; ties go to the smaller grid value.
    pub fn select(&self, criterion: Criterion) -> Result<Selection> {
        let mut best: Option<Selection> = None;
        for (&param, score) in self.grid.iter().zip(self.scores(criterion)) {
            let Some(score) = *score else { continue };
            let better = match best {
                None => true,
                Some(b) => score < b.cv_score || (score == b.cv_score && param < b.param),
            };
            if better {
                best = Some(Selection {
                    param,
                    cv_score: score,
                });
            }
        }
        best.ok_or(Error::NoValidGridValue)
    }
}

fn sorted_grid(grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    Ok(g)
}

/// Leave-one-out scores over the most recent `setup.cv_folds` training pairs.
///
/// Each held-out target is predicted from the design set without its row.
/// Models without a tuned parameter get a single-value curve.
pub fn cross_validate(
    setup: &EvalSetup,
    model: ModelId,
    hp: &HyperParams,
    grid: &[f64],
) -> Result<CvCurve> {
    hp.validate()?;
    let grid = match model.tuned() {
        Tuned::Nothing => vec![0.0],
        _ => sorted_grid(grid)?,
    };
    let design = setup.training_design(hp)?;
    let rows = design.rows();
    let folds = setup.cv_folds.map_or(rows, |c| c.min(rows));

    // fold → (actual, prediction per grid value), all on the metric scale
    let per_fold: Vec<(f64, Vec<Option<f64>>)> = (rows - folds..rows)
        .into_par_iter()
        .map(|row| {
            let z = &design.embeddings()[row];
            let t = z.anchor_index() + hp.horizon;
            let actual = setup.actual(t);
            let preds = match (actual.is_ok(), design.without_row(row)) {
                (true, Ok(fold)) => predict_grid(setup, model, &fold, z, hp, &grid, t),
                (_, Err(e)) => {
                    log::debug!("{model}: fold {row} unusable: {e}");
                    vec![None; grid.len()]
                }
                (false, _) => vec![None; grid.len()],
            };
            (actual.unwrap_or(f64::NAN), preds)
        })
        .collect();

    let actual: Vec<f64> = per_fold.iter().map(|(a, _)| *a).collect();
    let mut curve = CvCurve {
        grid: grid.clone(),
        mape: Vec::with_capacity(grid.len()),
        smape: Vec::with_capacity(grid.len()),
        folds,
    };
    for g in 0..grid.len() {
        let predicted: Option<Vec<f64>> = per_fold.iter().map(|(_, p)| p[g]).collect();
        let pair = predicted.and_then(|p| MetricPair::compute(&actual, &p).ok());
        if pair.is_none() {
            log::debug!("{model}: grid value {} disqualified", grid[g]);
        }
        curve.mape.push(pair.map(|m| m.mape));
        curve.smape.push(pair.map(|m| m.smape));
    }
    Ok(curve)
}

fn predict_grid(
    setup: &EvalSetup,
    model: ModelId,
    design: &DesignSet,
    z: &Embedding,
    hp: &HyperParams,
    grid: &[f64],
    t: usize,
) -> Vec<Option<f64>> {
    let query = match PreparedQuery::new(model, design, z, hp) {
        Ok(q) => q,
        Err(e) => {
            log::debug!("{model}: query at t={t} failed: {e}");
            return vec![None; grid.len()];
        }
    };
    grid.iter()
        .map(|&g| {
            let f = query.forecast(g).and_then(|f| setup.to_metric(f.value, t));
            match f {
                Ok(v) if v.is_finite() => Some(v),
                Ok(_) => None,
                Err(e) => {
                    log::debug!("{model}: forecast at t={t}, param={g} failed: {e}");
                    None
                }
            }
        })
        .collect()
}

/// Grid value minimizing the leave-one-out `criterion` (smallest on ties).
///
/// Works for every tuned parameter: `γ` for the combined predictor and the
/// bandwidth for kernel baselines.
pub fn tune_gamma(
    setup: &EvalSetup,
    model: ModelId,
    hp: &HyperParams,
    grid: &[f64],
    criterion: Criterion,
) -> Result<Selection> {
    cross_validate(setup, model, hp, grid)?.select(criterion)
}

/// Copy of `hp` with the model's tuned parameter set to `param`.
pub fn with_param(model: ModelId, hp: &HyperParams, param: f64) -> HyperParams {
    match model.tuned() {
        Tuned::Gamma => hp.clone().with_gamma(param),
        Tuned::Bandwidth => hp.clone().with_bandwidth(param),
        Tuned::Nothing => hp.clone(),
    }
}

/// Test-set forecasts for several parameter values at once, on the metric scale.
#[derive(Debug, Clone, PartialEq)]
pub struct TestRun {
    /// Index of each forecast target in the full series.
    pub t: Vec<usize>,
    pub actual: Vec<f64>,
    /// One column per requested parameter value.
    pub predicted: Vec<Vec<f64>>,
}

/// Forecasts every test target `t` from the embedding anchored at `t − h`,
/// using the frozen training design set.
pub fn test_predictions(
    setup: &EvalSetup,
    model: ModelId,
    hp: &HyperParams,
    params: &[f64],
) -> Result<TestRun> {
    hp.validate()?;
    let design = setup.training_design(hp)?;
    let values = setup.transformed().values();
    let ts: Vec<usize> = (setup.test_start()..values.len()).collect();
    let rows: Vec<(f64, Vec<f64>)> = ts
        .par_iter()
        .map(|&t| -> Result<(f64, Vec<f64>)> {
            let z = Embedding::at(values, t - hp.horizon, hp.order)?;
            let query = PreparedQuery::new(model, &design, &z, hp)?;
            let preds = params
                .iter()
                .map(|&g| setup.to_metric(query.forecast(g)?.value, t))
                .collect::<Result<Vec<f64>>>()?;
            Ok((setup.actual(t)?, preds))
        })
        .collect::<Result<_>>()?;
    let mut run = TestRun {
        t: ts,
        actual: rows.iter().map(|r| r.0).collect(),
        predicted: vec![Vec::with_capacity(rows.len()); params.len()],
    };
    for (_, preds) in rows {
        for (col, v) in run.predicted.iter_mut().zip(preds) {
            col.push(v);
        }
    }
    Ok(run)
}

/// Test MAPE and SMAPE at a single parameter value.
pub fn evaluate_test(
    setup: &EvalSetup,
    model: ModelId,
    hp: &HyperParams,
    param: f64,
) -> Result<MetricPair> {
    let run = test_predictions(setup, model, hp, &[param])?;
    MetricPair::compute(&run.actual, &run.predicted[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RegressorSpec;

    #[test]
    fn grids() {
        let g = default_gamma_grid();
        assert_eq!(g.len(), 105);
        assert_eq!((g[0], g[12], g[104]), (0.0, 0.12, 10.0));
        let l = log_grid(0.1, 10.0, 5);
        assert!((l[2] - 1.0).abs() < 1e-12 && (l[4] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn ties_pick_smaller_value() {
        let curve = CvCurve {
            grid: vec![0.1, 0.2, 0.3],
            mape: vec![Some(2.0), Some(1.0), Some(1.0)],
            smape: vec![None, None, Some(5.0)],
            folds: 1,
        };
        assert_eq!(curve.select(Criterion::Mape).unwrap().param, 0.2);
        assert_eq!(curve.select(Criterion::Smape).unwrap().param, 0.3);
        let empty = CvCurve {
            smape: vec![None; 3],
            ..curve
        };
        assert_eq!(
            empty.select(Criterion::Smape).unwrap_err(),
            Error::NoValidGridValue
        );
    }

    #[test]
    fn linear_recurrence_is_forecast_exactly() {
        // y_t = 0.6 y_{t-1} + 0.3 y_{t-2} + 1 lies in the span of an affine regressor.
        let mut clean = vec![1.0, 2.0];
        for t in 2..60 {
            clean.push(0.6 * clean[t - 1] + 0.3 * clean[t - 2] + 1.0);
        }
        let s = TimeSeries::new(clean).unwrap();
        let setup = EvalSetup::new(&s, &[], 45, 15).unwrap();
        let hp = HyperParams::new(2, RegressorSpec::affine(2)).with_gamma(0.3);
        let m = evaluate_test(&setup, ModelId::Cp, &hp, 0.3).unwrap();
        assert!(m.mape < 1e-6, "{m:?}");
    }

    #[test]
    fn single_grid_value() {
        let s = TimeSeries::new((0..40).map(|t| 5.0 + (t as f64 * 0.9).sin()).collect()).unwrap();
        let setup = EvalSetup::new(&s, &[], 30, 10).unwrap();
        let hp = HyperParams::new(3, RegressorSpec::autoregressive(3));
        let sel = tune_gamma(&setup, ModelId::Cp, &hp, &[0.25], Criterion::Mape).unwrap();
        assert_eq!(sel.param, 0.25);
    }
}
