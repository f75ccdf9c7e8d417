use rayon::prelude::*;

use super::metrics::{Criterion, MetricPair};
use super::tune::{
    cross_validate, default_bandwidth_grid, default_gamma_grid, test_predictions, with_param,
    EvalSetup,
};
use crate::predictors::{ModelId, Tuned};
use crate::{HyperParams, Result};

/// Which models and horizons to evaluate, and over which grids.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub models: Vec<ModelId>,
    pub horizons: Vec<usize>,
    /// Template; the horizon and the tuned parameter are set per cell.
    pub hp: HyperParams,
    pub gamma_grid: Vec<f64>,
    /// `None` derives the default grid from each horizon's training embeddings.
    pub bandwidth_grid: Option<Vec<f64>>,
}

impl BenchmarkConfig {
    /// Combined predictor and six kernel baselines at horizons 1 to 3.
    pub fn standard(hp: HyperParams) -> Self {
        Self {
            models: ModelId::standard_set(),
            horizons: vec![1, 2, 3],
            hp,
            gamma_grid: default_gamma_grid(),
            bandwidth_grid: None,
        }
    }
}

/// One result line: parameters selected by each criterion with the
/// leave-one-out (train) and test errors they yield.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub model: ModelId,
    pub ahead: usize,
    pub gamma_mape: f64,
    pub tr_mape: f64,
    pub te_mape: f64,
    pub gamma_smape: f64,
    pub tr_smape: f64,
    pub te_smape: f64,
}

impl ReportRow {
    pub fn gamma(&self, c: Criterion) -> f64 {
        match c {
            Criterion::Mape => self.gamma_mape,
            Criterion::Smape => self.gamma_smape,
        }
    }

    pub fn train(&self) -> MetricPair {
        MetricPair {
            mape: self.tr_mape,
            smape: self.tr_smape,
        }
    }

    pub fn test(&self) -> MetricPair {
        MetricPair {
            mape: self.te_mape,
            smape: self.te_smape,
        }
    }
}

/// Test forecasts of one cell under both selections.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub model: ModelId,
    pub ahead: usize,
    pub t: Vec<usize>,
    pub actual: Vec<f64>,
    pub predicted_mape: Vec<f64>,
    pub predicted_smape: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub model: ModelId,
    pub ahead: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalReport {
    pub rows: Vec<ReportRow>,
    pub trajectories: Vec<Trajectory>,
    pub failures: Vec<CellFailure>,
}

impl EvalReport {
    pub fn row(&self, model: ModelId, ahead: usize) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.model == model && r.ahead == ahead)
    }
}

/// Tunes and tests every (model, horizon) cell. Cells are independent and run
/// concurrently; rows come out model-major in configuration order. A failing
/// cell is recorded and the run continues.
pub fn run_benchmark(setup: &EvalSetup, config: &BenchmarkConfig) -> EvalReport {
    let cells: Vec<(ModelId, usize)> = config
        .models
        .iter()
        .flat_map(|&m| config.horizons.iter().map(move |&h| (m, h)))
        .collect();
    let results: Vec<Result<(ReportRow, Trajectory)>> = cells
        .par_iter()
        .map(|&(m, h)| run_cell(setup, config, m, h))
        .collect();

    let mut report = EvalReport::default();
    for ((model, ahead), result) in cells.into_iter().zip(results) {
        match result {
            Ok((row, traj)) => {
                report.rows.push(row);
                report.trajectories.push(traj);
            }
            Err(e) => {
                log::warn!("{model} h={ahead} failed: {e}");
                report.failures.push(CellFailure {
                    model,
                    ahead,
                    message: e.to_string(),
                });
            }
        }
    }
    report
}

/// Tuning and testing for a single model and horizon.
pub fn run_cell(
    setup: &EvalSetup,
    config: &BenchmarkConfig,
    model: ModelId,
    ahead: usize,
) -> Result<(ReportRow, Trajectory)> {
    let hp = config.hp.clone().with_horizon(ahead);
    let grid = match model.tuned() {
        Tuned::Gamma => config.gamma_grid.clone(),
        Tuned::Bandwidth => match &config.bandwidth_grid {
            Some(g) => g.clone(),
            None => default_bandwidth_grid(&setup.training_design(&hp)?)?,
        },
        Tuned::Nothing => vec![0.0],
    };
    let curve = cross_validate(setup, model, &hp, &grid)?;
    let sel_mape = curve.select(Criterion::Mape)?;
    let sel_smape = curve.select(Criterion::Smape)?;
    log::info!(
        "{model} h={ahead}: param {} (MAPE), {} (SMAPE)",
        sel_mape.param,
        sel_smape.param
    );

    let run = test_predictions(
        setup,
        model,
        &with_param(model, &hp, sel_mape.param),
        &[sel_mape.param, sel_smape.param],
    )?;
    let mut cols = run.predicted.into_iter();
    let (pred_mape, pred_smape) = (
        cols.next().unwrap_or_default(),
        cols.next().unwrap_or_default(),
    );
    let te_mape = MetricPair::compute(&run.actual, &pred_mape)?.mape;
    let te_smape = MetricPair::compute(&run.actual, &pred_smape)?.smape;

    let row = ReportRow {
        model,
        ahead,
        gamma_mape: sel_mape.param,
        tr_mape: sel_mape.cv_score,
        te_mape,
        gamma_smape: sel_smape.param,
        tr_smape: sel_smape.cv_score,
        te_smape,
    };
    let traj = Trajectory {
        model,
        ahead,
        t: run.t,
        actual: run.actual,
        predicted_mape: pred_mape,
        predicted_smape: pred_smape,
    };
    Ok((row, traj))
}
