use std::fs;
use std::path::Path;

use boundcast::eval::{
    cross_validate, default_bandwidth_grid, median_pairwise_distance, parse_report_csv, report_csv,
    report_table, run_benchmark, trajectory_csv, BenchmarkConfig, Criterion, EvalReport, EvalSetup,
};
use boundcast::predictors::{predict_horizon, ModelId, Tuned};
use boundcast::preprocess::TransformPipeline;
use boundcast::{build_design, build_embeddings, TimeSeries};

use crate::{ingest_csv, CliError, IngestError, RunConfig};

fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Output(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, content)
        .map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display())))
}

fn csv_text(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn load_series(cfg: &RunConfig) -> Result<TimeSeries, CliError> {
    Ok(ingest_csv(cfg.data_path()?, cfg.column.as_deref())?)
}

fn checked_train_len(cfg: &RunConfig, n: usize) -> Result<usize, CliError> {
    let len = cfg.train_len(n);
    if len == 0 || len > n {
        return Err(CliError::Config(format!(
            "training length {len} does not fit a series of {n}"
        )));
    }
    Ok(len)
}

/// Evaluation setup for the configured split. The test set defaults to
/// everything after the training prefix.
pub fn make_setup(cfg: &RunConfig, series: &TimeSeries) -> Result<EvalSetup, CliError> {
    let n = series.len();
    let train_len = checked_train_len(cfg, n)?;
    let test_len = cfg.test_len.unwrap_or(n - train_len);
    if train_len + test_len > n {
        return Err(CliError::Config(format!(
            "train_len {train_len} + test_len {test_len} exceeds the {n} observations"
        )));
    }
    Ok(EvalSetup::new(series, &cfg.transform, train_len, test_len)?
        .with_metric_scale(cfg.metric_scale)
        .with_cv_folds(cfg.cv_folds))
}

/// One forecast emitted by `predict`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictLine {
    pub model: ModelId,
    pub ahead: usize,
    /// Index of the forecast target in the input series.
    pub t: usize,
    /// Forecast on the original scale.
    pub forecast: f64,
    /// Worst-case error bound on the transformed scale (CP and AR only).
    pub bound: Option<f64>,
}

/// Forecasts `y_{n_train − 1 + h}` for every configured model and horizon from
/// the first `train_len` observations.
///
/// Kernel models without an explicit bandwidth use the median pairwise
/// embedding distance.
pub fn cmd_predict(cfg: &RunConfig) -> Result<Vec<PredictLine>, CliError> {
    let series = load_series(cfg)?;
    let train_len = checked_train_len(cfg, series.len())?;
    let prefix = TimeSeries::new(series.values()[..train_len].to_vec())?;
    let (transformed, pipeline) =
        TransformPipeline::fit_transform(&prefix, &cfg.transform, train_len)?;

    let mut lines = Vec::new();
    for &model in &cfg.models {
        for &h in &cfg.horizons {
            let mut hp = cfg.hyper_params()?.with_horizon(h);
            if model.tuned() == Tuned::Bandwidth && cfg.bandwidth.is_none() {
                let design =
                    build_design(&build_embeddings(&transformed, hp.order, h)?, &hp.regressor)?;
                hp = hp.with_bandwidth(median_pairwise_distance(&design)?);
            }
            let f = predict_horizon(&transformed, &hp, model)?;
            let t = train_len - 1 + h;
            lines.push(PredictLine {
                model,
                ahead: h,
                t,
                forecast: pipeline.invert_forecast(f.value, t),
                bound: f.error_bound,
            });
        }
    }
    write_file(&cfg.out, "predictions.csv", &predictions_csv(&lines)?)?;
    Ok(lines)
}

pub fn predictions_csv(lines: &[PredictLine]) -> Result<String, CliError> {
    csv_text(
        &["model", "ahead", "t", "forecast", "bound"],
        lines.iter().map(|l| {
            vec![
                l.model.to_string(),
                l.ahead.to_string(),
                l.t.to_string(),
                l.forecast.to_string(),
                l.bound.map_or(String::new(), |b| b.to_string()),
            ]
        }),
    )
}

/// One selected parameter from `tune`.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneLine {
    pub model: ModelId,
    pub ahead: usize,
    pub criterion: Criterion,
    pub param: f64,
    pub cv_score: f64,
}

/// Leave-one-out grid search for each configured cell. Writes the full
/// curve of every (model, horizon) to `cv_<model>_h<h>.csv`.
pub fn cmd_tune(cfg: &RunConfig) -> Result<Vec<TuneLine>, CliError> {
    let series = load_series(cfg)?;
    let setup = make_setup(cfg, &series)?;
    let mut out = Vec::new();
    for &model in &cfg.models {
        for &h in &cfg.horizons {
            let hp = cfg.hyper_params()?.with_horizon(h);
            let grid = match model.tuned() {
                Tuned::Gamma => cfg.gamma_grid.clone(),
                Tuned::Bandwidth => match &cfg.bandwidth_grid {
                    Some(g) => g.clone(),
                    None => default_bandwidth_grid(&setup.training_design(&hp)?)?,
                },
                Tuned::Nothing => vec![0.0],
            };
            let curve = cross_validate(&setup, model, &hp, &grid)?;
            let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
            let rows = (0..curve.grid.len()).map(|i| {
                vec![
                    curve.grid[i].to_string(),
                    opt(curve.mape[i]),
                    opt(curve.smape[i]),
                ]
            });
            write_file(
                &cfg.out,
                &format!("cv_{model}_h{h}.csv"),
                &csv_text(&["param", "cv_mape", "cv_smape"], rows)?,
            )?;
            for &criterion in &cfg.criteria {
                let s = curve.select(criterion)?;
                out.push(TuneLine {
                    model,
                    ahead: h,
                    criterion,
                    param: s.param,
                    cv_score: s.cv_score,
                });
            }
        }
    }
    Ok(out)
}

pub fn selections_csv(lines: &[TuneLine]) -> Result<String, CliError> {
    csv_text(
        &["model", "ahead", "criterion", "param", "cv_score"],
        lines.iter().map(|l| {
            vec![
                l.model.to_string(),
                l.ahead.to_string(),
                l.criterion.to_string(),
                l.param.to_string(),
                l.cv_score.to_string(),
            ]
        }),
    )
}

/// Runs the benchmark and writes the report files plus one
/// `trajectory_<model>.csv` per model. Fails only when every cell fails.
pub fn cmd_benchmark(cfg: &RunConfig) -> Result<EvalReport, CliError> {
    let series = load_series(cfg)?;
    let setup = make_setup(cfg, &series)?;
    let config = BenchmarkConfig {
        models: cfg.models.clone(),
        horizons: cfg.horizons.clone(),
        hp: cfg.hyper_params()?,
        gamma_grid: cfg.gamma_grid.clone(),
        bandwidth_grid: cfg.bandwidth_grid.clone(),
    };
    let report = run_benchmark(&setup, &config);
    if report.rows.is_empty() && !report.failures.is_empty() {
        return Err(CliError::Numeric(boundcast::Error::NoValidGridValue));
    }

    write_file(&cfg.out, "report.csv", &report_csv(&report.rows)?)?;
    write_file(&cfg.out, "report.txt", &report_table(&report.rows))?;
    for &model in &cfg.models {
        let trajs: Vec<_> = report
            .trajectories
            .iter()
            .filter(|t| t.model == model)
            .collect();
        if !trajs.is_empty() {
            write_file(
                &cfg.out,
                &format!("trajectory_{model}.csv"),
                &trajectory_csv(&trajs)?,
            )?;
        }
    }
    let mut notes = String::new();
    if setup.test_start() > setup.train_len() {
        notes.push_str(&format!(
            "observations {}..{} are neither trained on nor scored (test set is the last {})\n",
            setup.train_len(),
            setup.test_start(),
            setup.test_len()
        ));
    }
    for f in &report.failures {
        notes.push_str(&format!(
            "failed: {} h={}: {}\n",
            f.model, f.ahead, f.message
        ));
    }
    if !notes.is_empty() {
        log::warn!("{}", notes.trim_end());
        write_file(&cfg.out, "notes.txt", &notes)?;
    }
    Ok(report)
}

/// Reads a report CSV and renders it as an aligned table.
pub fn cmd_report(path: &Path) -> Result<String, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Data(if e.kind() == std::io::ErrorKind::NotFound {
            IngestError::FileNotFound(path.display().to_string())
        } else {
            IngestError::Unreadable {
                path: path.display().to_string(),
                message: e.to_string(),
            }
        })
    })?;
    let rows = parse_report_csv(&text).map_err(CliError::Shape)?;
    Ok(report_table(&rows))
}
