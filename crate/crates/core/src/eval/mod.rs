//! Error metrics, leave-one-out tuning and the benchmark runner.

mod benchmark;
mod metrics;
mod report;
mod tune;

pub use benchmark::{
    run_benchmark, run_cell, BenchmarkConfig, CellFailure, EvalReport, ReportRow, Trajectory,
};
pub use metrics::{mape, smape, Criterion, MetricPair};
pub use report::{parse_report_csv, report_csv, report_table, trajectory_csv};
pub use tune::{
    cross_validate, default_bandwidth_grid, default_gamma_grid, evaluate_test, log_grid,
    median_pairwise_distance, test_predictions, tune_gamma, with_param, CvCurve, EvalSetup,
    Selection, TestRun, DEFAULT_CV_FOLDS,
};
