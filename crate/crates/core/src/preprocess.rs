//! Causal transforms applied before embedding, and their inverses.
//!
//! The linear trend is fit on the training prefix only and extrapolated over
//! the test portion, so nothing after the split influences the fit.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformStep {
    Log10,
    LinearDetrend,
}

impl FromStr for TransformStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "log10" | "log" => Ok(TransformStep::Log10),
            "detrend" | "linear-detrend" | "linear_detrend" => Ok(TransformStep::LinearDetrend),
            other => Err(Error::InvalidParameter(format!(
                "unknown transform '{other}'"
            ))),
        }
    }
}

impl fmt::Display for TransformStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformStep::Log10 => "log10",
            TransformStep::LinearDetrend => "detrend",
        })
    }
}

/// Parses `"log10,detrend"`; `"none"` or `""` give no steps.
pub fn parse_steps(s: &str) -> Result<Vec<TransformStep>> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    s.split([',', '+'])
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Scale on which forecasts are compared with actuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricScale {
    /// Every transform inverted.
    #[default]
    Original,
    /// Transforms after the log10 step inverted; log10 itself kept.
    Log10,
}

impl FromStr for MetricScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "original" => Ok(MetricScale::Original),
            "log10" => Ok(MetricScale::Log10),
            other => Err(Error::InvalidParameter(format!(
                "unknown metric scale '{other}'"
            ))),
        }
    }
}

impl fmt::Display for MetricScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricScale::Original => "original",
            MetricScale::Log10 => "log10",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FittedStep {
    Log10,
    /// `μ_t = slope·t + intercept`, `t` counted from the first observation.
    Detrend {
        slope: f64,
        intercept: f64,
    },
}

impl FittedStep {
    fn forward(&self, x: f64, t: usize) -> f64 {
        match *self {
            FittedStep::Log10 => x.log10(),
            FittedStep::Detrend { slope, intercept } => x - (slope * t as f64 + intercept),
        }
    }

    fn inverse(&self, x: f64, t: usize) -> f64 {
        match *self {
            FittedStep::Log10 => 10f64.powf(x),
            FittedStep::Detrend { slope, intercept } => x + slope * t as f64 + intercept,
        }
    }
}

/// A fitted, immutable sequence of transforms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransformPipeline {
    steps: Vec<FittedStep>,
}

impl TransformPipeline {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[FittedStep] {
        &self.steps
    }

    /// Fits `steps` on the first `train_len` observations and applies them to
    /// the whole series.
    pub fn fit_transform(
        series: &TimeSeries,
        steps: &[TransformStep],
        train_len: usize,
    ) -> Result<(TimeSeries, Self)> {
        let mut values = series.values().to_vec();
        let mut fitted = Vec::with_capacity(steps.len());
        for step in steps {
            let f = match step {
                TransformStep::Log10 => {
                    if let Some((index, &value)) =
                        values.iter().enumerate().find(|(_, v)| !(**v > 0.0))
                    {
                        return Err(Error::NonPositiveValue { index, value });
                    }
                    FittedStep::Log10
                }
                TransformStep::LinearDetrend => {
                    if train_len < 2 || train_len > values.len() {
                        return Err(Error::DegenerateTrend(train_len));
                    }
                    let (slope, intercept) = fit_line(&values[..train_len]);
                    FittedStep::Detrend { slope, intercept }
                }
            };
            for (t, x) in values.iter_mut().enumerate() {
                *x = f.forward(*x, t);
            }
            fitted.push(f);
        }
        let transformed = TimeSeries::with_origin(values, series.origin_index())?;
        Ok((transformed, Self { steps: fitted }))
    }

    pub fn forward(&self, value: f64, t: usize) -> f64 {
        self.steps.iter().fold(value, |x, s| s.forward(x, t))
    }

    /// Maps a transformed-scale value at index `t` back to the original scale.
    pub fn invert_forecast(&self, value: f64, t: usize) -> f64 {
        self.steps.iter().rev().fold(value, |x, s| s.inverse(x, t))
    }

    /// Inverts down to `scale`. Asking for the log10 scale from a pipeline
    /// without a log10 step is an error.
    pub fn invert_to(&self, value: f64, t: usize, scale: MetricScale) -> Result<f64> {
        match scale {
            MetricScale::Original => Ok(self.invert_forecast(value, t)),
            MetricScale::Log10 => {
                let pos = self
                    .steps
                    .iter()
                    .position(|s| *s == FittedStep::Log10)
                    .ok_or_else(|| {
                        Error::InvalidParameter("log10 metric scale needs a log10 transform".into())
                    })?;
                Ok(self.steps[pos + 1..]
                    .iter()
                    .rev()
                    .fold(value, |x, s| s.inverse(x, t)))
            }
        }
    }
}

/// Least-squares line through `(t, y_t)`, `t = 0, 1, …`. Returns `(slope, intercept)`.
fn fit_line(y: &[f64]) -> (f64, f64) {
    let n = y.len() as f64;
    let t_mean = (n - 1.0) / 2.0;
    let y_mean = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, &v) in y.iter().enumerate() {
        let dt = t as f64 - t_mean;
        sxy += dt * (v - y_mean);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    (slope, y_mean - slope * t_mean)
}

/// Contiguous split with `round(fraction · n)` training observations.
pub fn split(series: &TimeSeries, train_fraction: f64) -> Result<(TimeSeries, TimeSeries)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    split_at(
        series,
        (train_fraction * series.len() as f64).round() as usize,
    )
}

/// Contiguous split after `train_len` observations. The test part keeps its
/// absolute indices through `origin_index`.
pub fn split_at(series: &TimeSeries, train_len: usize) -> Result<(TimeSeries, TimeSeries)> {
    let n = series.len();
    if train_len == 0 || train_len >= n {
        return Err(Error::EmptySplit {
            train: train_len,
            test: n.saturating_sub(train_len),
        });
    }
    let (a, b) = series.values().split_at(train_len);
    Ok((
        TimeSeries::with_origin(a.to_vec(), series.origin_index())?,
        TimeSeries::with_origin(b.to_vec(), series.origin_index() + train_len)?,
    ))
}
