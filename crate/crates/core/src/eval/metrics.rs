use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Selection criterion for the grid search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    Mape,
    Smape,
}

impl Criterion {
    pub const BOTH: [Criterion; 2] = [Criterion::Mape, Criterion::Smape];

    pub fn score(self, actual: &[f64], predicted: &[f64]) -> Result<f64> {
        match self {
            Criterion::Mape => mape(actual, predicted),
            Criterion::Smape => smape(actual, predicted),
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mape" => Ok(Criterion::Mape),
            "smape" => Ok(Criterion::Smape),
            other => Err(Error::InvalidParameter(format!(
                "unknown criterion '{other}'"
            ))),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Mape => "MAPE",
            Criterion::Smape => "SMAPE",
        })
    }
}

/// Both error measures, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPair {
    pub mape: f64,
    pub smape: f64,
}

impl MetricPair {
    pub fn compute(actual: &[f64], predicted: &[f64]) -> Result<Self> {
        Ok(Self {
            mape: mape(actual, predicted)?,
            smape: smape(actual, predicted)?,
        })
    }

    pub fn get(&self, criterion: Criterion) -> f64 {
        match criterion {
            Criterion::Mape => self.mape,
            Criterion::Smape => self.smape,
        }
    }
}

fn check_lengths(actual: &[f64], predicted: &[f64]) -> Result<()> {
    if actual.len() != predicted.len() || actual.is_empty() {
        return Err(Error::LengthMismatch {
            actual: actual.len(),
            predicted: predicted.len(),
        });
    }
    Ok(())
}

/// Mean absolute percentage error `(100/n) Σ |(y − ŷ)/y|`.
pub fn mape(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check_lengths(actual, predicted)?;
    let mut total = 0.0;
    for (i, (&y, &p)) in actual.iter().zip(predicted).enumerate() {
        if y == 0.0 {
            return Err(Error::ZeroActual(i));
        }
        total += ((y - p) / y).abs();
    }
    Ok(100.0 * total / actual.len() as f64)
}

/// Symmetric MAPE `(100/n) Σ |ŷ − y| / ((|y| + |ŷ|)/2)`, bounded by 200.
pub fn smape(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check_lengths(actual, predicted)?;
    let mut total = 0.0;
    for (i, (&y, &p)) in actual.iter().zip(predicted).enumerate() {
        let denom = (y.abs() + p.abs()) / 2.0;
        if denom == 0.0 {
            return Err(Error::ZeroDenominator(i));
        }
        total += (p - y).abs() / denom;
    }
    Ok(100.0 * total / actual.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mape_examples() {
        assert_eq!(mape(&[100.0], &[100.0]).unwrap(), 0.0);
        assert!((mape(&[100.0], &[90.0]).unwrap() - 10.0).abs() < 1e-12);
        assert!((mape(&[50.0, 200.0], &[55.0, 180.0]).unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(mape(&[0.0], &[1.0]).unwrap_err(), Error::ZeroActual(0));
    }

    #[test]
    fn smape_examples() {
        assert_eq!(smape(&[3.0, 4.0], &[3.0, 4.0]).unwrap(), 0.0);
        assert!((smape(&[100.0], &[50.0]).unwrap() - 200.0 / 3.0).abs() < 1e-12);
        assert_eq!(smape(&[100.0], &[0.0]).unwrap(), 200.0);
        assert_eq!(
            smape(&[0.0], &[0.0]).unwrap_err(),
            Error::ZeroDenominator(0)
        );
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            mape(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
