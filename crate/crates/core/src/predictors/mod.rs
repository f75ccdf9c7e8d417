//! Point forecasters sharing one design set: the combined predictor, its
//! ordinary autoregressive special case, and the kernel baselines.

mod cp;
mod kernel;
mod ll;
mod nw;

use std::fmt;
use std::str::FromStr;

pub use cp::{predict_cp, CpQuery};
pub use kernel::{kernel_weight, Kernel, KernelKind};
pub use ll::{local_linear, predict_ll, LL_RIDGE};
pub use nw::{nadaraya_watson, nearest_neighbor, predict_nw};

use crate::solvers::SolveStatus;
use crate::{
    build_design, build_embeddings, DesignSet, Embedding, Error, HyperParams, Result, TimeSeries,
};

/// A point forecast with the weights applied to the stored targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast {
    pub value: f64,
    pub weights: Vec<f64>,
    /// Worst-case error bound; only the combined predictor provides one.
    pub error_bound: Option<f64>,
    pub status: SolveStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelId {
    Cp,
    /// Ordinary least-squares autoregression (`σ = 1`, `L = 0`, `γ = 0`).
    Ar,
    Nw(KernelKind),
    Ll(KernelKind),
}

/// Which hyperparameter a model's grid search tunes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tuned {
    Gamma,
    Bandwidth,
    Nothing,
}

impl ModelId {
    /// The combined predictor followed by the six kernel baselines.
    pub fn standard_set() -> Vec<ModelId> {
        let mut v = vec![ModelId::Cp];
        v.extend(KernelKind::ALL.map(ModelId::Ll));
        v.extend(KernelKind::ALL.map(ModelId::Nw));
        v
    }

    pub fn tuned(self) -> Tuned {
        match self {
            ModelId::Cp => Tuned::Gamma,
            ModelId::Ar => Tuned::Nothing,
            ModelId::Nw(_) | ModelId::Ll(_) => Tuned::Bandwidth,
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelId::Cp => f.write_str("CP"),
            ModelId::Ar => f.write_str("AR"),
            ModelId::Nw(k) => write!(f, "NW{}", k.number()),
            ModelId::Ll(k) => write!(f, "LL{}", k.number()),
        }
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        let kernel = |rest: &str| {
            rest.parse::<usize>()
                .ok()
                .and_then(KernelKind::from_number)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown model '{s}'")))
        };
        match up.as_str() {
            "CP" => Ok(ModelId::Cp),
            "AR" => Ok(ModelId::Ar),
            _ if up.starts_with("NW") => kernel(&up[2..]).map(ModelId::Nw),
            _ if up.starts_with("LL") => kernel(&up[2..]).map(ModelId::Ll),
            _ => Err(Error::InvalidParameter(format!("unknown model '{s}'"))),
        }
    }
}

/// A query point prepared for evaluation at many values of the model's tuned
/// hyperparameter (`γ` or bandwidth).
#[derive(Debug, Clone)]
pub struct PreparedQuery<'a> {
    model: ModelId,
    inner: Prepared<'a>,
}

#[derive(Debug, Clone)]
enum Prepared<'a> {
    Combined(CpQuery),
    Fixed(Forecast),
    Kernel {
        design: &'a DesignSet,
        z_k: &'a Embedding,
        distances: Vec<f64>,
    },
}

impl<'a> PreparedQuery<'a> {
    pub fn new(
        model: ModelId,
        design: &'a DesignSet,
        z_k: &'a Embedding,
        hp: &HyperParams,
    ) -> Result<Self> {
        let inner = match model {
            ModelId::Cp => Prepared::Combined(CpQuery::new(design, z_k, hp.sigma, hp.l_const)?),
            ModelId::Ar => Prepared::Fixed(CpQuery::new(design, z_k, 1.0, 0.0)?.forecast(0.0)?),
            ModelId::Nw(_) | ModelId::Ll(_) => Prepared::Kernel {
                design,
                z_k,
                distances: design.distances_to(z_k)?,
            },
        };
        Ok(Self { model, inner })
    }

    /// Forecast at `param`: `γ` for CP, bandwidth for kernels, ignored for AR.
    ///
    /// Kernel models fall back to the nearest neighbour when every kernel
    /// weight vanishes.
    pub fn forecast(&self, param: f64) -> Result<Forecast> {
        match &self.inner {
            Prepared::Combined(q) => q.forecast(param),
            Prepared::Fixed(f) => Ok(f.clone()),
            Prepared::Kernel {
                design,
                z_k,
                distances,
            } => {
                let kind = match self.model {
                    ModelId::Nw(k) | ModelId::Ll(k) => k,
                    _ => unreachable!("kernel query built for a kernel model"),
                };
                let kernel = Kernel::new(kind, param)?;
                let weights: Vec<f64> = distances.iter().map(|&d| kernel.weight_at(d)).collect();
                let result = match self.model {
                    ModelId::Nw(_) => nadaraya_watson(design.targets(), &weights),
                    _ => local_linear(design.embeddings(), design.targets(), z_k, &weights),
                };
                match result {
                    Err(Error::AllWeightsZero) => {
                        log::debug!("{}: all kernel weights zero at bandwidth {param}, using nearest neighbour", self.model);
                        nearest_neighbor(design, z_k)
                    }
                    other => other,
                }
            }
        }
    }
}

/// Forecast for `z_k` from `design` with the model's tuned value read from `hp`.
pub fn forecast(
    model: ModelId,
    design: &DesignSet,
    z_k: &Embedding,
    hp: &HyperParams,
) -> Result<Forecast> {
    let param = match model.tuned() {
        Tuned::Gamma => hp.gamma,
        Tuned::Bandwidth => hp.bandwidth,
        Tuned::Nothing => 0.0,
    };
    PreparedQuery::new(model, design, z_k, hp)?.forecast(param)
}

/// Forecast of `y_{k+h}` from the whole series, where `k` is the last index.
pub fn predict_horizon(series: &TimeSeries, hp: &HyperParams, model: ModelId) -> Result<Forecast> {
    hp.validate()?;
    let pairs = build_embeddings(series, hp.order, hp.horizon)?;
    let design = build_design(&pairs, &hp.regressor)?;
    let z_k = Embedding::latest(series, hp.order)?;
    forecast(model, &design, &z_k, hp)
}
