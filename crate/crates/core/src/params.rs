use crate::{Error, RegressorSpec, Result};

/// Hyperparameters of a single forecasting configuration.
///
/// `gamma` is the L1-ball radius of the combined predictor; `bandwidth` is the
/// kernel scale of the Nadaraya-Watson and local linear baselines. They are
/// separate fields even though both are tuned by the same grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperParams {
    pub sigma: f64,
    pub l_const: f64,
    pub gamma: f64,
    pub bandwidth: f64,
    pub order: usize,
    pub regressor: RegressorSpec,
    pub horizon: usize,
}

impl HyperParams {
    /// Defaults `σ = 0`, `L = 1`, `γ = 0`, bandwidth 1, horizon 1.
    pub fn new(order: usize, regressor: RegressorSpec) -> Self {
        Self {
            sigma: 0.0,
            l_const: 1.0,
            gamma: 0.0,
            bandwidth: 1.0,
            order,
            regressor,
            horizon: 1,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_bandwidth(mut self, bandwidth: f64) -> Self {
        self.bandwidth = bandwidth;
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_noise(mut self, sigma: f64, l_const: f64) -> Self {
        self.sigma = sigma;
        self.l_const = l_const;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return bad(format!("sigma must be finite and >= 0, got {}", self.sigma));
        }
        if !(self.l_const.is_finite() && self.l_const >= 0.0) {
            return bad(format!("L must be finite and >= 0, got {}", self.l_const));
        }
        if self.gamma.is_nan() || self.gamma < 0.0 {
            return bad(format!("gamma must be >= 0, got {}", self.gamma));
        }
        if !(self.bandwidth.is_finite() && self.bandwidth > 0.0) {
            return bad(format!("bandwidth must be > 0, got {}", self.bandwidth));
        }
        if self.order == 0 {
            return bad("embedding order must be >= 1".into());
        }
        if self.horizon == 0 {
            return bad("horizon must be >= 1".into());
        }
        if self.regressor.order() != self.order {
            return bad(format!(
                "regressor built for order {} but embedding order is {}",
                self.regressor.order(),
                self.order
            ));
        }
        Ok(())
    }
}
