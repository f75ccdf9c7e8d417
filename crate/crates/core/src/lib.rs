//! Non-parametric time-series forecasting with bound-minimizing weights.
//!
//! A forecast is a weighted sum of past observations `ŷ = b_Yᵀ Ψ`. The weights
//! `Ψ` satisfy the local model constraint `AᵀΨ = r(z_k)` and minimize an upper
//! bound on the prediction error:
//!
//! - the weighted L1 bound `‖WΨ‖₁` (worst-case, bounded noise) gives a sparse
//!   deterministic solution `Ψ^D`,
//! - the weighted quadratic bound `ΨᵀWΨ` (variance of random noise) gives a
//!   dense closed-form solution `Ψ^S`,
//! - the combined predictor minimizes `‖WΨ‖₁` inside the L1 ball
//!   `‖Ψ − Ψ^S‖₁ ≤ γ`, moving from `Ψ^S` (`γ = 0`) to `Ψ^D` (large `γ`).
//!
//! `W` is diagonal with entries `σ + L‖z_j − z_k‖₂`.
//!
//! Nadaraya-Watson and local linear kernel baselines, causal preprocessing,
//! leave-one-out tuning and a benchmark runner are included.
//!
//! # Example
//!
//! ```
//! use boundcast::{build_design, build_embeddings, predictors, HyperParams, RegressorSpec, TimeSeries};
//!
//! let series = TimeSeries::new((0..40).map(|t| (t as f64 * 0.7).sin()).collect()).unwrap();
//! let hp = HyperParams::new(3, RegressorSpec::autoregressive(3)).with_gamma(0.1);
//! let forecast = predictors::predict_horizon(&series, &hp, predictors::ModelId::Cp).unwrap();
//! assert!(forecast.value.is_finite());
//! assert!(forecast.error_bound.unwrap() >= hp.sigma);
//! ```

mod design;
mod error;
mod params;
mod regressor;
mod series;

pub mod eval;
pub mod predictors;
pub mod preprocess;
pub mod solvers;

pub use design::{build_design, weight_diagonal, DesignSet};
pub use error::{Error, Result};
pub use nalgebra::DMatrix;
pub use params::HyperParams;
pub use regressor::{apply_regressor, RegressorKind, RegressorSpec, Term};
pub use series::{build_embeddings, Embedding, TimeSeries, TrainingPair};
