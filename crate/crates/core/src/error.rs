/// Errors returned by this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The series cannot provide a single (embedding, target) pair.
    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    /// A vector or matrix does not have the expected dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Fewer training pairs than regressor components.
    #[error("insufficient data: {rows} training pairs for {features} regressor components")]
    InsufficientData { rows: usize, features: usize },
    /// Empty series or non-finite observation.
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    /// A hyperparameter or configuration value outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The equality constraints `AᵀΨ = r` have no solution.
    #[error("constraints are infeasible (residual {residual:.3e})")]
    Infeasible { residual: f64 },
    /// The linear program has no finite optimum.
    #[error("linear program is unbounded")]
    Unbounded,
    /// The simplex method did not terminate within its pivot budget.
    #[error("simplex pivot limit reached")]
    IterationLimit,
    /// Every kernel weight vanished (compact kernel with a bandwidth that is too small).
    #[error("all kernel weights are zero")]
    AllWeightsZero,
    /// `log10` requested for a value that is not strictly positive.
    #[error("cannot take log10 of non-positive value {value} at index {index}")]
    NonPositiveValue { index: usize, value: f64 },
    /// A linear trend needs at least two training observations.
    #[error("linear detrend needs at least 2 training observations, got {0}")]
    DegenerateTrend(usize),
    /// A train/test split that leaves one side empty.
    #[error("empty split: {train} training and {test} test observations")]
    EmptySplit { train: usize, test: usize },
    /// MAPE is undefined when an actual value is zero.
    #[error("actual value is zero at position {0}")]
    ZeroActual(usize),
    /// SMAPE is undefined when actual and predicted are both zero.
    #[error("actual and predicted are both zero at position {0}")]
    ZeroDenominator(usize),
    /// Metric inputs differ in length or are empty.
    #[error("length mismatch: {actual} actual vs {predicted} predicted")]
    LengthMismatch { actual: usize, predicted: usize },
    /// A hyperparameter grid without values.
    #[error("hyperparameter grid is empty")]
    EmptyGrid,
    /// Every grid value failed in at least one fold.
    #[error("no grid value produced a valid cross-validation score")]
    NoValidGridValue,
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
