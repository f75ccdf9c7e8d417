//! Flat `key = value` run configuration with flag overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use boundcast::eval::{default_gamma_grid, Criterion, DEFAULT_CV_FOLDS};
use boundcast::predictors::{KernelKind, ModelId};
use boundcast::preprocess::{parse_steps, MetricScale, TransformStep};
use boundcast::{HyperParams, RegressorKind, RegressorSpec};

use crate::CliError;

/// Every recognised key. Flags use the same names with dashes.
pub const KEYS: &[&str] = &[
    "data",
    "column",
    "transform",
    "train_len",
    "train_fraction",
    "test_len",
    "metric_scale",
    "order",
    "regressor",
    "sigma",
    "l_const",
    "gamma",
    "bandwidth",
    "gamma_grid",
    "kernel",
    "bandwidth_grid",
    "horizons",
    "criterion",
    "models",
    "cv_folds",
    "out",
    "seed",
];

/// Raw key-value pairs, later entries overriding earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues(BTreeMap<String, String>);

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

impl KeyValues {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("config line {}: expected 'key = value'", n + 1))
            })?;
            let k = normalize(k);
            if !KEYS.contains(&k.as_str()) {
                return Err(CliError::Config(format!(
                    "config line {}: unknown key '{k}'",
                    n + 1
                )));
            }
            map.insert(k, v.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(normalize(key), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// `other` wins on shared keys.
    pub fn merged(mut self, other: &KeyValues) -> Self {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
        self
    }
}

/// How many leading observations form the training set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrainSpec {
    All,
    Len(usize),
    Fraction(f64),
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    pub column: Option<String>,
    pub transform: Vec<TransformStep>,
    pub train: TrainSpec,
    pub test_len: Option<usize>,
    pub metric_scale: MetricScale,
    pub order: usize,
    pub regressor: RegressorKind,
    pub sigma: f64,
    pub l_const: f64,
    pub gamma: f64,
    pub bandwidth: Option<f64>,
    pub gamma_grid: Vec<f64>,
    pub kernels: Vec<KernelKind>,
    pub bandwidth_grid: Option<Vec<f64>>,
    pub horizons: Vec<usize>,
    pub criteria: Vec<Criterion>,
    pub models: Vec<ModelId>,
    /// `None` holds out every training pair.
    pub cv_folds: Option<usize>,
    pub out: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data: None,
            column: None,
            transform: Vec::new(),
            train: TrainSpec::All,
            test_len: None,
            metric_scale: MetricScale::Original,
            order: 12,
            regressor: RegressorKind::Autoregressive,
            sigma: 0.0,
            l_const: 1.0,
            gamma: 0.0,
            bandwidth: None,
            gamma_grid: default_gamma_grid(),
            kernels: KernelKind::ALL.to_vec(),
            bandwidth_grid: None,
            horizons: vec![1, 2, 3],
            criteria: Criterion::BOTH.to_vec(),
            models: ModelId::standard_set(),
            cv_folds: Some(DEFAULT_CV_FOLDS),
            out: PathBuf::from("out"),
            seed: 0,
        }
    }
}

fn bad(key: &str, value: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key} = '{value}': {why}"))
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| bad(key, value, e))
}

fn list<T, F>(key: &str, value: &str, mut f: F) -> Result<Vec<T>, CliError>
where
    F: FnMut(&str) -> Result<T, CliError>,
{
    let items: Vec<T> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(&mut f)
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(bad(key, value, "empty list"));
    }
    Ok(items)
}

/// Comma-separated numbers and inclusive `start:stop:step` ranges, sorted and
/// deduplicated. Range points are rounded to 12 decimals so that `0:1:0.01`
/// contains exactly `0.12`.
pub fn parse_grid(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(num::<f64>(key, x)?),
            [a, b, s] => {
                let (a, b, s) = (
                    num::<f64>(key, a)?,
                    num::<f64>(key, b)?,
                    num::<f64>(key, s)?,
                );
                if !(s > 0.0) || b < a {
                    return Err(bad(key, item, "range needs start <= stop and step > 0"));
                }
                let n = ((b - a) / s + 1e-9).floor() as usize;
                out.extend((0..=n).map(|i| ((a + i as f64 * s) * 1e12).round() / 1e12));
            }
            _ => return Err(bad(key, item, "expected a number or start:stop:step")),
        }
    }
    if out.is_empty() || out.iter().any(|x| !x.is_finite()) {
        return Err(bad(key, value, "grid must contain finite numbers"));
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

fn parse_models(value: &str, kernels: &[KernelKind]) -> Result<Vec<ModelId>, CliError> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.to_ascii_uppercase().as_str() {
            "NW" => out.extend(kernels.iter().map(|&k| ModelId::Nw(k))),
            "LL" => out.extend(kernels.iter().map(|&k| ModelId::Ll(k))),
            "ALL" | "STANDARD" => out.extend(ModelId::standard_set()),
            _ => out.push(item.parse().map_err(|e| bad("models", item, e))?),
        }
    }
    Ok(out)
}

impl RunConfig {
    pub fn from_key_values(kv: &KeyValues) -> Result<Self, CliError> {
        let mut c = RunConfig::default();
        let get = |k: &str| kv.get(k);

        if let Some(v) = get("data") {
            c.data = Some(PathBuf::from(v));
        }
        c.column = get("column").map(str::to_string);
        if let Some(v) = get("transform") {
            c.transform = parse_steps(v).map_err(|e| bad("transform", v, e))?;
        }
        match (get("train_len"), get("train_fraction")) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "set either train_len or train_fraction, not both".into(),
                ))
            }
            (Some(v), None) => c.train = TrainSpec::Len(num("train_len", v)?),
            (None, Some(v)) => {
                let f: f64 = num("train_fraction", v)?;
                if !(f > 0.0 && f < 1.0) {
                    return Err(bad("train_fraction", v, "must lie in (0, 1)"));
                }
                c.train = TrainSpec::Fraction(f);
            }
            (None, None) => {}
        }
        if let Some(v) = get("test_len") {
            c.test_len = Some(num("test_len", v)?);
        }
        if let Some(v) = get("metric_scale") {
            c.metric_scale = v.parse().map_err(|e| bad("metric_scale", v, e))?;
        }
        if let Some(v) = get("order") {
            c.order = num("order", v)?;
        }
        if let Some(v) = get("regressor") {
            c.regressor = v.parse().map_err(|e| bad("regressor", v, e))?;
        }
        if let Some(v) = get("sigma") {
            c.sigma = num("sigma", v)?;
        }
        if let Some(v) = get("l_const") {
            c.l_const = num("l_const", v)?;
        }
        if let Some(v) = get("gamma") {
            c.gamma = num("gamma", v)?;
        }
        if let Some(v) = get("bandwidth") {
            c.bandwidth = Some(num("bandwidth", v)?);
        }
        if let Some(v) = get("gamma_grid") {
            c.gamma_grid = parse_grid("gamma_grid", v)?;
        }
        if let Some(v) = get("kernel") {
            c.kernels = list("kernel", v, |s| {
                KernelKind::parse(s).map_err(|e| bad("kernel", s, e))
            })?;
        }
        if let Some(v) = get("bandwidth_grid") {
            c.bandwidth_grid = if v.eq_ignore_ascii_case("auto") {
                None
            } else {
                Some(parse_grid("bandwidth_grid", v)?)
            };
        }
        if let Some(v) = get("horizons") {
            c.horizons = list("horizons", v, |s| num("horizons", s))?;
        }
        if let Some(v) = get("criterion") {
            c.criteria = list("criterion", v, |s| {
                s.parse().map_err(|e| bad("criterion", s, e))
            })?;
        }
        if let Some(v) = get("models") {
            c.models = parse_models(v, &c.kernels)?;
        } else if get("kernel").is_some() {
            c.models = std::iter::once(ModelId::Cp)
                .chain(c.kernels.iter().map(|&k| ModelId::Ll(k)))
                .chain(c.kernels.iter().map(|&k| ModelId::Nw(k)))
                .collect();
        }
        if let Some(v) = get("cv_folds") {
            c.cv_folds = if v.eq_ignore_ascii_case("all") {
                None
            } else {
                match num::<usize>("cv_folds", v)? {
                    0 => None,
                    n => Some(n),
                }
            };
        }
        if let Some(v) = get("out") {
            c.out = PathBuf::from(v);
        }
        if let Some(v) = get("seed") {
            c.seed = num("seed", v)?;
        }
        c.hyper_params()?
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if c.horizons.contains(&0) {
            return Err(CliError::Config("horizons must be >= 1".into()));
        }
        Ok(c)
    }

    /// Hyperparameter template for horizon 1.
    pub fn hyper_params(&self) -> Result<HyperParams, CliError> {
        let spec = RegressorSpec::new(self.regressor.clone(), self.order)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let mut hp = HyperParams::new(self.order, spec)
            .with_noise(self.sigma, self.l_const)
            .with_gamma(self.gamma);
        if let Some(b) = self.bandwidth {
            hp = hp.with_bandwidth(b);
        }
        Ok(hp)
    }

    /// Training length for a series of `n` observations.
    pub fn train_len(&self, n: usize) -> usize {
        match self.train {
            TrainSpec::All => n,
            TrainSpec::Len(l) => l,
            TrainSpec::Fraction(f) => (f * n as f64).round() as usize,
        }
    }

    pub fn data_path(&self) -> Result<&Path, CliError> {
        self.data.as_deref().ok_or_else(|| {
            CliError::Config("no data file given (use --data or 'data =' in the config)".into())
        })
    }
}
