use std::fmt;
use std::str::FromStr;

use crate::{Embedding, Error, Result};

/// A monomial in the embedding components.
///
/// Factors are lag positions into the embedding (0 = newest). `[0, 0]` is
/// `y_k²`, `[1, 2]` is `y_{k-1}·y_{k-2}` and an empty term is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term(pub Vec<usize>);

impl Term {
    fn eval(&self, z: &[f64]) -> f64 {
        self.0.iter().map(|&lag| z[lag]).product()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegressorKind {
    /// `r(z) = [1]`
    Constant,
    /// `r(z) = z`
    Autoregressive,
    /// `r(z) = [z; 1]`
    Affine,
    /// `r(z) = [t_1(z), …, t_m(z)]`
    Custom(Vec<Term>),
}

/// The regressor generator `r(·)` for embeddings of a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegressorSpec {
    kind: RegressorKind,
    order: usize,
}

impl RegressorSpec {
    pub fn new(kind: RegressorKind, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter(
                "embedding order must be >= 1".into(),
            ));
        }
        if let RegressorKind::Custom(terms) = &kind {
            if terms.is_empty() {
                return Err(Error::InvalidParameter(
                    "custom regressor has no terms".into(),
                ));
            }
            if let Some(lag) = terms.iter().flat_map(|t| t.0.iter()).find(|&&l| l >= order) {
                return Err(Error::InvalidParameter(format!(
                    "custom term references lag {lag} but embedding order is {order}"
                )));
            }
        }
        Ok(Self { kind, order })
    }

    pub fn constant(order: usize) -> Self {
        Self::new(RegressorKind::Constant, order).expect("order >= 1")
    }

    pub fn autoregressive(order: usize) -> Self {
        Self::new(RegressorKind::Autoregressive, order).expect("order >= 1")
    }

    pub fn affine(order: usize) -> Self {
        Self::new(RegressorKind::Affine, order).expect("order >= 1")
    }

    pub fn kind(&self) -> &RegressorKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Same regressor family for a different embedding order.
    ///
    /// Custom term lists are kept verbatim and re-validated.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        Self::new(self.kind.clone(), order)
    }

    /// Number of regressor components `n_r`.
    pub fn output_dim(&self) -> usize {
        match &self.kind {
            RegressorKind::Constant => 1,
            RegressorKind::Autoregressive => self.order,
            RegressorKind::Affine => self.order + 1,
            RegressorKind::Custom(terms) => terms.len(),
        }
    }

    pub(crate) fn eval_into(&self, z: &[f64], out: &mut Vec<f64>) {
        match &self.kind {
            RegressorKind::Constant => out.push(1.0),
            RegressorKind::Autoregressive => out.extend_from_slice(z),
            RegressorKind::Affine => {
                out.extend_from_slice(z);
                out.push(1.0);
            }
            RegressorKind::Custom(terms) => out.extend(terms.iter().map(|t| t.eval(z))),
        }
    }
}

impl fmt::Display for RegressorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RegressorKind::Constant => write!(f, "constant"),
            RegressorKind::Autoregressive => write!(f, "autoregressive"),
            RegressorKind::Affine => write!(f, "affine"),
            RegressorKind::Custom(terms) => {
                let parts: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
                write!(f, "custom:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for RegressorKind {
    type Err = Error;

    /// Parses `constant`, `autoregressive` (or `ar`), `affine`, or
    /// `custom:<terms>` where terms are comma separated and factors are
    /// `*`-joined lags, e.g. `custom:0*0,1*2,1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "constant" => return Ok(Self::Constant),
            "autoregressive" | "ar" => return Ok(Self::Autoregressive),
            "affine" => return Ok(Self::Affine),
            _ => {}
        }
        let Some(body) = s.strip_prefix("custom:") else {
            return Err(Error::InvalidParameter(format!("unknown regressor '{s}'")));
        };
        let terms = body
            .split(',')
            .map(|term| {
                let term = term.trim();
                if term == "1" {
                    return Ok(Term(Vec::new()));
                }
                term.split('*')
                    .map(|lag| {
                        lag.trim()
                            .trim_start_matches('y')
                            .parse::<usize>()
                            .map_err(|_| {
                                Error::InvalidParameter(format!("bad regressor term '{term}'"))
                            })
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Term)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::Custom(terms))
    }
}

/// Evaluates `r(z)`.
pub fn apply_regressor(z: &Embedding, spec: &RegressorSpec) -> Result<Vec<f64>> {
    if z.dim() != spec.order() {
        return Err(Error::DimensionMismatch {
            expected: spec.order(),
            got: z.dim(),
        });
    }
    let mut out = Vec::with_capacity(spec.output_dim());
    spec.eval_into(z.as_slice(), &mut out);
    Ok(out)
}
