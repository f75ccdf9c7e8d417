use std::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelKind {
    Epanechnikov,
    Gaussian,
    Tricube,
}

impl KernelKind {
    pub const ALL: [KernelKind; 3] = [
        KernelKind::Epanechnikov,
        KernelKind::Gaussian,
        KernelKind::Tricube,
    ];

    /// 1-based position used in model ids (`NW1` = Epanechnikov, …).
    pub fn number(self) -> usize {
        match self {
            KernelKind::Epanechnikov => 1,
            KernelKind::Gaussian => 2,
            KernelKind::Tricube => 3,
        }
    }

    pub fn from_number(n: usize) -> Option<Self> {
        Self::ALL.get(n.checked_sub(1)?).copied()
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "epanechnikov" | "epa" | "1" => Ok(KernelKind::Epanechnikov),
            "gaussian" | "gauss" | "2" => Ok(KernelKind::Gaussian),
            "tricube" | "3" => Ok(KernelKind::Tricube),
            other => Err(Error::InvalidParameter(format!("unknown kernel '{other}'"))),
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            KernelKind::Epanechnikov => "epanechnikov",
            KernelKind::Gaussian => "gaussian",
            KernelKind::Tricube => "tricube",
        };
        f.write_str(name)
    }
}

/// A kernel with its bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    pub kind: KernelKind,
    pub bandwidth: f64,
}

impl Kernel {
    pub fn new(kind: KernelKind, bandwidth: f64) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bandwidth must be > 0, got {bandwidth}"
            )));
        }
        Ok(Self { kind, bandwidth })
    }

    /// Weight of a point at distance `distance` from the query.
    pub fn weight_at(&self, distance: f64) -> f64 {
        kernel_weight(distance / self.bandwidth, self.kind)
    }
}

/// Kernel profile at the scaled distance `v = ‖z_i − z_k‖ / bandwidth`.
pub fn kernel_weight(v: f64, kind: KernelKind) -> f64 {
    let v = v.abs();
    match kind {
        KernelKind::Epanechnikov if v <= 1.0 => 1.0 - v * v,
        KernelKind::Gaussian => (-0.5 * v * v).exp(),
        KernelKind::Tricube if v <= 1.0 => {
            let c = 1.0 - v * v * v;
            c * c * c
        }
        _ => 0.0,
    }
}
