use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// `K(t) = 1.5 (1 - t²)` on `[0, 1]`.
    #[default]
    Quadratic,
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "quadratic" => Ok(KernelKind::Quadratic),
            other => Err(Error::invalid(format!("unknown kernel '{other}'"))),
        }
    }
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelKind::Quadratic => f.write_str("quadratic"),
        }
    }
}

/// Kernel applied to nonnegative distance ratios `d / h`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct KernelSpec {
    pub kind: KernelKind,
}

impl KernelSpec {
    pub fn quadratic() -> Self {
        KernelSpec {
            kind: KernelKind::Quadratic,
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match self.kind {
            KernelKind::Quadratic => {
                if (0.0..=1.0).contains(&t) {
                    1.5 * (1.0 - t * t)
                } else {
                    0.0
                }
            }
        }
    }
}

pub fn kernel_eval(t: f64, spec: KernelSpec) -> f64 {
    spec.eval(t)
}
