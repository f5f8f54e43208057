//! Dimension/exponent pair (N, p) with exact regime classification.

use crate::error::{CapError, Result};
use serde::Serialize;

/// Exponent regime; the classification is exact: callers who want the
/// conformal branch must pass p = N literally (no floating tolerance),
/// since the closed forms have removable singularities at p = N and
/// mixing branches near p ≈ N loses digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// p = 1
    PEq1,
    /// 1 < p < N
    Subconformal,
    /// p = N
    Conformal,
    /// p > N
    Superconformal,
}

/// Dimension N ≥ 2 and exponent p ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponents {
    n: u32,
    p: f64,
    regime: Regime,
}

impl Exponents {
    pub fn new(n: u32, p: f64) -> Result<Self> {
        if n < 2 {
            return Err(CapError::InvalidExponents(format!(
                "dimension must be >= 2, got {n}"
            )));
        }
        if !p.is_finite() || p < 1.0 {
            return Err(CapError::InvalidExponents(format!(
                "exponent must satisfy p >= 1, got {p}"
            )));
        }
        let nf = n as f64;
        let regime = if p == 1.0 {
            Regime::PEq1
        } else if p < nf {
            Regime::Subconformal
        } else if p == nf {
            Regime::Conformal
        } else {
            Regime::Superconformal
        };
        Ok(Self { n, p, regime })
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn dim_f(&self) -> f64 {
        self.n as f64
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// (N − p)/(p − 1), the radial decay exponent of p-harmonic potentials.
    /// Only meaningful for p > 1.
    pub fn radial_exponent(&self) -> f64 {
        (self.dim_f() - self.p) / (self.p - 1.0)
    }
}

impl std::fmt::Display for Exponents {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "N={}, p={}", self.n, self.p)
    }
}
