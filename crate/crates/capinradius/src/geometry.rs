//! Concentric-ball and shell geometry carriers.

use crate::error::{CapError, Result};
use serde::Serialize;

/// Inner ball of radius `r` inside the concentric box ball of radius `R`.
/// The center only matters for domain computations; capacities of
/// concentric configurations are translation invariant.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AnnulusGeometry {
    pub r: f64,
    pub big_r: f64,
}

impl AnnulusGeometry {
    pub fn new(r: f64, big_r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(CapError::InvalidGeometry(format!(
                "inner radius must be positive and finite, got {r}"
            )));
        }
        if !(big_r > r) || !big_r.is_finite() {
            return Err(CapError::InvalidGeometry(format!(
                "outer radius must satisfy R > r, got r={r}, R={big_r}"
            )));
        }
        Ok(Self { r, big_r })
    }
}

/// Shell S_{r1,r2} = B_{r2} \ B̄_{r1} sitting inside the box ball B_R,
/// with 0 < r1 < r2 < R.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShellGeometry {
    pub r1: f64,
    pub r2: f64,
    pub big_r: f64,
}

impl ShellGeometry {
    pub fn new(r1: f64, r2: f64, big_r: f64) -> Result<Self> {
        if !(r1 > 0.0 && r2 > r1 && big_r > r2)
            || !r1.is_finite()
            || !r2.is_finite()
            || !big_r.is_finite()
        {
            return Err(CapError::InvalidGeometry(format!(
                "need 0 < r1 < r2 < R, got r1={r1}, r2={r2}, R={big_r}"
            )));
        }
        Ok(Self { r1, r2, big_r })
    }

    /// |S_{r1,r2}| = ω_N (r2^N − r1^N).
    pub fn volume(&self, n: u32) -> f64 {
        crate::special::unit_ball_volume(n) * (self.r2.powi(n as i32) - self.r1.powi(n as i32))
    }

    pub fn outer_annulus(&self) -> AnnulusGeometry {
        AnnulusGeometry {
            r: self.r2,
            big_r: self.big_r,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_shells() {
        assert!(ShellGeometry::new(0.5, 0.5, 2.0).is_err());
        assert!(ShellGeometry::new(0.0, 0.5, 2.0).is_err());
        assert!(ShellGeometry::new(0.5, 0.8, 0.8).is_err());
        assert!(AnnulusGeometry::new(1.0, 1.0).is_err());
        assert!(AnnulusGeometry::new(-1.0, 2.0).is_err());
    }

    #[test]
    fn shell_volume() {
        let s = ShellGeometry::new(0.5, 0.8, 2.0).unwrap();
        let expected = (4.0 * std::f64::consts::PI / 3.0) * (0.512 - 0.125);
        assert!((s.volume(3) - expected).abs() < 1e-12);
    }
}
