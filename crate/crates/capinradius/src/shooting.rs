//! Shooting-method eigenvalue oracles for the linear radial problems.
//!
//! These solve u'' + (d−1)/ρ · u' + λ u = 0 on (0, 1) with u'(0) = 0 and
//! u(1) = 0 by RK4 integration plus bisection on λ, entirely independent of
//! the variational solvers they are used to cross-check. d = 2 recovers the
//! Bessel eigenvalue j₀,₁², d = 3 gives π², d = 1 gives (π/2)².

use crate::error::{CapError, Result};

/// Value at ρ = 1 of the regular solution with u(0) = 1, u'(0) = 0.
fn shoot(dim: u32, lambda: f64, steps: usize) -> f64 {
    // Series start: u(ρ) = 1 − λρ²/(2d) + O(ρ⁴) removes the 1/ρ singularity.
    let d = dim as f64;
    let rho0 = 1e-8;
    let mut u = 1.0 - lambda * rho0 * rho0 / (2.0 * d);
    let mut v = -lambda * rho0 / d;
    let h = (1.0 - rho0) / steps as f64;

    let f = |rho: f64, u: f64, v: f64| -> (f64, f64) {
        (v, -lambda * u - (d - 1.0) / rho * v)
    };

    let mut rho = rho0;
    for _ in 0..steps {
        let (k1u, k1v) = f(rho, u, v);
        let (k2u, k2v) = f(rho + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
        let (k3u, k3v) = f(rho + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
        let (k4u, k4v) = f(rho + h, u + h * k3u, v + h * k3v);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        rho += h;
    }
    u
}

/// First Dirichlet eigenvalue of −Δ on the unit ball in dimension `dim`
/// (dim = 1 means the half-interval problem with a Neumann condition at 0,
/// i.e. the even fundamental mode of (−1,1)).
pub fn dirichlet_eigenvalue_ball(dim: u32) -> Result<f64> {
    let steps = 20_000;
    // Scan for the FIRST sign change of u(1; λ): bisecting inside a wider
    // window can land on a higher eigenvalue once u(1) turns positive again.
    let scan_step = 0.25;
    let mut lo = 0.05;
    let mut hi = lo;
    let mut found = false;
    while hi < 200.0 {
        hi = lo + scan_step;
        if shoot(dim, lo, steps) > 0.0 && shoot(dim, hi, steps) <= 0.0 {
            found = true;
            break;
        }
        lo = hi;
    }
    if !found {
        return Err(CapError::BracketFailed(format!(
            "fundamental eigenvalue not found below 200 for dim {dim}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if shoot(dim, mid, steps) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First zero of the Bessel function J₀, from the dim = 2 eigenvalue.
pub fn bessel_j0_first_zero() -> Result<f64> {
    Ok(dirichlet_eigenvalue_ball(2)?.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn interval_even_mode() {
        // u'' + λu = 0, u'(0)=0, u(1)=0 → λ = (π/2)²
        let lam = dirichlet_eigenvalue_ball(1).unwrap();
        assert!((lam - (PI / 2.0).powi(2)).abs() < 1e-9, "{lam}");
    }

    #[test]
    fn ball_3d_is_pi_squared() {
        let lam = dirichlet_eigenvalue_ball(3).unwrap();
        assert!((lam - PI * PI).abs() < 1e-8, "{lam}");
    }

    #[test]
    fn disk_gives_first_bessel_zero() {
        let j01 = bessel_j0_first_zero().unwrap();
        assert!((j01 - 2.404825557695773).abs() < 1e-8, "{j01}");
    }
}
