//! Shell Poincaré machinery: the explicit radial profile of the shell
//! potential, its energy identity, the sharp L¹–L^p constant on shells and
//! its handy/rough upper bounds, the p = 1 sharp constant and the
//! Cheeger-type constant.
//!
//! Constants with exponents 1/(p−1) overflow f64 long before p reaches 1,
//! so every constant here is assembled in log space.

use crate::capacity::ln_cap_ball;
use crate::error::{CapError, Result};
use crate::exponents::{Exponents, Regime};
use crate::geometry::{AnnulusGeometry, ShellGeometry};
use crate::quad::integrate;
use crate::special::{log_add_exp, sphere_area, unit_ball_volume};
use serde::Serialize;

fn require_shell_regime(exp: &Exponents, what: &str) -> Result<()> {
    match exp.regime() {
        Regime::Subconformal | Regime::Conformal => Ok(()),
        _ => Err(CapError::RegimeMismatch(format!(
            "{what} needs 1 < p <= N, got {exp}"
        ))),
    }
}

/// (ρ/N)(1 − (r1/ρ)^N), the quantity whose (1/(p−1))-th power is −v'.
fn slope_base(n: f64, r1: f64, rho: f64) -> f64 {
    (rho / n) * (1.0 - (r1 / rho).powf(n))
}

/// The exact radial minimizer of (1/p)∫|∇φ|^p − ∫_S φ on B_R:
/// constant on [0, r1], explicit derivative on (r1, r2), capacitary tail
/// proportional to the potential of B̄_{r2} in B_R on (r2, R).
#[derive(Debug, Clone, Serialize)]
pub struct ShellProfile {
    pub exp: Exponents,
    pub shell: ShellGeometry,
    /// v(r2) = (|S|/cap_p(B̄_{r2};B_R))^{1/(p−1)}
    pub v_r2: f64,
    /// v on [0, r1]
    pub v_plateau: f64,
}

impl ShellProfile {
    /// −v'(ρ): 0 on [0, r1], ((ρ/N)(1−(r1/ρ)^N))^{1/(p−1)} on (r1, r2),
    /// capacitary-tail slope on (r2, R).
    pub fn neg_slope(&self, rho: f64) -> f64 {
        let n = self.exp.dim_f();
        let p = self.exp.p();
        let s = &self.shell;
        if rho <= s.r1 {
            0.0
        } else if rho <= s.r2 {
            slope_base(n, s.r1, rho).powf(1.0 / (p - 1.0))
        } else if rho < s.big_r {
            match self.exp.regime() {
                Regime::Conformal => self.v_r2 / (rho * (s.big_r / s.r2).ln()),
                _ => {
                    let a = self.exp.radial_exponent();
                    let denom = (a * (s.big_r / s.r2).ln()).exp_m1();
                    self.v_r2 * a * (rho / s.big_r).powf(-a) / (rho * denom)
                }
            }
        } else {
            0.0
        }
    }

    /// v(ρ) by the piecewise construction.
    pub fn eval(&self, rho: f64) -> f64 {
        let s = &self.shell;
        if rho <= s.r1 {
            self.v_plateau
        } else if rho <= s.r2 {
            let tail = integrate(|t| self.neg_slope(t), rho, s.r2, 1e-11)
                .map(|q| q.value)
                .unwrap_or(0.0);
            self.v_r2 + tail
        } else if rho < s.big_r {
            match self.exp.regime() {
                Regime::Conformal => self.v_r2 * (s.big_r / rho).ln() / (s.big_r / s.r2).ln(),
                _ => {
                    let a = self.exp.radial_exponent();
                    let num = (a * (s.big_r / rho).ln()).exp_m1();
                    let den = (a * (s.big_r / s.r2).ln()).exp_m1();
                    self.v_r2 * num / den
                }
            }
        } else {
            0.0
        }
    }
}

/// Assemble the exact shell-potential profile.
pub fn shell_profile(exp: &Exponents, shell: &ShellGeometry) -> Result<ShellProfile> {
    require_shell_regime(exp, "shell_profile")?;
    let p = exp.p();
    let ln_s = shell.volume(exp.dim()).ln();
    let ln_cap = ln_cap_ball(exp, &shell.outer_annulus());
    let v_r2 = ((ln_s - ln_cap) / (p - 1.0)).exp();
    let mut profile = ShellProfile {
        exp: *exp,
        shell: *shell,
        v_r2,
        v_plateau: v_r2,
    };
    let ramp = integrate(|t| profile.neg_slope(t), shell.r1, shell.r2, 1e-11)?;
    profile.v_plateau = v_r2 + ramp.value;
    Ok(profile)
}

/// log of the shell energy ∫|∇V|^p =
///   N ω_N ∫_{r1}^{r2} ((ρ/N)(1−(r1/ρ)^N))^{p/(p−1)} ρ^{N−1} dρ
///   + |S|^{p/(p−1)} cap_p(B̄_{r2};B_R)^{−1/(p−1)}.
/// The shell integral is evaluated in scaled form so the result stays
/// finite for p arbitrarily close to 1.
pub fn ln_shell_energy(exp: &Exponents, shell: &ShellGeometry) -> Result<f64> {
    require_shell_regime(exp, "shell_energy")?;
    let n = exp.dim_f();
    let p = exp.p();
    let pp = p / (p - 1.0);
    let nwn = n * unit_ball_volume(exp.dim());

    let g_max = slope_base(n, shell.r1, shell.r2);
    // I = ∫ (g/g_max)^{p'} ρ^{N−1} dρ, integrand in [0, 1]
    let scaled = integrate(
        |rho| (slope_base(n, shell.r1, rho) / g_max).powf(pp) * rho.powf(n - 1.0),
        shell.r1,
        shell.r2,
        1e-10,
    )?;
    let ln_term1 = if scaled.value > 0.0 {
        nwn.ln() + pp * g_max.ln() + scaled.value.ln()
    } else {
        f64::NEG_INFINITY
    };

    let ln_s = shell.volume(exp.dim()).ln();
    let ln_cap = ln_cap_ball(exp, &shell.outer_annulus());
    let ln_term2 = (p * ln_s - ln_cap) / (p - 1.0);

    Ok(log_add_exp(ln_term1, ln_term2))
}

/// Shell energy ∫|∇V|^p itself (may overflow for p extremely close to 1;
/// use `ln_shell_energy` in that regime).
pub fn shell_energy_closed_form(exp: &Exponents, shell: &ShellGeometry) -> Result<f64> {
    Ok(ln_shell_energy(exp, shell)?.exp())
}

/// Sharp constant of (∫_S |φ|)^p ≤ C ∫_{B_R}|∇φ|^p over W^{1,p}_0(B_R):
/// C = (∫|∇V|^p)^{p−1}.
pub fn sharp_shell_constant(exp: &Exponents, shell: &ShellGeometry) -> Result<f64> {
    Ok(ln_sharp_shell_constant(exp, shell)?.exp())
}

pub fn ln_sharp_shell_constant(exp: &Exponents, shell: &ShellGeometry) -> Result<f64> {
    Ok((exp.p() - 1.0) * ln_shell_energy(exp, shell)?)
}

/// Mean-value form constant: (⨍_S |φ|)^p ≤ handy · ∫|∇φ|^p with
/// handy = [ |S|/H^{N−1}(∂B_{r2})^{p/(p−1)} + cap_p(B̄_{r2};B_R)^{−1/(p−1)} ]^{p−1}.
pub fn handy_shell_bound(exp: &Exponents, shell: &ShellGeometry) -> Result<f64> {
    Ok(ln_handy_shell_bound(exp, shell)?.exp())
}

pub fn ln_handy_shell_bound(exp: &Exponents, shell: &ShellGeometry) -> Result<f64> {
    require_shell_regime(exp, "handy_shell_bound")?;
    let p = exp.p();
    let ln_s = shell.volume(exp.dim()).ln();
    let ln_h = sphere_area(exp.dim(), shell.r2).ln();
    let ln_cap = ln_cap_ball(exp, &shell.outer_annulus());
    let ln_geo = ln_s - (p / (p - 1.0)) * ln_h;
    Ok((p - 1.0) * log_add_exp(ln_geo, -ln_cap / (p - 1.0)))
}

/// Rougher but handier constant: (⨍_S |φ|)^p ≤ cap_p(B̄_{r1};B_R)^{−1} ∫|∇φ|^p.
pub fn rough_shell_bound(exp: &Exponents, r1: f64, big_r: f64) -> Result<f64> {
    require_shell_regime(exp, "rough_shell_bound")?;
    let geom = AnnulusGeometry::new(r1, big_r)?;
    Ok((-ln_cap_ball(exp, &geom)).exp())
}

/// Sharp p = 1 constant: sup ∫_S|φ| / ∫|∇φ| = |S| / cap₁(B̄_{r2};B_R)
/// = |S| / (N ω_N r2^{N−1}).
pub fn shell_constant_p1(dim: u32, shell: &ShellGeometry) -> f64 {
    shell.volume(dim) / sphere_area(dim, shell.r2)
}

/// Cheeger-type constant inf{ H^{N−1}(∂E)/|E ∩ S| : E ⋐ B_R } =
/// H^{N−1}(∂B_{r2})/|S|; B_{r2} is an optimal shape.
pub fn cheeger_shell_constant(dim: u32, shell: &ShellGeometry) -> f64 {
    sphere_area(dim, shell.r2) / shell.volume(dim)
}

/// Ratio H^{N−1}(∂B_t)/|B_t ∩ S| for the concentric-ball test family;
/// scanning it over t locates the optimal shape.
pub fn cheeger_ball_family_ratio(dim: u32, shell: &ShellGeometry, t: f64) -> f64 {
    let wn = unit_ball_volume(dim);
    let inter = wn * (t.min(shell.r2).powi(dim as i32) - shell.r1.powi(dim as i32));
    if inter <= 0.0 {
        f64::INFINITY
    } else {
        sphere_area(dim, t) / inter
    }
}

/// Quotient ∫_S φ / ∫|∇φ| of the mollified indicator of B_{r2}
/// (ramp of width `mollifier_radius`), evaluated on a fine radial grid —
/// the extremizing family of the p = 1 constant.
pub fn p1_indicator_quotient(dim: u32, shell: &ShellGeometry, mollifier_radius: f64) -> f64 {
    let m = mollifier_radius;
    assert!(m > 0.0 && shell.r2 + m < shell.big_r);
    let nwn = dim as f64 * unit_ball_volume(dim);
    let phi = |rho: f64| -> f64 {
        if rho <= shell.r2 {
            1.0
        } else if rho < shell.r2 + m {
            (shell.r2 + m - rho) / m
        } else {
            0.0
        }
    };
    let n_grid = 200_000;
    let h = shell.big_r / n_grid as f64;
    let mut num = 0.0; // ∫_S φ dx
    let mut den = 0.0; // ∫ |∇φ| dx
    for i in 0..n_grid {
        let a = i as f64 * h;
        let b = a + h;
        let mid = 0.5 * (a + b);
        let w = nwn * mid.powi(dim as i32 - 1) * h;
        if mid > shell.r1 && mid < shell.r2 {
            num += phi(mid) * w;
        }
        den += (phi(a) - phi(b)).abs() / h * w;
    }
    num / den
}
