//! Closed-form relative p-capacities of concentric balls and points,
//! scaling relations, the quantified Grötzsch-type inequality, the
//! isocapacitary lower bound and the superconformal threshold γ₀.

use crate::error::{CapError, Result};
use crate::exponents::{Exponents, Regime};
use crate::geometry::{AnnulusGeometry, ShellGeometry};
use crate::special::{sphere_area, unit_ball_volume};
use serde::Serialize;

/// How a capacity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    ClosedForm,
    Numeric,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Numeric => "numeric",
        }
    }
}

/// Nonnegative capacity together with its provenance and tolerance
/// (0 for closed forms).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CapacityValue {
    pub value: f64,
    pub method: Method,
    pub tol: f64,
}

impl CapacityValue {
    pub fn closed_form(value: f64) -> Self {
        Self {
            value,
            method: Method::ClosedForm,
            tol: 0.0,
        }
    }

    pub fn numeric(value: f64, tol: f64) -> Self {
        Self {
            value,
            method: Method::Numeric,
            tol,
        }
    }
}

/// Point capacity: positive only for p > N; points are capacity-null for
/// p ≤ N and the null case is mathematical content, not an error.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum PointCapacity {
    Positive(CapacityValue),
    CapacityNull,
}

impl PointCapacity {
    pub fn value(&self) -> f64 {
        match self {
            PointCapacity::Positive(c) => c.value,
            PointCapacity::CapacityNull => 0.0,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, PointCapacity::CapacityNull)
    }
}

/// p-modulus cap^{−1/(p−1)}; infinite when the capacity vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Modulus {
    Finite(f64),
    Infinite,
}

impl Modulus {
    pub fn finite(&self) -> Option<f64> {
        match self {
            Modulus::Finite(v) => Some(*v),
            Modulus::Infinite => None,
        }
    }
}

/// log cap_p(B̄_r; B_R) for p > 1. The general branch is written with
/// expm1/log so that |1 − (r/R)^{(N−p)/(p−1)}| stays accurate through the
/// removable singularity at p = N.
pub fn ln_cap_ball(exp: &Exponents, geom: &AnnulusGeometry) -> f64 {
    let n = exp.dim_f();
    let p = exp.p();
    let nwn = (exp.dim_f() * unit_ball_volume(exp.dim())).ln();
    match exp.regime() {
        Regime::PEq1 => nwn + (n - 1.0) * geom.r.ln(),
        Regime::Conformal => nwn + (1.0 - n) * (geom.big_r / geom.r).ln().ln(),
        _ => {
            let a = exp.radial_exponent();
            let l = (geom.r / geom.big_r).ln();
            // |1 − (r/R)^a| = |expm1(a log(r/R))|
            let denom = (a * l).exp_m1().abs().ln();
            nwn + (p - 1.0) * (a.abs().ln() - denom) + (n - p) * geom.r.ln()
        }
    }
}

/// Relative p-capacity of a ball in a concentric ball:
///   p = 1:            N ω_N r^{N−1}                       (R-independent)
///   1 < p ≠ N:        N ω_N |(N−p)/(p−1)|^{p−1} r^{N−p} / |1−(r/R)^{(N−p)/(p−1)}|^{p−1}
///   p = N:            N ω_N (log(R/r))^{1−N}
pub fn cap_ball(exp: &Exponents, geom: &AnnulusGeometry) -> CapacityValue {
    CapacityValue::closed_form(ln_cap_ball(exp, geom).exp())
}

/// Convenience wrapper validating 0 < r < R.
pub fn cap_ball_checked(exp: &Exponents, r: f64, big_r: f64) -> Result<CapacityValue> {
    let geom = AnnulusGeometry::new(r, big_r)?;
    Ok(cap_ball(exp, &geom))
}

/// Relative p-capacity of a point in the centered ball B_R:
/// N ω_N ((p−N)/(p−1))^{p−1} R^{N−p} for p > N, capacity-null otherwise.
pub fn cap_point(exp: &Exponents, big_r: f64) -> Result<PointCapacity> {
    if !(big_r > 0.0) {
        return Err(CapError::InvalidGeometry(format!(
            "box radius must be positive, got {big_r}"
        )));
    }
    if exp.regime() != Regime::Superconformal {
        return Ok(PointCapacity::CapacityNull);
    }
    let n = exp.dim_f();
    let p = exp.p();
    let c = n * unit_ball_volume(exp.dim())
        * ((p - n) / (p - 1.0)).powf(p - 1.0)
        * big_r.powf(n - p);
    Ok(PointCapacity::Positive(CapacityValue::closed_form(c)))
}

/// |cap(r,R) − r^{N−p} cap(1, R/r)|, the scaling-relation residual.
pub fn cap_scaling_residual(exp: &Exponents, r: f64, big_r: f64) -> Result<f64> {
    let direct = cap_ball_checked(exp, r, big_r)?.value;
    let scaled =
        r.powf(exp.dim_f() - exp.p()) * cap_ball_checked(exp, 1.0, big_r / r)?.value;
    Ok((direct - scaled).abs())
}

/// Both sides of the quantified Grötzsch-type monotonicity inequality
///   |B_{r2}\B_{r1}| / H^{N−1}(∂B_{r2})^{p/(p−1)} + cap(r2,R)^{−1/(p−1)}
///     ≤ cap(r1,R)^{−1/(p−1)},
/// valid for 1 < p ≤ N. Returns (lhs, rhs).
pub fn grotzsch_gap(exp: &Exponents, shell: &ShellGeometry) -> Result<(f64, f64)> {
    match exp.regime() {
        Regime::Subconformal | Regime::Conformal => {}
        _ => {
            return Err(CapError::RegimeMismatch(format!(
                "Grötzsch-type inequality needs 1 < p <= N, got {exp}"
            )))
        }
    }
    let p = exp.p();
    let geo_term = shell.volume(exp.dim())
        / sphere_area(exp.dim(), shell.r2).powf(p / (p - 1.0));
    let m2 = (-ln_cap_ball(exp, &AnnulusGeometry { r: shell.r2, big_r: shell.big_r })
        / (p - 1.0))
        .exp();
    let m1 = (-ln_cap_ball(exp, &AnnulusGeometry { r: shell.r1, big_r: shell.big_r })
        / (p - 1.0))
        .exp();
    Ok((geo_term + m2, m1))
}

/// p-modulus of a capacity value: cap^{−1/(p−1)}; infinite for cap = 0.
pub fn p_modulus(cap: &CapacityValue, p: f64) -> Result<Modulus> {
    if !(p > 1.0) {
        return Err(CapError::RegimeMismatch(format!(
            "p-modulus needs p > 1, got {p}"
        )));
    }
    if cap.value == 0.0 {
        return Ok(Modulus::Infinite);
    }
    Ok(Modulus::Finite(cap.value.powf(-1.0 / (p - 1.0))))
}

/// Isocapacitary lower bound on cap_p(F; B) for a compact F of volume
/// `vol_f` inside a ball of volume `vol_box`, for 1 < p ≠ N:
///   (N ω_N)^{p/N} N^{(N−p)/N} |(N−p)/(p−1)|^{p−1}
///     · |vol_box^{(p−N)/(N(p−1))} − vol_f^{(p−N)/(N(p−1))}|^{1−p}.
/// When F is itself a concentric ball the bound is attained (it reproduces
/// cap_ball exactly); vol_f = 0 yields 0 for p < N and the point capacity
/// for p > N.
pub fn isocap_lower_bound(exp: &Exponents, vol_f: f64, vol_box: f64) -> Result<f64> {
    let n = exp.dim_f();
    let p = exp.p();
    match exp.regime() {
        Regime::Subconformal | Regime::Superconformal => {}
        _ => {
            return Err(CapError::RegimeMismatch(format!(
                "isocapacitary bound needs 1 < p != N, got {exp}"
            )))
        }
    }
    if !(vol_f >= 0.0) || !(vol_box > 0.0) || vol_f > vol_box {
        return Err(CapError::InvalidGeometry(format!(
            "need 0 <= vol_F <= vol_box, got vol_F={vol_f}, vol_box={vol_box}"
        )));
    }
    let beta = (p - n) / (n * (p - 1.0));
    if vol_f == 0.0 {
        if p < n {
            return Ok(0.0); // vol_f^beta -> +inf, |...|^{1-p} -> 0
        }
        // p > N: the bound degenerates to the capacity of a point.
        return Ok((n * unit_ball_volume(exp.dim())).powf(p / n)
            * n.powf((n - p) / n)
            * ((p - n) / (p - 1.0)).powf(p - 1.0)
            * vol_box.powf((n - p) / n));
    }
    let prefactor = (n * unit_ball_volume(exp.dim())).powf(p / n)
        * n.powf((n - p) / n)
        * ((n - p) / (p - 1.0)).abs().powf(p - 1.0);
    let gap = (vol_box.powf(beta) - vol_f.powf(beta)).abs();
    Ok(prefactor * gap.powf(1.0 - p))
}

/// Superconformal threshold γ₀ = cap_p({0};B₂)/cap_p(B̄₁;B₂)
///                             = 2^{−(p−N)} (2^{(p−N)/(p−1)} − 1)^{p−1},
/// defined for p > N; always in (0,1).
pub fn gamma0(exp: &Exponents) -> Result<f64> {
    if exp.regime() != Regime::Superconformal {
        return Err(CapError::RegimeMismatch(format!(
            "gamma0 needs p > N, got {exp}"
        )));
    }
    let n = exp.dim_f();
    let p = exp.p();
    let b = (p - n) / (p - 1.0);
    Ok(2f64.powf(-(p - n)) * (2f64.powf(b) - 1.0).powf(p - 1.0))
}
