//! Explicit constants of the two-sided estimate: the capacity-comparison
//! factor, the lower constant σ_{N,p}, the cut-off parameter ε₀ in its
//! three regimes, the upper constant C_{N,p,γ}, the γ↗1 asymptotics and
//! the Poincaré–Sobolev scaling exponent.

use crate::capacity::ln_cap_ball;
use crate::error::{CapError, Result};
use crate::exponents::{Exponents, Regime};
use crate::geometry::AnnulusGeometry;
use crate::special::unit_ball_volume;
use crate::variational::{lambda_ball_p1_scan, radial_lambda_p_ball};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Mutex;

/// Inputs of the constant chain. The Maz'ya–Poincaré constant 𝒞 is an
/// external input (default 1.0): σ is reported "up to 𝒞^p".
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundConfig {
    pub mazya_poincare_c: f64,
    pub lambda_p_b1: f64,
    pub gamma: f64,
    /// true while `mazya_poincare_c` is the 1.0 placeholder rather than a
    /// user-supplied value
    pub sigma_up_to_external_constant: bool,
}

impl BoundConfig {
    pub fn new(mazya_poincare_c: f64, lambda_p_b1: f64, gamma: f64) -> Result<Self> {
        if !(mazya_poincare_c > 0.0) || !(lambda_p_b1 > 0.0) {
            return Err(CapError::InvalidConfig(format!(
                "need positive constants, got C={mazya_poincare_c}, lambda={lambda_p_b1}"
            )));
        }
        check_gamma(gamma)?;
        Ok(Self {
            mazya_poincare_c,
            lambda_p_b1,
            gamma,
            sigma_up_to_external_constant: false,
        })
    }

    /// Default config: 𝒞 = 1 (flagged as external), λ_p(B₁) from the
    /// cached numeric oracle.
    pub fn with_computed_lambda(exp: &Exponents, gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self {
            mazya_poincare_c: 1.0,
            lambda_p_b1: lambda_p_b1_cached(exp)?,
            gamma,
            sigma_up_to_external_constant: true,
        })
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(CapError::InvalidConfig(format!(
            "gamma must lie in (0,1), got {gamma}"
        )));
    }
    Ok(())
}

fn require_main_theorem_range(exp: &Exponents, what: &str) -> Result<()> {
    if exp.regime() == Regime::Superconformal {
        return Err(CapError::RegimeMismatch(format!(
            "{what} needs 1 <= p <= N, got {exp}"
        )));
    }
    Ok(())
}

/// The full constant pair for a given (N, p, γ).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TwoSidedConstants {
    pub sigma: f64,
    pub c_upper: f64,
    pub eps0: f64,
}

static LAMBDA_CACHE: Mutex<BTreeMap<(u32, u64), f64>> = Mutex::new(BTreeMap::new());

/// λ_p(B₁) from the radial numeric oracle, memoized per (N, p).
pub fn lambda_p_b1_cached(exp: &Exponents) -> Result<f64> {
    let key = (exp.dim(), exp.p().to_bits());
    if let Some(v) = LAMBDA_CACHE.lock().unwrap().get(&key) {
        return Ok(*v);
    }
    let value = if exp.regime() == Regime::PEq1 {
        lambda_ball_p1_scan(exp.dim(), 1.0, 4096).0
    } else {
        radial_lambda_p_ball(exp, 2048, 1e-10)?.0
    };
    LAMBDA_CACHE.lock().unwrap().insert(key, value);
    Ok(value)
}

/// Factor bounding cap(Σ;B_r)/cap(Σ;B_R) for Σ ⋐ B_r ⊂ B_R with
/// d = dist(Σ, ∂B_r): (λ_p(B₁)^{−1/p} R/d + 1)^p.
pub fn capacity_comparison_factor(
    exp: &Exponents,
    big_r: f64,
    d: f64,
    lambda_p_b1: f64,
) -> Result<f64> {
    if !(d > 0.0) {
        return Err(CapError::InvalidGeometry(format!(
            "need dist(Sigma, boundary) > 0, got {d}"
        )));
    }
    if !(big_r > 0.0) || !(lambda_p_b1 > 0.0) {
        return Err(CapError::InvalidConfig(format!(
            "need R > 0 and lambda > 0, got R={big_r}, lambda={lambda_p_b1}"
        )));
    }
    let p = exp.p();
    Ok((lambda_p_b1.powf(-1.0 / p) * big_r / d + 1.0).powf(p))
}

/// Lower constant σ_{N,p} = 𝒞^p cap_p(B̄₁;B₂) / (2√N λ_p(B₁)^{−1/p} + 1).
pub fn sigma_lower_constant(exp: &Exponents, cfg: &BoundConfig) -> Result<f64> {
    require_main_theorem_range(exp, "sigma_lower_constant")?;
    let p = exp.p();
    let cap12 = ln_cap_ball(exp, &AnnulusGeometry { r: 1.0, big_r: 2.0 }).exp();
    let denom = 2.0 * exp.dim_f().sqrt() / cfg.lambda_p_b1.powf(1.0 / p) + 1.0;
    Ok(cfg.mazya_poincare_c.powf(p) * cap12 / denom)
}

/// Regime-dispatched cut-off parameter ε₀ of the upper-bound proof:
///   1<p<N:  min{ 1/(4(N−1)),
///                1/2 − [(2^{(N−p)/(p−1)}−1)((1+γ^{1/p})/(2γ^{1/p}))^{p/(p−1)} + 1]^{−(p−1)/(N−p)} }
///   p=N:    min{ (1 − 2^{1−α})/2, 1/(4(N−1)) },  α = ((1+γ^{1/N})/(2γ^{1/N}))^{N/(N−1)}
///   p=1:    min{ 1 − (2γ/(1+γ))^{1/(N−1)}, 1/(2N) }.
/// The conformal branch carries the extra 1/2 because the selection
/// inequality is posed at the inner radius (1−2ε)r; without it the
/// inequality fails for γ near 1 (checked by back-substitution).
pub fn epsilon0(exp: &Exponents, gamma: f64) -> Result<f64> {
    require_main_theorem_range(exp, "epsilon0")?;
    check_gamma(gamma)?;
    let n = exp.dim_f();
    let p = exp.p();
    let eps = match exp.regime() {
        Regime::PEq1 => {
            let a = (2.0 * gamma / (1.0 + gamma)).powf(1.0 / (n - 1.0));
            (1.0 - a).min(1.0 / (2.0 * n))
        }
        Regime::Subconformal => {
            let a = (n - p) / (p - 1.0);
            let g = gamma.powf(1.0 / p);
            let t = ((1.0 + g) / (2.0 * g)).powf(p / (p - 1.0));
            let bracket = (2f64.powf(a) - 1.0) * t + 1.0;
            (0.5 - bracket.powf(-1.0 / a)).min(1.0 / (4.0 * (n - 1.0)))
        }
        Regime::Conformal => {
            let g = gamma.powf(1.0 / n);
            let alpha = ((1.0 + g) / (2.0 * g)).powf(n / (n - 1.0));
            (0.5 * (1.0 - 2f64.powf(1.0 - alpha))).min(1.0 / (4.0 * (n - 1.0)))
        }
        Regime::Superconformal => unreachable!(),
    };
    debug_assert!(eps > 0.0 && eps <= 0.5);
    Ok(eps)
}

/// Margin of the ε₀ selection inequality (nonnegative iff the inequality
/// holds). For p > 1 this is
///   1 − γ^{1/p} (cap(B̄₁;B₂)/cap(B̄_{1−2ε};B₂))^{1/p} − (1−γ^{1/p})/2,
/// scale-free in r; for p = 1 the analogous inequality with the radius
/// 1 − ε and plain γ.
pub fn selection_inequality_margin(exp: &Exponents, gamma: f64, eps: f64) -> Result<f64> {
    require_main_theorem_range(exp, "selection_inequality_margin")?;
    check_gamma(gamma)?;
    if !(eps > 0.0 && eps < 0.5) {
        return Err(CapError::InvalidConfig(format!(
            "need 0 < eps < 1/2, got {eps}"
        )));
    }
    let p = exp.p();
    if exp.regime() == Regime::PEq1 {
        let ratio = (1.0 - eps).powf(exp.dim_f() - 1.0).recip();
        return Ok(1.0 - gamma * ratio - (1.0 - gamma) / 2.0);
    }
    let ln_full = ln_cap_ball(exp, &AnnulusGeometry { r: 1.0, big_r: 2.0 });
    let ln_inner = ln_cap_ball(
        exp,
        &AnnulusGeometry {
            r: 1.0 - 2.0 * eps,
            big_r: 2.0,
        },
    );
    let g = gamma.powf(1.0 / p);
    Ok(1.0 - g * ((ln_full - ln_inner) / p).exp() - (1.0 - g) / 2.0)
}

/// Upper constant of the Main Theorem:
///   p=1:     C = 4N(1+γ)/(1−γ)
///   1<p≤N:  C = (2/(1−γ^{1/p}))^p 2^p [ε₀^{−p} + γ ε₀^{−1} cap_p(B̄₁;B₂)/(N ω_N)].
pub fn upper_constant(exp: &Exponents, gamma: f64) -> Result<f64> {
    require_main_theorem_range(exp, "upper_constant")?;
    check_gamma(gamma)?;
    let n = exp.dim_f();
    let p = exp.p();
    if exp.regime() == Regime::PEq1 {
        return Ok(4.0 * n * (1.0 + gamma) / (1.0 - gamma));
    }
    let eps0 = epsilon0(exp, gamma)?;
    let cap_ratio = (ln_cap_ball(exp, &AnnulusGeometry { r: 1.0, big_r: 2.0 })
        - (n * unit_ball_volume(exp.dim())).ln())
    .exp();
    let g = gamma.powf(1.0 / p);
    Ok((2.0 / (1.0 - g)).powf(p)
        * 2f64.powf(p)
        * (eps0.powf(-p) + gamma * cap_ratio / eps0))
}

/// σ, C and ε₀ assembled for one (N, p, γ); checks the sanity relation
/// σγ < C.
pub fn two_sided_constants(exp: &Exponents, cfg: &BoundConfig) -> Result<TwoSidedConstants> {
    let sigma = sigma_lower_constant(exp, cfg)?;
    let c_upper = upper_constant(exp, cfg.gamma)?;
    let eps0 = if exp.regime() == Regime::PEq1 {
        epsilon0(exp, cfg.gamma)?
    } else {
        epsilon0(exp, cfg.gamma)?
    };
    if sigma * cfg.gamma >= c_upper {
        return Err(CapError::InvalidConfig(format!(
            "inconsistent constants: sigma*gamma = {} >= C = {c_upper}",
            sigma * cfg.gamma
        )));
    }
    Ok(TwoSidedConstants {
        sigma,
        c_upper,
        eps0,
    })
}

/// Slope of ε₀ in (1−γ) as γ ↗ 1:
///   1<p<N: (2^{(N−p)/(p−1)}−1) / ((N−p)·2·2^{(N−1)/(p−1)}),
///   p=N:   log 2 / (4(N−1))  (half the nominal slope, see `epsilon0`),
///   p=1:   1/(2(N−1)).
pub fn epsilon0_gamma1_slope(exp: &Exponents) -> Result<f64> {
    require_main_theorem_range(exp, "epsilon0_gamma1_slope")?;
    let n = exp.dim_f();
    let p = exp.p();
    Ok(match exp.regime() {
        Regime::PEq1 => 0.5 / (n - 1.0),
        Regime::Subconformal => {
            let a = (n - p) / (p - 1.0);
            (2f64.powf(a) - 1.0) / ((n - p) * 2.0 * 2f64.powf((n - 1.0) / (p - 1.0)))
        }
        Regime::Conformal => 2f64.ln() / (4.0 * (n - 1.0)),
        Regime::Superconformal => unreachable!(),
    })
}

/// Blow-up diagnostics of C_{N,p,γ} as γ ↗ 1: the normalized sequence
/// (1−γ)^{2p} C (or (1−γ) C for p = 1) over γ = 1 − 10^{−k}.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticsReport {
    pub gammas: Vec<f64>,
    pub scaled: Vec<f64>,
    pub consecutive_ratios: Vec<f64>,
    pub bounded: bool,
    /// last consecutive ratio within 5% of 1
    pub stabilized: bool,
}

pub fn asymptotics_check(exp: &Exponents) -> Result<AsymptoticsReport> {
    require_main_theorem_range(exp, "asymptotics_check")?;
    let p = exp.p();
    let power = if exp.regime() == Regime::PEq1 {
        1.0
    } else {
        2.0 * p
    };
    let gammas: Vec<f64> = (1..=6).map(|k| 1.0 - 10f64.powi(-k)).collect();
    let mut scaled = Vec::with_capacity(gammas.len());
    for &g in &gammas {
        let c = upper_constant(exp, g)?;
        scaled.push((1.0 - g).powf(power) * c);
    }
    let consecutive_ratios: Vec<f64> = scaled.windows(2).map(|w| w[1] / w[0]).collect();
    let bounded = scaled
        .iter()
        .all(|s| s.is_finite() && *s > 0.0 && *s < 1e30);
    let stabilized = consecutive_ratios
        .last()
        .map(|r| (r - 1.0).abs() <= 0.05)
        .unwrap_or(false);
    Ok(AsymptoticsReport {
        gammas,
        scaled,
        consecutive_ratios,
        bounded,
        stabilized,
    })
}

/// Scaling exponent of the λ_{p,q} two-sided estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalingExponent {
    pub beta: f64,
    /// the lower bound requires q >= p
    pub lower_bound_applies: bool,
}

/// Whether q is subcritical for (N, p): q < Np/(N−p) when p < N, any
/// finite q when p = N.
pub fn is_subcritical(exp: &Exponents, q: f64) -> bool {
    if !(q >= 1.0) || !q.is_finite() {
        return false;
    }
    match exp.regime() {
        Regime::Conformal => true,
        Regime::Superconformal => false,
        _ => {
            let n = exp.dim_f();
            let p = exp.p();
            q < n * p / (n - p)
        }
    }
}

/// β = p − N + Np/q for subcritical q.
pub fn sobolev_scaling_exponent(exp: &Exponents, q: f64) -> Result<ScalingExponent> {
    require_main_theorem_range(exp, "sobolev_scaling_exponent")?;
    if !is_subcritical(exp, q) {
        return Err(CapError::InvalidConfig(format!(
            "q = {q} is not subcritical for {exp}"
        )));
    }
    let n = exp.dim_f();
    let p = exp.p();
    Ok(ScalingExponent {
        beta: p - n + n * p / q,
        lower_bound_applies: q >= p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn exps(n: u32, p: f64) -> Exponents {
        Exponents::new(n, p).unwrap()
    }

    #[test]
    fn epsilon0_reference_values() {
        // N=3, p=2, γ=1/2: min{1/8, 1/2 − (1·1.45711+1)^{−1}} = 0.0930…
        let e0 = epsilon0(&exps(3, 2.0), 0.5).unwrap();
        let g = 0.5f64.sqrt();
        let t = ((1.0 + g) / (2.0 * g)).powi(2);
        let expected = (0.5 - 1.0 / (t + 1.0)).min(0.125);
        assert!((e0 - expected).abs() < 1e-15);
        assert!((e0 - 0.09302).abs() < 5e-6, "eps0 = {e0}");

        // N=2, p=1, γ=1/2: min{1 − 2/3, 1/4} = 1/4
        let e0 = epsilon0(&exps(2, 1.0), 0.5).unwrap();
        assert!((e0 - 0.25).abs() < 1e-15);

        // conformal branch formula (with the selection-inequality 1/2)
        let e0 = epsilon0(&exps(2, 2.0), 0.5).unwrap();
        let alpha = ((1.0 + g) / (2.0 * g)).powi(2);
        let expected = (0.5 * (1.0 - 2f64.powf(1.0 - alpha))).min(0.25);
        assert!((e0 - expected).abs() < 1e-15);
    }

    #[test]
    fn epsilon0_contract_and_selection_inequality() {
        for (n, p, gamma) in [
            (3u32, 2.0, 0.5),
            (2, 2.0, 0.9),
            (4, 3.0, 0.99),
            (5, 1.0, 0.3),
            (3, 3.0, 0.7),
            (2, 1.2, 0.05),
            (4, 4.0, 0.999),
        ] {
            let e = exps(n, p);
            let e0 = epsilon0(&e, gamma).unwrap();
            assert!(e0 > 0.0 && e0 <= 0.5, "contract violated: {e0}");
            let margin = selection_inequality_margin(&e, gamma, e0).unwrap();
            assert!(
                margin >= -1e-12,
                "selection inequality fails at N={n}, p={p}, gamma={gamma}: {margin}"
            );
        }
    }

    #[test]
    fn epsilon0_slope_as_gamma_to_one() {
        for (n, p) in [(3u32, 2.0), (4, 3.0), (2, 2.0), (3, 3.0), (5, 1.0)] {
            let e = exps(n, p);
            let slope = epsilon0_gamma1_slope(&e).unwrap();
            let delta = 1e-4;
            let e0 = epsilon0(&e, 1.0 - delta).unwrap();
            assert!(
                (e0 / delta - slope).abs() <= 0.01 * slope,
                "N={n}, p={p}: eps0/(1-gamma) = {} vs slope {slope}",
                e0 / delta
            );
        }
    }

    #[test]
    fn upper_constant_reference_values() {
        // p=1: C = 4N(1+γ)/(1−γ); N=2, γ=1/2 → 24
        let c = upper_constant(&exps(2, 1.0), 0.5).unwrap();
        assert!((c - 24.0).abs() < 1e-12);

        // N=3, p=2, γ=1/2 ≈ 2.36e4 (with ε₀ = 0.09302, cap/NωN = 2)
        let c = upper_constant(&exps(3, 2.0), 0.5).unwrap();
        let e0 = epsilon0(&exps(3, 2.0), 0.5).unwrap();
        let g = 0.5f64.sqrt();
        let expected = (2.0 / (1.0 - g)).powi(2) * 4.0 * (e0.powi(-2) + 0.5 * 2.0 / e0);
        assert!((c - expected).abs() < 1e-9 * expected);
        assert!((c / 2.36e4 - 1.0).abs() < 0.01, "C = {c}");
    }

    #[test]
    fn upper_constant_presimplification_identity() {
        // C/C_presimp = ((1−ε₀)^N − (1−2ε₀)^N)/(N ε₀ / 2) exactly, where
        // C_presimp keeps the exact shell volume of the proof
        for (n, p, gamma) in [(3u32, 2.0, 0.5), (2, 2.0, 0.8), (4, 3.0, 0.3)] {
            let e = exps(n, p);
            let nf = n as f64;
            let c = upper_constant(&e, gamma).unwrap();
            let e0 = epsilon0(&e, gamma).unwrap();
            let g = gamma.powf(1.0 / p);
            let wn = unit_ball_volume(n);
            let cap12 = ln_cap_ball(&e, &AnnulusGeometry { r: 1.0, big_r: 2.0 }).exp();
            let dvol = (1.0 - e0).powf(nf) - (1.0 - 2.0 * e0).powf(nf);
            let c_presimp = 2f64.powf(p - 1.0)
                * (2.0 / (1.0 - g)).powf(p)
                * (1.0 / (wn * dvol))
                * (nf * wn / e0.powf(p - 1.0) + gamma * cap12);
            let ratio = c / c_presimp;
            let expected = dvol / (nf * e0 / 2.0);
            assert!(
                (ratio - expected).abs() < 1e-10 * expected,
                "N={n}, p={p}: ratio {ratio} vs {expected}"
            );
            assert!(c >= c_presimp, "simplified constant must dominate");
        }
    }

    #[test]
    fn upper_constant_monotone_in_gamma() {
        for (n, p) in [(3u32, 2.0), (2, 2.0), (4, 1.0)] {
            let e = exps(n, p);
            let mut prev = 0.0;
            for k in 1..=9 {
                let gamma = k as f64 / 10.0;
                let c = upper_constant(&e, gamma).unwrap();
                assert!(c > prev, "N={n}, p={p}: not increasing at gamma={gamma}");
                prev = c;
            }
        }
    }

    #[test]
    fn sigma_reference_value() {
        // 𝒞=1, N=3, p=2, λ₂(B₁)=π²: σ = 8π/(2√3/π + 1) = 11.9529…
        let cfg = BoundConfig::new(1.0, PI * PI, 0.5).unwrap();
        let sigma = sigma_lower_constant(&exps(3, 2.0), &cfg).unwrap();
        let expected = 8.0 * PI / (2.0 * 3f64.sqrt() / PI + 1.0);
        assert!((sigma - expected).abs() < 1e-12);
        assert!((sigma - 11.9529).abs() < 1e-4, "sigma = {sigma}");

        // homogeneity in 𝒞: doubling it multiplies σ by 2^p
        let cfg2 = BoundConfig::new(2.0, PI * PI, 0.5).unwrap();
        let sigma2 = sigma_lower_constant(&exps(3, 2.0), &cfg2).unwrap();
        assert!((sigma2 - 4.0 * sigma).abs() < 1e-10 * sigma2);
        assert!(sigma > 0.0);
    }

    #[test]
    fn comparison_factor_values_and_sanity() {
        let e = exps(2, 2.0);
        // large d collapses the factor to 1
        let f = capacity_comparison_factor(&e, 2.0, 1e9, 5.7832).unwrap();
        assert!((f - 1.0).abs() < 1e-8);
        // N=2, p=2, R=2, d=1, λ = j₀,₁²: (2/j₀,₁ + 1)² = 3.3550…
        let j01 = 2.404825557695773f64;
        let f = capacity_comparison_factor(&e, 2.0, 1.0, j01 * j01).unwrap();
        assert!((f - (2.0 / j01 + 1.0).powi(2)).abs() < 1e-12);
        assert!((f - 3.355).abs() < 1e-3, "factor = {f}");
        assert!(capacity_comparison_factor(&e, 2.0, 0.0, 1.0).is_err());

        // concentric-ball sanity: cap(r,R')/cap(r,R) ≤ factor(R, d=R'−r)
        let lam = PI * PI;
        let e3 = exps(3, 2.0);
        for (r, rp, big_r) in [(0.5, 1.0, 2.0), (0.3, 0.8, 5.0), (1.0, 1.5, 3.0)] {
            let c_small = ln_cap_ball(&e3, &AnnulusGeometry { r, big_r: rp }).exp();
            let c_big = ln_cap_ball(&e3, &AnnulusGeometry { r, big_r }).exp();
            let f = capacity_comparison_factor(&e3, big_r, rp - r, lam).unwrap();
            assert!(
                c_small / c_big <= f,
                "ratio {} vs factor {f}",
                c_small / c_big
            );
        }
    }

    #[test]
    fn asymptotics_p1_exact_and_general_stabilization() {
        // p = 1: (1−γ)C = 4N(1+γ) exactly, increasing, limit 8N
        let e = exps(3, 1.0);
        let rep = asymptotics_check(&e).unwrap();
        for (g, s) in rep.gammas.iter().zip(rep.scaled.iter()) {
            assert!((s - 12.0 * (1.0 + g)).abs() < 1e-9);
        }
        assert!(rep.scaled.windows(2).all(|w| w[1] > w[0]));
        assert!((rep.scaled.last().unwrap() - 24.0).abs() < 1e-4);
        assert!(rep.bounded && rep.stabilized);

        for (n, p) in [(3u32, 2.0), (2, 2.0), (4, 3.0)] {
            let rep = asymptotics_check(&exps(n, p)).unwrap();
            assert!(rep.bounded, "(N,p)=({n},{p}) unbounded: {:?}", rep.scaled);
            assert!(
                rep.stabilized,
                "(N,p)=({n},{p}) ratios {:?}",
                rep.consecutive_ratios
            );
        }
    }

    #[test]
    fn scaling_exponent_values() {
        let e = exps(3, 2.0);
        let s = sobolev_scaling_exponent(&e, 2.0).unwrap();
        assert_eq!(s.beta, 2.0);
        assert!(s.lower_bound_applies);
        let s = sobolev_scaling_exponent(&e, 3.0).unwrap();
        assert!((s.beta - 1.0).abs() < 1e-15);
        // q → p* = 6 sends β → 0
        let s = sobolev_scaling_exponent(&e, 6.0 - 1e-9).unwrap();
        assert!(s.beta.abs() < 1e-8);
        assert!(sobolev_scaling_exponent(&e, 6.0).is_err());
        assert!(sobolev_scaling_exponent(&e, 0.5).is_err());
        // conformal: any finite q
        let s = sobolev_scaling_exponent(&exps(2, 2.0), 40.0).unwrap();
        assert!((s.beta - 0.1).abs() < 1e-12);
        // q < p: upper only
        let s = sobolev_scaling_exponent(&e, 1.0).unwrap();
        assert!(!s.lower_bound_applies);
    }

    #[test]
    fn two_sided_constants_sanity() {
        let e = exps(3, 2.0);
        let cfg = BoundConfig::new(1.0, PI * PI, 0.5).unwrap();
        let tsc = two_sided_constants(&e, &cfg).unwrap();
        assert!(tsc.sigma * 0.5 < tsc.c_upper);
        assert!(tsc.eps0 > 0.0 && tsc.eps0 <= 0.5);
    }
}
