//! Adaptive Gauss–Kronrod quadrature (15-point rule with bisection).
//!
//! The shell integrand vanishes like (ρ−r1)^{p/(p−1)} at the left endpoint
//! but has no singularity, so plain adaptivity on smooth panels suffices.

use crate::error::{CapError, Result};

// 15-point Kronrod abscissae on [0,1] (positive half) and weights, with the
// embedded 7-point Gauss weights. Standard QUADPACK values.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One GK15 panel: returns (kronrod value, |kronrod − gauss| error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
}

/// Integrate `f` over [a, b] to the requested relative tolerance.
/// Deterministic: panels are processed worst-error-first with a stable
/// tie-break on the interval bounds.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            abs_error: 0.0,
            panels: 0,
        });
    }
    assert!(a < b, "integrate: need a <= b, got [{a}, {b}]");
    const MAX_PANELS: usize = 4000;

    let (v, e) = gk15(&f, a, b);
    let mut panels: Vec<(f64, f64, f64, f64)> = vec![(a, b, v, e)]; // (a, b, value, err)

    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        let target = rel_tol * total.abs().max(f64::MIN_POSITIVE);
        if err <= target || err <= 1e-300 {
            return Ok(Quadrature {
                value: total,
                abs_error: err,
                panels: panels.len(),
            });
        }
        if panels.len() >= MAX_PANELS {
            return Err(CapError::QuadratureFailed {
                estimate: total,
                error: err,
                target,
            });
        }
        // split the worst panel
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| {
                (x.1 .3, x.1 .0)
                    .partial_cmp(&(y.1 .3, y.1 .0))
                    .expect("non-comparable quadrature errors")
            })
            .expect("no panels");
        let (pa, pb, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        let (v1, e1) = gk15(&f, pa, mid);
        let (v2, e2) = gk15(&f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((q.value - 8.0).abs() < 1e-13);
    }

    #[test]
    fn cos_cubed_matches_antiderivative() {
        // ∫ cos³ t dt = sin t − sin³ t / 3
        let anti = |t: f64| t.sin() - t.sin().powi(3) / 3.0;
        let q = integrate(|t| t.cos().powi(3), PI / 6.0, PI / 2.0, 1e-12).unwrap();
        let exact = anti(PI / 2.0) - anti(PI / 6.0);
        assert!((q.value - exact).abs() < 1e-13, "{} vs {exact}", q.value);
    }

    #[test]
    fn oscillatory_integral_converges() {
        let q = integrate(|x| (50.0 * x).sin().powi(2), 0.0, 1.0, 1e-10).unwrap();
        let exact = 0.5 - (100f64.sin()) / 200.0;
        assert!((q.value - exact).abs() < 1e-9);
        assert!(q.panels > 1);
    }

    #[test]
    fn vanishing_endpoint_power() {
        // (x − 1)^{3/2} on [1, 2]: C¹ but not C², like the shell integrand
        let q = integrate(|x| (x - 1.0f64).powf(1.5), 1.0, 2.0, 1e-12).unwrap();
        assert!((q.value - 0.4).abs() < 1e-11);
    }
}
