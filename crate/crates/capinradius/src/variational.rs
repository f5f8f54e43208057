//! Radial finite-element oracles: capacities, capacitary potentials, shell
//! potentials and radial Rayleigh quotients on piecewise-linear profiles.
//!
//! These never consult the closed forms they are used to validate. All
//! discretizations are conforming (piecewise-linear radial profiles are
//! admissible test functions), so every discrete minimum is an upper bound
//! on the continuum infimum; L^q masses use the weighted-midpoint rule,
//! which under-estimates the convex integrand, keeping Rayleigh values
//! one-sided as well.

use crate::capacity::CapacityValue;
use crate::error::{CapError, Result};
use crate::exponents::{Exponents, Regime};
use crate::geometry::{AnnulusGeometry, ShellGeometry};
use crate::solver::{
    bb_minimize_ratio, ddphi_eps, dphi_eps, newton_minimize, phi_eps, MinModel, RatioModel,
    SolveOptions, SolveReport, Tridiag1D,
};
use crate::special::unit_ball_volume;
use serde::Serialize;

/// Piecewise-linear radial profile.
#[derive(Debug, Clone, Serialize)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialGrid {
    /// Linear interpolation of the profile at radius `rho`.
    pub fn eval(&self, rho: f64) -> f64 {
        let n = self.nodes.len();
        if rho <= self.nodes[0] {
            return self.values[0];
        }
        if rho >= self.nodes[n - 1] {
            return self.values[n - 1];
        }
        let idx = self
            .nodes
            .partition_point(|&x| x <= rho)
            .min(n - 1)
            .max(1);
        let (x0, x1) = (self.nodes[idx - 1], self.nodes[idx]);
        let t = (rho - x0) / (x1 - x0);
        self.values[idx - 1] * (1.0 - t) + self.values[idx] * t
    }
}

/// Geometric node placement on [r, R]; resolves the r ≪ R regime that a
/// uniform grid cannot.
pub fn geometric_nodes(r: f64, big_r: f64, n_cells: usize) -> Vec<f64> {
    let ratio = big_r / r;
    let mut nodes: Vec<f64> = (0..=n_cells)
        .map(|i| r * ratio.powf(i as f64 / n_cells as f64))
        .collect();
    nodes[0] = r;
    nodes[n_cells] = big_r;
    nodes
}

/// Piecewise-uniform nodes with the breakpoints represented exactly.
pub fn segmented_nodes(breaks: &[f64], n_cells: usize) -> Vec<f64> {
    let total: f64 = breaks.windows(2).map(|w| w[1] - w[0]).sum();
    let mut nodes = vec![breaks[0]];
    for w in breaks.windows(2) {
        let len = w[1] - w[0];
        let k = ((n_cells as f64 * len / total).round() as usize).max(4);
        for i in 1..=k {
            nodes.push(w[0] + len * i as f64 / k as f64);
        }
        *nodes.last_mut().unwrap() = w[1];
    }
    nodes
}

/// Σ α w_i φ(g_i) − Σ ℓ_j v_j over a radial grid; w_i = ω_N Δ(ρ^N) is the
/// exact p-energy weight of a cell, ℓ the exact moments of the source.
struct RadialProblem {
    nodes: Vec<f64>,
    p: f64,
    alpha: f64,
    w: Vec<f64>,
    lin: Vec<f64>,
    free: Vec<bool>,
    free_lo: usize,
    free_hi: usize,
}

impl RadialProblem {
    fn new(
        dim: u32,
        p: f64,
        alpha: f64,
        nodes: Vec<f64>,
        lin: Vec<f64>,
        pin_first: Option<f64>,
        pin_last: Option<f64>,
    ) -> (Self, Vec<f64>) {
        let wn = unit_ball_volume(dim);
        let n = nodes.len();
        let w: Vec<f64> = nodes
            .windows(2)
            .map(|c| wn * (c[1].powi(dim as i32) - c[0].powi(dim as i32)))
            .collect();
        let mut free = vec![true; n];
        let mut init = vec![0.0; n];
        if let Some(v0) = pin_first {
            free[0] = false;
            init[0] = v0;
        }
        if let Some(vl) = pin_last {
            free[n - 1] = false;
            init[n - 1] = vl;
        }
        let free_lo = usize::from(pin_first.is_some());
        let free_hi = n - usize::from(pin_last.is_some());
        (
            Self {
                nodes,
                p,
                alpha,
                w,
                lin,
                free,
                free_lo,
                free_hi,
            },
            init,
        )
    }

    fn h(&self, i: usize) -> f64 {
        self.nodes[i + 1] - self.nodes[i]
    }

    fn dirichlet_exact(&self, v: &[f64]) -> f64 {
        let mut e = 0.0;
        for i in 0..self.w.len() {
            let g = (v[i + 1] - v[i]) / self.h(i);
            e += self.w[i] * g.abs().powf(self.p);
        }
        e
    }

    fn linear_term(&self, v: &[f64]) -> f64 {
        self.lin.iter().zip(v.iter()).map(|(l, x)| l * x).sum()
    }
}

impl MinModel for RadialProblem {
    fn dof(&self) -> usize {
        self.nodes.len()
    }

    fn energy_grad(&self, v: &[f64], eps: f64, grad: &mut [f64]) -> f64 {
        grad.fill(0.0);
        let mut e = 0.0;
        for i in 0..self.w.len() {
            let h = self.h(i);
            let g = (v[i + 1] - v[i]) / h;
            e += self.w[i] * phi_eps(g, self.p, eps);
            let d = self.alpha * self.w[i] * dphi_eps(g, self.p, eps) / h;
            grad[i] -= d;
            grad[i + 1] += d;
        }
        for j in 0..v.len() {
            grad[j] -= self.lin[j];
        }
        self.alpha * e - self.linear_term(v)
    }

    fn energy(&self, v: &[f64], eps: f64) -> f64 {
        let mut e = 0.0;
        for i in 0..self.w.len() {
            let g = (v[i + 1] - v[i]) / self.h(i);
            e += self.w[i] * phi_eps(g, self.p, eps);
        }
        self.alpha * e - self.linear_term(v)
    }

    fn energy_exact(&self, v: &[f64]) -> f64 {
        self.alpha * self.dirichlet_exact(v) - self.linear_term(v)
    }

    fn free(&self) -> &[bool] {
        &self.free
    }

    fn eps_schedule(&self) -> &'static [f64] {
        if self.p == 2.0 {
            &crate::solver::EPS_SINGLE_STAGE
        } else {
            &crate::solver::EPS_SCHEDULE
        }
    }
}

impl Tridiag1D for RadialProblem {
    fn hessian(
        &self,
        v: &[f64],
        eps: f64,
        lo: usize,
        hi: usize,
        lower: &mut [f64],
        diag: &mut [f64],
        upper: &mut [f64],
    ) {
        lower.fill(0.0);
        diag.fill(0.0);
        upper.fill(0.0);
        for i in 0..self.w.len() {
            let h = self.h(i);
            let g = (v[i + 1] - v[i]) / h;
            let c = self.alpha * self.w[i] * ddphi_eps(g, self.p, eps) / (h * h);
            // couples nodes i and i+1
            if i >= lo && i < hi {
                diag[i - lo] += c;
            }
            if i + 1 >= lo && i + 1 < hi {
                diag[i + 1 - lo] += c;
            }
            if i >= lo && i + 1 < hi {
                upper[i - lo] -= c;
                lower[i + 1 - lo] -= c;
            }
        }
    }

    fn free_range(&self) -> (usize, usize) {
        (self.free_lo, self.free_hi)
    }
}

/// Exact moments of the source term 1_{[a,b]} against PL radial profiles:
/// nodal coefficients ℓ with Σ ℓ_j v_j = N ω_N ∫_a^b v(ρ) ρ^{N−1} dρ.
/// `a` and `b` must be grid nodes.
fn source_coefficients(dim: u32, nodes: &[f64], a: f64, b: f64) -> Vec<f64> {
    let wn = unit_ball_volume(dim);
    let nf = dim as f64;
    let mut lin = vec![0.0; nodes.len()];
    for i in 0..nodes.len() - 1 {
        let (x0, x1) = (nodes[i], nodes[i + 1]);
        if x0 < a - 1e-14 || x1 > b + 1e-14 {
            continue;
        }
        let h = x1 - x0;
        let m0 = wn * (x1.powi(dim as i32) - x0.powi(dim as i32));
        // m1 = N ω_N ∫ (ρ − x0) ρ^{N−1} dρ
        let m1 = nf * wn * (x1.powf(nf + 1.0) - x0.powf(nf + 1.0)) / (nf + 1.0)
            - x0 * m0;
        lin[i] += m0 - m1 / h;
        lin[i + 1] += m1 / h;
    }
    lin
}

/// Per-cell masses and weighted centroid fractions for the L^q term:
/// ∫ |v|^q ρ^{N−1} is approximated from below by m0 |v(ρ̄)|^q (Jensen).
fn mass_rule(dim: u32, nodes: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let wn = unit_ball_volume(dim);
    let nf = dim as f64;
    let mut m0 = Vec::with_capacity(nodes.len() - 1);
    let mut theta = Vec::with_capacity(nodes.len() - 1);
    for c in nodes.windows(2) {
        let (x0, x1) = (c[0], c[1]);
        let mass = wn * (x1.powi(dim as i32) - x0.powi(dim as i32));
        let m1 = nf * wn * (x1.powf(nf + 1.0) - x0.powf(nf + 1.0)) / (nf + 1.0) - x0 * mass;
        m0.push(mass);
        theta.push(m1 / (mass * (x1 - x0)));
    }
    (m0, theta)
}

enum Denominator {
    /// Σ m0_i |(1−θ_i) v_i + θ_i v_{i+1}|^q, to the power p/q in the ratio.
    Lq { q: f64, m0: Vec<f64>, theta: Vec<f64> },
    /// The (nonnegative) linear functional of the problem, to the power p.
    Linear,
}

struct RadialRatio {
    prob: RadialProblem,
    den: Denominator,
}

impl MinModel for RadialRatio {
    fn dof(&self) -> usize {
        self.prob.dof()
    }
    fn energy_grad(&self, v: &[f64], eps: f64, grad: &mut [f64]) -> f64 {
        // numerator only: the linear part of RadialProblem is the
        // denominator here, not a term of the energy
        grad.fill(0.0);
        let mut e = 0.0;
        for i in 0..self.prob.w.len() {
            let h = self.prob.h(i);
            let g = (v[i + 1] - v[i]) / h;
            e += self.prob.w[i] * phi_eps(g, self.prob.p, eps);
            let d = self.prob.w[i] * dphi_eps(g, self.prob.p, eps) / h;
            grad[i] -= d;
            grad[i + 1] += d;
        }
        e
    }
    fn energy(&self, v: &[f64], eps: f64) -> f64 {
        let mut e = 0.0;
        for i in 0..self.prob.w.len() {
            let g = (v[i + 1] - v[i]) / self.prob.h(i);
            e += self.prob.w[i] * phi_eps(g, self.prob.p, eps);
        }
        e
    }
    fn energy_exact(&self, v: &[f64]) -> f64 {
        self.prob.dirichlet_exact(v)
    }
    fn free(&self) -> &[bool] {
        &self.prob.free
    }
    fn eps_schedule(&self) -> &'static [f64] {
        MinModel::eps_schedule(&self.prob)
    }
}

impl RatioModel for RadialRatio {
    fn den(&self, v: &[f64]) -> f64 {
        match &self.den {
            Denominator::Lq { q, m0, theta } => {
                let mut b = 0.0;
                for i in 0..m0.len() {
                    let val = (1.0 - theta[i]) * v[i] + theta[i] * v[i + 1];
                    b += m0[i] * val.abs().powf(*q);
                }
                b
            }
            Denominator::Linear => self.prob.linear_term(v),
        }
    }

    fn den_grad(&self, v: &[f64], grad: &mut [f64]) {
        grad.fill(0.0);
        match &self.den {
            Denominator::Lq { q, m0, theta } => {
                for i in 0..m0.len() {
                    let val = (1.0 - theta[i]) * v[i] + theta[i] * v[i + 1];
                    if val != 0.0 {
                        let d = q * m0[i] * val.abs().powf(q - 2.0) * val;
                        grad[i] += d * (1.0 - theta[i]);
                        grad[i + 1] += d * theta[i];
                    }
                }
            }
            Denominator::Linear => grad.copy_from_slice(&self.prob.lin),
        }
    }

    fn power(&self) -> f64 {
        match &self.den {
            Denominator::Lq { q, .. } => self.prob.p / q,
            Denominator::Linear => self.prob.p,
        }
    }

    fn renormalize(&self, v: &mut [f64]) {
        let d = self.den(v);
        assert!(d > 0.0, "denominator must stay positive, got {d}");
        let scale = match &self.den {
            Denominator::Lq { q, .. } => d.powf(1.0 / q),
            Denominator::Linear => d,
        };
        for x in v.iter_mut() {
            *x /= scale;
        }
    }

    fn stop_window(&self) -> u64 {
        12
    }

    fn precondition(&self, v: &[f64], eps: f64, grad: &[f64], out: &mut [f64]) -> bool {
        // numerator-Hessian (stiffness) solve: mesh-independent descent
        let (lo, hi) = self.prob.free_range();
        let m = hi - lo;
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        self.prob.hessian(v, eps, lo, hi, &mut lower, &mut diag, &mut upper);
        let mut rhs = grad[lo..hi].to_vec();
        crate::solver::thomas_solve(&lower, &mut diag, &upper, &mut rhs);
        out.fill(0.0);
        out[lo..hi].copy_from_slice(&rhs);
        out.iter().all(|x| x.is_finite())
    }
}

fn require_p_above_one(exp: &Exponents, what: &str) -> Result<()> {
    if exp.p() <= 1.0 {
        return Err(CapError::RegimeMismatch(format!(
            "{what} requires p > 1 (the p = 1 problem is handled by closed forms), got {exp}"
        )));
    }
    Ok(())
}

/// Discrete relative p-capacity of B̄_r in B_R: minimizes the radial
/// Dirichlet p-energy over PL profiles with v(r) = 1, v(R) = 0. Converges
/// to cap_ball from above as the grid refines.
pub fn radial_capacity(
    exp: &Exponents,
    geom: &AnnulusGeometry,
    n_cells: usize,
    tol: f64,
) -> Result<(CapacityValue, RadialGrid, SolveReport)> {
    require_p_above_one(exp, "radial_capacity")?;
    if n_cells < 16 {
        return Err(CapError::InvalidConfig(format!(
            "n_cells must be >= 16, got {n_cells}"
        )));
    }
    let nodes = geometric_nodes(geom.r, geom.big_r, n_cells);
    let lin = vec![0.0; nodes.len()];
    let (prob, mut init) =
        RadialProblem::new(exp.dim(), exp.p(), 1.0, nodes, lin, Some(1.0), Some(0.0));
    // linear start between the boundary values
    let span = geom.big_r - geom.r;
    for (j, x) in prob.nodes.iter().enumerate() {
        if prob.free[j] {
            init[j] = 1.0 - (x - geom.r) / span;
        }
    }
    let opts = SolveOptions {
        tol,
        ..Default::default()
    };
    let (values, report) = newton_minimize(&prob, &init, &opts)?;

    // discrete maximum principle and monotonicity hold at the minimum
    for w in values.windows(2) {
        if w[1] > w[0] + 1e-7 {
            return Err(CapError::SolveFailed(
                "capacitary profile is not non-increasing".into(),
            ));
        }
    }
    if values.iter().any(|&x| !(-1e-9..=1.0 + 1e-9).contains(&x)) {
        return Err(CapError::SolveFailed(
            "capacitary profile violates the maximum principle".into(),
        ));
    }

    let cap = CapacityValue::numeric(report.energy, tol);
    Ok((
        cap,
        RadialGrid {
            nodes: prob.nodes,
            values,
        },
        report,
    ))
}

/// Discrete λ_{p,q}(B_radius): minimizes the radial Rayleigh quotient
/// ∫|v'|^p ρ^{N−1} / (∫|v|^q ρ^{N−1})^{p/q} over PL profiles vanishing at
/// the boundary. Upper bound on the continuum value, converging from above.
pub fn radial_lambda_ball(
    exp: &Exponents,
    q: f64,
    radius: f64,
    n_cells: usize,
    tol: f64,
) -> Result<(f64, RadialGrid, SolveReport)> {
    require_p_above_one(exp, "radial_lambda_ball")?;
    if !(q >= 1.0) {
        return Err(CapError::InvalidConfig(format!("need q >= 1, got {q}")));
    }
    if n_cells < 16 {
        return Err(CapError::InvalidConfig(format!(
            "n_cells must be >= 16, got {n_cells}"
        )));
    }
    let nodes: Vec<f64> = (0..=n_cells)
        .map(|i| radius * i as f64 / n_cells as f64)
        .collect();
    let (m0, theta) = mass_rule(exp.dim(), &nodes);
    let lin = vec![0.0; nodes.len()];
    let (prob, mut init) =
        RadialProblem::new(exp.dim(), exp.p(), 1.0, nodes, lin, None, Some(0.0));
    for (j, x) in prob.nodes.iter().enumerate() {
        if prob.free[j] {
            init[j] = 1.0 - x / radius; // positive principal bump
        }
    }
    let model = RadialRatio {
        prob,
        den: Denominator::Lq { q, m0, theta },
    };
    let opts = SolveOptions {
        tol,
        ..Default::default()
    };
    let (values, report) = bb_minimize_ratio(&model, &init, &opts)?;
    Ok((
        report.energy,
        RadialGrid {
            nodes: model.prob.nodes,
            values,
        },
        report,
    ))
}

/// λ_p(B₁) for the L^p normalization (q = p), the quantity entering the
/// lower-bound constant σ.
pub fn radial_lambda_p_ball(
    exp: &Exponents,
    n_cells: usize,
    tol: f64,
) -> Result<(f64, RadialGrid, SolveReport)> {
    if exp.regime() == Regime::PEq1 {
        let (value, _) = lambda_ball_p1_scan(exp.dim(), 1.0, 4096);
        let grid = RadialGrid {
            nodes: vec![0.0, 1.0],
            values: vec![1.0, 1.0],
        };
        let report = SolveReport {
            energy: value,
            iterations: 0,
            residual: 0.0,
            converged: true,
        };
        return Ok((value, grid, report));
    }
    radial_lambda_ball(exp, exp.p(), 1.0, n_cells, tol)
}

/// λ₁(B_radius) = h(B_radius) by direct perimeter/volume quotient
/// minimization over the concentric-ball family: min_t N/t = N/radius.
/// Returns (value, optimal radius).
pub fn lambda_ball_p1_scan(dim: u32, radius: f64, n_scan: usize) -> (f64, f64) {
    let wn = unit_ball_volume(dim);
    let nf = dim as f64;
    let mut best = f64::INFINITY;
    let mut best_t = 0.0;
    for k in 1..=n_scan {
        let t = radius * k as f64 / n_scan as f64;
        let ratio = nf * wn * t.powf(nf - 1.0) / (wn * t.powf(nf));
        if ratio < best {
            best = ratio;
            best_t = t;
        }
    }
    (best, best_t)
}

/// Result of the shell-potential solve: `energy` is ∫|∇V|^p computed via
/// the discrete Euler–Lagrange identity ∫|∇V|^p = ∫_S V, `dirichlet` is
/// the directly summed Σ w|g|^p (the two agree at the discrete minimum).
#[derive(Debug, Clone, Serialize)]
pub struct ShellSolve {
    pub energy: f64,
    pub dirichlet: f64,
    pub grid: RadialGrid,
    pub report: SolveReport,
}

/// Minimizes (1/p)∫_{B_R}|∇φ|^p − ∫_{S_{r1,r2}} φ over radial PL profiles
/// with φ(R) = 0 (free at the origin).
pub fn shell_potential_numeric(
    exp: &Exponents,
    shell: &ShellGeometry,
    n_cells: usize,
    tol: f64,
) -> Result<ShellSolve> {
    require_p_above_one(exp, "shell_potential_numeric")?;
    if exp.regime() == Regime::Superconformal {
        return Err(CapError::RegimeMismatch(format!(
            "shell potential needs 1 < p <= N, got {exp}"
        )));
    }
    let nodes = segmented_nodes(&[0.0, shell.r1, shell.r2, shell.big_r], n_cells);
    let lin = source_coefficients(exp.dim(), &nodes, shell.r1, shell.r2);
    let (prob, init) = RadialProblem::new(
        exp.dim(),
        exp.p(),
        1.0 / exp.p(),
        nodes,
        lin,
        None,
        Some(0.0),
    );
    let opts = SolveOptions {
        tol,
        ..Default::default()
    };
    let (values, mut report) = newton_minimize(&prob, &init, &opts)?;
    let energy = prob.linear_term(&values); // = ∫_S V = ∫|∇V|^p at the minimum
    let dirichlet = prob.dirichlet_exact(&values);
    report.energy = energy;
    Ok(ShellSolve {
        energy,
        dirichlet,
        grid: RadialGrid {
            nodes: prob.nodes,
            values,
        },
        report,
    })
}

/// Discrete maximization of (∫_S φ)^p / ∫|∇φ|^p over radial PL profiles
/// vanishing at R — the attainment check for the sharp shell constant.
/// Returns (attained ratio, maximizer profile, report).
pub fn shell_sup_ratio(
    exp: &Exponents,
    shell: &ShellGeometry,
    n_cells: usize,
    tol: f64,
) -> Result<(f64, RadialGrid, SolveReport)> {
    require_p_above_one(exp, "shell_sup_ratio")?;
    let nodes = segmented_nodes(&[0.0, shell.r1, shell.r2, shell.big_r], n_cells);
    let lin = source_coefficients(exp.dim(), &nodes, shell.r1, shell.r2);
    let (prob, mut init) = RadialProblem::new(exp.dim(), exp.p(), 1.0, nodes, lin, None, Some(0.0));
    for (j, x) in prob.nodes.iter().enumerate() {
        if prob.free[j] {
            init[j] = 1.0 - x / shell.big_r;
        }
    }
    let model = RadialRatio {
        prob,
        den: Denominator::Linear,
    };
    let opts = SolveOptions {
        tol,
        ..Default::default()
    };
    let (values, report) = bb_minimize_ratio(&model, &init, &opts)?;
    // report.energy = min A/L^p, the sup of the reciprocal ratio is 1/min
    let attained = 1.0 / report.energy;
    Ok((
        attained,
        RadialGrid {
            nodes: model.prob.nodes,
            values,
        },
        report,
    ))
}

/// λ_{p,q} of the symmetric interval (−w, w), reduced by evenness to [0, w]
/// with a natural condition at 0 (the 1D cross-section of the slab).
pub fn interval_lambda(
    p: f64,
    q: f64,
    half_width: f64,
    n_cells: usize,
    tol: f64,
) -> Result<(f64, RadialGrid, SolveReport)> {
    if !(p > 1.0) {
        return Err(CapError::RegimeMismatch(format!(
            "interval_lambda requires p > 1, got {p}"
        )));
    }
    let nodes: Vec<f64> = (0..=n_cells)
        .map(|i| half_width * i as f64 / n_cells as f64)
        .collect();
    let (m0, theta) = mass_rule(1, &nodes);
    let lin = vec![0.0; nodes.len()];
    let (prob, mut init) = RadialProblem::new(1, p, 1.0, nodes, lin, None, Some(0.0));
    for (j, x) in prob.nodes.iter().enumerate() {
        if prob.free[j] {
            init[j] = 1.0 - x / half_width;
        }
    }
    let model = RadialRatio {
        prob,
        den: Denominator::Lq { q, m0, theta },
    };
    let opts = SolveOptions {
        tol,
        ..Default::default()
    };
    let (values, report) = bb_minimize_ratio(&model, &init, &opts)?;
    Ok((
        report.energy,
        RadialGrid {
            nodes: model.prob.nodes,
            values,
        },
        report,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::cap_ball;
    use std::f64::consts::PI;

    fn exps(n: u32, p: f64) -> Exponents {
        Exponents::new(n, p).unwrap()
    }

    #[test]
    fn radial_capacity_matches_closed_form() {
        let e = exps(3, 2.0);
        let geom = AnnulusGeometry::new(1.0, 2.0).unwrap();
        let (cap, _, report) = radial_capacity(&e, &geom, 1024, 1e-10).unwrap();
        assert!(report.converged);
        let exact = 8.0 * PI;
        assert!(cap.value >= exact * (1.0 - 1e-9), "one-sided: {}", cap.value);
        assert!(
            (cap.value - exact).abs() <= 1e-4 * exact,
            "{} vs {exact}",
            cap.value
        );
    }

    #[test]
    fn radial_capacity_conformal_and_superconformal() {
        let e = exps(2, 2.0);
        let geom = AnnulusGeometry::new(1.0, 2.0).unwrap();
        let (cap, _, _) = radial_capacity(&e, &geom, 1024, 1e-10).unwrap();
        let exact = 2.0 * PI / 2f64.ln();
        assert!((cap.value - exact).abs() < 1e-4 * exact);

        let e = exps(2, 4.0);
        let (cap, _, _) = radial_capacity(&e, &geom, 1024, 1e-10).unwrap();
        let exact = cap_ball(&e, &geom).value;
        assert!((cap.value - exact).abs() < 1e-4 * exact);
    }

    #[test]
    fn radial_capacity_nested_grids_are_monotone() {
        let e = exps(3, 2.5);
        let geom = AnnulusGeometry::new(0.5, 3.0).unwrap();
        let exact = cap_ball(&e, &geom).value;
        let mut prev = f64::INFINITY;
        for n in [16, 64, 256, 1024] {
            let (cap, _, _) = radial_capacity(&e, &geom, n, 1e-11).unwrap();
            assert!(
                cap.value <= prev * (1.0 + 1e-9),
                "not monotone at n={n}: {} then {}",
                prev,
                cap.value
            );
            assert!(cap.value >= exact * (1.0 - 1e-9));
            prev = cap.value;
        }
    }

    #[test]
    fn capacity_profile_matches_exact_potential() {
        // N=3, p=2: v(ρ) = (ρ^{−1} − R^{−1})/(r^{−1} − R^{−1})
        let e = exps(3, 2.0);
        let (r, big_r) = (1.0, 2.0);
        let geom = AnnulusGeometry::new(r, big_r).unwrap();
        let (_, grid, _) = radial_capacity(&e, &geom, 1024, 1e-11).unwrap();
        let denom = 1.0 / r - 1.0 / big_r;
        let mut sup = 0.0f64;
        for (x, v) in grid.nodes.iter().zip(grid.values.iter()) {
            let exact = (1.0 / x - 1.0 / big_r) / denom;
            sup = sup.max((v - exact).abs());
        }
        assert!(sup < 1e-3, "sup-norm error {sup}");
    }

    #[test]
    fn small_inner_radius_is_resolved() {
        // geometric grid keeps the relative error through r << R
        let e = exps(3, 1.5);
        let geom = AnnulusGeometry::new(0.01, 9.0).unwrap();
        let (cap, _, _) = radial_capacity(&e, &geom, 2048, 1e-11).unwrap();
        let exact = cap_ball(&e, &geom).value;
        assert!(
            (cap.value - exact).abs() < 1e-4 * exact,
            "{} vs {exact}",
            cap.value
        );
    }

    #[test]
    fn lambda_disk_is_bessel_eigenvalue() {
        let e = exps(2, 2.0);
        let (lam, _, _) = radial_lambda_ball(&e, 2.0, 1.0, 2048, 1e-11).unwrap();
        let j01sq = 5.783185962946785;
        assert!(
            (lam - j01sq).abs() < 1e-3 * j01sq,
            "lambda {lam} vs {j01sq}"
        );
        assert!(lam >= j01sq * (1.0 - 1e-9), "conforming upper bound");
    }

    #[test]
    fn lambda_ball3_is_pi_squared() {
        let e = exps(3, 2.0);
        let (lam, _, _) = radial_lambda_ball(&e, 2.0, 1.0, 2048, 1e-11).unwrap();
        assert!((lam - PI * PI).abs() < 1e-3 * PI * PI, "{lam}");
    }

    #[test]
    fn lambda_scaling_in_radius() {
        let e = exps(2, 2.0);
        let (l1, _, _) = radial_lambda_ball(&e, 2.0, 1.0, 512, 1e-10).unwrap();
        let (l2, _, _) = radial_lambda_ball(&e, 2.0, 2.0, 512, 1e-10).unwrap();
        assert!(
            (l2 - l1 / 4.0).abs() < 1e-6 * l1,
            "lambda(B_2) = {l2} vs lambda(B_1)/4 = {}",
            l1 / 4.0
        );
    }

    #[test]
    fn lambda_p1_ball_scan_gives_dimension() {
        let (v, t) = lambda_ball_p1_scan(3, 1.0, 4096);
        assert!((v - 3.0).abs() < 1e-12);
        assert!((t - 1.0).abs() < 1e-12);
        let (v, _) = lambda_ball_p1_scan(2, 2.0, 4096);
        assert!((v - 1.0).abs() < 1e-12); // h(B_2) = N/r = 1
    }

    #[test]
    fn shell_minimizer_properties() {
        let e = exps(3, 2.0);
        let shell = ShellGeometry::new(0.5, 0.8, 2.0).unwrap();
        let sol = shell_potential_numeric(&e, &shell, 2048, 1e-11).unwrap();
        // energy identity at the discrete minimum
        assert!(
            (sol.energy - sol.dirichlet).abs() <= 1e-8 * sol.energy.abs(),
            "testate identity: {} vs {}",
            sol.energy,
            sol.dirichlet
        );
        // non-increasing profile
        for w in sol.grid.values.windows(2) {
            assert!(w[1] <= w[0] + 1e-8 * sol.grid.values[0].abs().max(1.0));
        }
        // constant on [0, r1] up to 1e−6 relative oscillation
        let plateau: Vec<f64> = sol
            .grid
            .nodes
            .iter()
            .zip(sol.grid.values.iter())
            .filter(|(x, _)| **x <= shell.r1 + 1e-14)
            .map(|(_, v)| *v)
            .collect();
        let vmax = plateau.iter().cloned().fold(f64::MIN, f64::max);
        let vmin = plateau.iter().cloned().fold(f64::MAX, f64::min);
        assert!(
            vmax - vmin <= 1e-6 * vmax.abs(),
            "plateau oscillation {} on value {}",
            vmax - vmin,
            vmax
        );
    }

    #[test]
    fn interval_lambda_is_quarter_pi_squared() {
        let (lam, _, _) = interval_lambda(2.0, 2.0, 1.0, 2048, 1e-11).unwrap();
        let exact = (PI / 2.0).powi(2);
        assert!((lam - exact).abs() < 1e-3 * exact, "{lam} vs {exact}");
        assert!(lam >= exact * (1.0 - 1e-9));
    }

    #[test]
    fn rejects_p_equal_one_and_tiny_grids() {
        let e = exps(3, 1.0);
        let geom = AnnulusGeometry::new(1.0, 2.0).unwrap();
        assert!(radial_capacity(&e, &geom, 64, 1e-8).is_err());
        let e = exps(3, 2.0);
        assert!(radial_capacity(&e, &geom, 8, 1e-8).is_err());
    }
}
