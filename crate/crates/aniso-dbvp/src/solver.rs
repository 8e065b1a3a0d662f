//! Critical-point computation: damped Newton on the Euler–Lagrange residual
//! with analytic tridiagonal Jacobian, energy descent as a globalizer, a
//! barrier-penalized variant for the Φ-shell localization, λ-sweeps, and
//! multi-start exploration.
//!
//! # Extreme weights
//!
//! Instances with weights like `w = e^{147}` make some bonds numerically
//! rigid: the flux response to a one-ulp change of `Δu` already exceeds any
//! sensible residual tolerance, so no f64 vector can carry the tiny nonzero
//! flux the exact solution wants there. Such bonds are detected from the
//! iterate's scale and constrained to `Δu = 0` by merging their endpoints
//! into supernodes; internal fluxes then cancel exactly in the summed
//! residual and Newton runs on the reduced (still tridiagonal) system. On
//! ordinary instances every supernode is a single node and the path is plain
//! damped Newton. The reported residual is always the true nodal residual of
//! the returned vector.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::certify::LambdaInterval;
use crate::functional::{
    big_phi, energy_value, grad_i, inf_norm, p_power, p_power_deriv, residual,
};
use crate::problem::{build_test_function, GridFunction, ProblemError, ProblemInstance};

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Convergence tolerance on the residual sup-norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative step for finite-difference `∂f/∂x` columns.
    pub fd_step: f64,
    pub armijo_c: f64,
    pub backtrack: f64,
    /// Penalty escalation rounds for the shell-localized solve.
    pub max_penalty_rounds: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-10,
            max_iter: 200,
            fd_step: 1e-7,
            armijo_c: 1e-4,
            backtrack: 0.5,
            max_penalty_rounds: 12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignClass {
    Zero,
    Positive,
    Nonnegative,
    Negative,
    Nonpositive,
    SignChanging,
}

pub fn classify_sign(u: &GridFunction) -> SignClass {
    if u.sup_norm() <= 1e-12 {
        return SignClass::Zero;
    }
    let interior = u.interior();
    let min = interior.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = interior.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min > 0.0 {
        SignClass::Positive
    } else if min >= 0.0 {
        SignClass::Nonnegative
    } else if max < 0.0 {
        SignClass::Negative
    } else if max <= 0.0 {
        SignClass::Nonpositive
    } else {
        SignClass::SignChanging
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct Localization {
    pub r1: f64,
    pub r2: f64,
    pub inside: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveResult {
    pub u: Vec<f64>,
    pub i_value: f64,
    pub residual_inf: f64,
    pub grad_inf: f64,
    pub phi_value: f64,
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub localization: Option<Localization>,
    pub sign_class: SignClass,
    pub norm_minus: f64,
    pub sup_norm: f64,
}

impl SolveResult {
    pub fn grid(&self) -> GridFunction {
        GridFunction::new(self.u.clone()).expect("solve results hold valid grid functions")
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("no-convergence after {iterations} iterations (residual_inf={residual_inf:e})")]
    NoConvergence {
        iterations: usize,
        residual_inf: f64,
        final_iterate: Box<SolveResult>,
        residual_history: Vec<f64>,
    },
    #[error("bad-shell: Φ(v̄(d))={phi_vbar:e} is not strictly inside ({r1:e}, {r2:e})")]
    BadShell { phi_vbar: f64, r1: f64, r2: f64 },
    #[error("left-shell: no penalty level kept the iterate inside ({r1:e}, {r2:e})")]
    LeftShell { r1: f64, r2: f64 },
    #[error("empty-interval: ({lower:e}, {upper:?}) contains no λ")]
    EmptyInterval { lower: f64, upper: Option<f64> },
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// Contiguous runs of interior nodes joined by numerically rigid bonds.
/// Each group `[a, b]` (inclusive, 1-based nodes) carries one unknown.
#[derive(Clone, Debug, PartialEq)]
struct Grouping {
    ranges: Vec<(usize, usize)>,
}

impl Grouping {
    fn singletons(t: usize) -> Self {
        Grouping {
            ranges: (1..=t).map(|k| (k, k)).collect(),
        }
    }

    fn len(&self) -> usize {
        self.ranges.len()
    }
}

/// A bond is quantization-rigid when the flux response to a one-ulp change
/// of `Δu` exceeds a fraction of the tolerance while the current `Δu` is
/// itself at ulp scale: no representable iterate can then carry a sub-`tol`
/// nonzero flux across it.
fn detect_groups(inst: &ProblemInstance, u: &GridFunction, tol: f64) -> Grouping {
    let t = inst.t();
    let mut ranges: Vec<(usize, usize)> = Vec::with_capacity(t);
    let mut start = 1usize;
    for k in 1..=t {
        if k == t {
            ranges.push((start, t));
            break;
        }
        // bond k joins nodes k and k+1
        let scale = u.value(k).abs().max(u.value(k + 1).abs());
        let eta = f64::EPSILON * scale;
        let quantum = inst.w(k) * crate::functional::abs_pow(eta, inst.p(k) - 1.0);
        let rigid = quantum > 0.25 * tol && u.delta(k).abs() <= 8.0 * eta;
        if !rigid {
            ranges.push((start, k));
            start = k + 1;
        }
    }
    Grouping { ranges }
}

fn collapse(groups: &Grouping, u: &GridFunction) -> Vec<f64> {
    groups
        .ranges
        .iter()
        .map(|&(a, b)| {
            let n = (b - a + 1) as f64;
            (a..=b).map(|k| u.value(k)).sum::<f64>() / n
        })
        .collect()
}

fn expand(groups: &Grouping, v: &[f64], t: usize) -> GridFunction {
    let mut values = vec![0.0; t + 2];
    for (g, &(a, b)) in groups.ranges.iter().enumerate() {
        for k in a..=b {
            values[k] = v[g];
        }
    }
    GridFunction::new(values).expect("expanded iterate is a valid grid function")
}

/// Sums of nodal residuals over each group. Intra-group fluxes cancel
/// exactly because the expanded iterate has bit-identical values there.
fn group_residual(nodal: &[f64], groups: &Grouping) -> Vec<f64> {
    groups
        .ranges
        .iter()
        .map(|&(a, b)| (a..=b).map(|k| nodal[k - 1]).sum())
        .collect()
}

fn dfdx(inst: &ProblemInstance, k: usize, x: f64, h_rel: f64) -> f64 {
    let h = h_rel * x.abs().max(1.0);
    (inst.f(k, x + h) - inst.f(k, x - h)) / (2.0 * h)
}

/// Tridiagonal Jacobian of the grouped residual, as three diagonals.
fn group_jacobian(
    inst: &ProblemInstance,
    groups: &Grouping,
    u: &GridFunction,
    lambda: f64,
    fd_step: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let m = groups.len();
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    for (g, &(a, b)) in groups.ranges.iter().enumerate() {
        // left bond a-1 joins u(a-1) and u(a); right bond b joins u(b), u(b+1)
        let dl = p_power_deriv(u.delta(a - 1), inst.p(a - 1)) * inst.w(a - 1);
        let dr = p_power_deriv(u.delta(b), inst.p(b)) * inst.w(b);
        let mut dg = dl + dr;
        for k in a..=b {
            dg += inst.q(k) * p_power_deriv(u.value(k), inst.p(k));
            dg -= lambda * dfdx(inst, k, u.value(k), fd_step);
        }
        diag[g] = dg;
        if g > 0 {
            sub[g] = -dl;
        }
        if g + 1 < m {
            sup[g] = -dr;
        }
    }
    (sub, diag, sup)
}

/// Tridiagonal solve with partial pivoting (one fill-in superdiagonal).
/// Returns `None` when a pivot degenerates.
fn solve_tridiag(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut a = diag.to_vec(); // main
    let mut b = vec![0.0; n]; // first super
    let mut c = vec![0.0; n]; // second super (fill-in)
    let mut r = rhs.to_vec();
    for i in 0..n - 1 {
        b[i] = sup[i];
    }
    let mut low = sub.to_vec(); // sub[i] couples row i to column i-1
    for i in 0..n - 1 {
        let below = low[i + 1];
        if below.abs() > a[i].abs() {
            // swap rows i and i+1
            let (ai, bi, ci, ri) = (a[i], b[i], c[i], r[i]);
            a[i] = below;
            b[i] = a[i + 1];
            c[i] = if i + 1 < n - 1 { b[i + 1] } else { 0.0 };
            r[i] = r[i + 1];
            a[i + 1] = bi;
            b[i + 1] = ci;
            r[i + 1] = ri;
            low[i + 1] = ai;
            // note: the swapped-out row had zero in the second super slot
            if i + 1 < n - 1 {
                c[i + 1] = 0.0;
            }
        }
        if a[i] == 0.0 {
            return None;
        }
        let factor = low[i + 1] / a[i];
        a[i + 1] -= factor * b[i];
        if i + 1 < n - 1 {
            b[i + 1] -= factor * c[i];
        }
        r[i + 1] -= factor * r[i];
    }
    if a[n - 1] == 0.0 || !a[n - 1].is_finite() {
        return None;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = r[n - 1] / a[n - 1];
    if n >= 2 {
        x[n - 2] = (r[n - 2] - b[n - 2] * x[n - 1]) / a[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (r[i] - b[i] * x[i + 1] - c[i] * x[i + 2]) / a[i];
        if !x[i].is_finite() {
            return None;
        }
    }
    if x.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(x)
}

fn build_result(
    inst: &ProblemInstance,
    u: &GridFunction,
    lambda: f64,
    iterations: usize,
    converged: bool,
    localization: Option<Localization>,
) -> Result<SolveResult, SolveError> {
    let r = residual(inst, u, lambda);
    let g = grad_i(inst, u, lambda);
    let i_value = energy_value(inst, u, lambda)?;
    Ok(SolveResult {
        u: u.values().to_vec(),
        i_value,
        residual_inf: inf_norm(&r),
        grad_inf: inf_norm(&g),
        phi_value: big_phi(inst, u),
        iterations,
        converged,
        localization,
        sign_class: classify_sign(u),
        norm_minus: crate::functional::norm_minus(inst, u),
        sup_norm: u.sup_norm(),
    })
}

/// Damped Newton on the residual from `init`. Converges when the true nodal
/// residual sup-norm drops to `opts.tol`; a singular Jacobian falls back to
/// a scaled descent step for that iteration.
pub fn solve_newton(
    inst: &ProblemInstance,
    lambda: f64,
    init: &GridFunction,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    inst.check_member(init)?;
    let t = inst.t();
    let mut u = init.clone();
    let mut history = Vec::new();
    let mut stall = 0usize;
    for iter in 0..opts.max_iter {
        let nodal = residual(inst, &u, lambda);
        let rn = inf_norm(&nodal);
        history.push(rn);
        if rn <= opts.tol {
            return build_result(inst, &u, lambda, iter, true, None);
        }
        let groups = detect_groups(inst, &u, opts.tol);
        let mut v = collapse(&groups, &u);
        u = expand(&groups, &v, t);
        let nodal = residual(inst, &u, lambda);
        let rg = group_residual(&nodal, &groups);
        let merit0 = inf_norm(&rg);
        if merit0 == 0.0 {
            // group sums are exactly zero but the nodal floor is above tol
            break;
        }
        let (sub, diag, sup) = group_jacobian(inst, &groups, &u, lambda, opts.fd_step);
        let neg: Vec<f64> = rg.iter().map(|x| -x).collect();
        let delta = match solve_tridiag(&sub, &diag, &sup, &neg) {
            Some(d) => d,
            None => {
                // gradient direction in group space, scaled to the iterate
                let scale = (1.0 + inf_norm(&v)) / (1.0 + merit0);
                rg.iter().map(|x| -x * scale).collect()
            }
        };
        // backtracking on the grouped residual norm
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = v
                .iter()
                .zip(&delta)
                .map(|(vi, di)| vi + step * di)
                .collect();
            if trial.iter().all(|x| x.is_finite()) {
                let trial_u = expand(&groups, &trial, t);
                let trial_nodal = residual(inst, &trial_u, lambda);
                let trial_merit = inf_norm(&group_residual(&trial_nodal, &groups));
                if trial_merit < merit0 * (1.0 - opts.armijo_c * step) {
                    v = trial;
                    u = trial_u;
                    accepted = true;
                    break;
                }
            }
            step *= opts.backtrack;
        }
        if !accepted {
            stall += 1;
            if stall >= 3 {
                break;
            }
        } else {
            stall = 0;
        }
    }
    let nodal = residual(inst, &u, lambda);
    let rn = inf_norm(&nodal);
    if rn <= opts.tol {
        return build_result(inst, &u, lambda, opts.max_iter, true, None);
    }
    let final_iterate = build_result(inst, &u, lambda, opts.max_iter, false, None)?;
    Err(SolveError::NoConvergence {
        iterations: opts.max_iter,
        residual_inf: rn,
        final_iterate: Box::new(final_iterate),
        residual_history: history,
    })
}

/// Gradient descent with Armijo backtracking on a (possibly penalized)
/// energy, in the grouped representation. Returns the best iterate found.
fn descend<FV, FG>(
    inst: &ProblemInstance,
    u0: &GridFunction,
    tol: f64,
    max_iter: usize,
    armijo_c: f64,
    backtrack: f64,
    value: FV,
    grad_nodal: FG,
) -> Result<GridFunction, SolveError>
where
    FV: Fn(&GridFunction) -> Result<f64, ProblemError>,
    FG: Fn(&GridFunction) -> Vec<f64>,
{
    let t = u0.t();
    let mut u = u0.clone();
    let mut fu = value(&u)?;
    for _ in 0..max_iter {
        let groups = detect_groups(inst, &u, tol);
        let v = collapse(&groups, &u);
        let u_snapped = expand(&groups, &v, t);
        let g = group_residual(&grad_nodal(&u_snapped), &groups);
        let gn = inf_norm(&g);
        if gn <= tol {
            return Ok(u_snapped);
        }
        let mut step = 1.0 / (1.0 + gn);
        let mut advanced = false;
        for _ in 0..60 {
            let trial: Vec<f64> = v.iter().zip(&g).map(|(vi, gi)| vi - step * gi).collect();
            let trial_u = expand(&groups, &trial, t);
            let ft = value(&trial_u)?;
            let decrease: f64 = g.iter().map(|gi| gi * gi).sum::<f64>() * step;
            if ft <= fu - armijo_c * decrease && ft.is_finite() {
                u = trial_u;
                fu = ft;
                advanced = true;
                break;
            }
            step *= backtrack;
        }
        if !advanced {
            break;
        }
    }
    Ok(u)
}

/// Energy descent followed by a Newton polish. Realizes local minimizers of
/// `I_λ`.
pub fn minimize_energy(
    inst: &ProblemInstance,
    lambda: f64,
    init: &GridFunction,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    inst.check_member(init)?;
    let u = descend(
        inst,
        init,
        opts.tol,
        opts.max_iter,
        opts.armijo_c,
        opts.backtrack,
        |u| energy_value(inst, u, lambda),
        |u| residual(inst, u, lambda),
    )?;
    solve_newton(inst, lambda, &u, opts)
}

/// Minimizes `I_λ` from `v̄(d)` inside the shell `r1 < Φ(u) < r2` using a
/// quadratic barrier penalty with geometric escalation, then polishes with
/// Newton and verifies the unpenalized iterate stayed inside.
pub fn localized_solve(
    inst: &ProblemInstance,
    lambda: f64,
    r1: f64,
    r2: f64,
    d: f64,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    let vbar = build_test_function(inst, d);
    let phi_vbar = big_phi(inst, &vbar);
    if !(r1 < phi_vbar && phi_vbar < r2) {
        return Err(SolveError::BadShell {
            phi_vbar,
            r1,
            r2,
        });
    }
    let mut mu = 1.0 / (r2 - r1).max(1e-300);
    let mut start = vbar.clone();
    for _round in 0..opts.max_penalty_rounds {
        let penalized_value = |u: &GridFunction| -> Result<f64, ProblemError> {
            let phi = big_phi(inst, u);
            let over = (phi - r2).max(0.0);
            let under = (r1 - phi).max(0.0);
            Ok(energy_value(inst, u, lambda)? + mu * (over * over + under * under))
        };
        let penalized_grad = |u: &GridFunction| -> Vec<f64> {
            let phi = big_phi(inst, u);
            let coeff = 2.0 * mu * ((phi - r2).max(0.0) - (r1 - phi).max(0.0));
            let mut g = residual(inst, u, lambda);
            if coeff != 0.0 {
                // ∂Φ/∂u_k is the residual of Φ alone (λ = 0)
                let gphi = residual(inst, u, 0.0);
                for (gi, pi) in g.iter_mut().zip(&gphi) {
                    *gi += coeff * pi;
                }
            }
            g
        };
        let descended = descend(
            inst,
            &start,
            opts.tol,
            opts.max_iter,
            opts.armijo_c,
            opts.backtrack,
            penalized_value,
            penalized_grad,
        )?;
        let polished = solve_newton(inst, lambda, &descended, opts);
        if let Ok(mut result) = polished {
            let inside = r1 < result.phi_value && result.phi_value < r2;
            result.localization = Some(Localization { r1, r2, inside });
            if inside && result.converged {
                return Ok(result);
            }
        }
        mu *= 10.0;
        let phi_desc = big_phi(inst, &descended);
        if r1 < phi_desc && phi_desc < r2 {
            start = descended;
        }
    }
    Err(SolveError::LeftShell { r1, r2 })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<SolveResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepOutcome {
    pub entries: Vec<SweepEntry>,
    pub success_fraction: f64,
}

/// Solves at `n` λ values strictly inside the open interval (log-spaced by
/// default), each from `v̄(d)` with a warm start from the previous solution
/// as a second attempt. Per-λ failures are collected, never aborting the
/// sweep.
pub fn sweep_lambda(
    inst: &ProblemInstance,
    interval: &LambdaInterval,
    n: usize,
    d: f64,
    linear: bool,
    opts: &SolveOptions,
) -> Result<SweepOutcome, SolveError> {
    if interval.is_empty() || n == 0 {
        return Err(SolveError::EmptyInterval {
            lower: interval.lower,
            upper: interval.upper,
        });
    }
    // sample strictly inside, offsetting the endpoints by 1e-9 relative
    let lo = interval.lower + 1e-9 * interval.lower.abs().max(f64::MIN_POSITIVE);
    let hi = match interval.upper {
        Some(u) => u - 1e-9 * u.abs(),
        None => lo * 1e6,
    };
    if !(lo < hi) {
        return Err(SolveError::EmptyInterval {
            lower: interval.lower,
            upper: interval.upper,
        });
    }
    let lambdas: Vec<f64> = if n == 1 {
        vec![if linear || lo <= 0.0 {
            0.5 * (lo + hi)
        } else {
            (lo * hi).sqrt()
        }]
    } else {
        (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                if linear || lo <= 0.0 {
                    lo + (hi - lo) * s
                } else {
                    (lo.ln() + (hi.ln() - lo.ln()) * s).exp()
                }
            })
            .collect()
    };
    let vbar = build_test_function(inst, d);
    let mut entries = Vec::with_capacity(n);
    let mut previous: Option<GridFunction> = None;
    let mut successes = 0usize;
    for &lambda in &lambdas {
        let cold = solve_newton(inst, lambda, &vbar, opts);
        let attempt = match (&cold, &previous) {
            (Ok(_), _) => cold,
            (Err(_), Some(prev)) => {
                let warm = solve_newton(inst, lambda, prev, opts);
                if warm.is_ok() {
                    warm
                } else {
                    cold
                }
            }
            _ => cold,
        };
        match attempt {
            Ok(result) => {
                previous = Some(result.grid());
                successes += 1;
                entries.push(SweepEntry {
                    lambda,
                    result: Some(result),
                    error: None,
                });
            }
            Err(err) => {
                entries.push(SweepEntry {
                    lambda,
                    result: None,
                    error: Some(err.to_string()),
                });
            }
        }
    }
    Ok(SweepOutcome {
        success_fraction: successes as f64 / n as f64,
        entries,
    })
}

/// Multi-start exploration: zero start, `v̄(d)`, and ± random directions
/// with log-spaced sup norms. Returns the distinct converged critical points
/// sorted by energy.
pub fn multi_start(
    inst: &ProblemInstance,
    lambda: f64,
    n_starts: usize,
    seed: u64,
    d: f64,
    opts: &SolveOptions,
) -> Vec<SolveResult> {
    let t = inst.t();
    let mut starts: Vec<GridFunction> = vec![GridFunction::zero(t), build_test_function(inst, d)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scale_idx = 0usize;
    while starts.len() < n_starts {
        let n_scales = 8.0;
        let s = 10f64.powf(-6.0 + 7.0 * (scale_idx as f64 % n_scales) / (n_scales - 1.0));
        scale_idx += 1;
        let mut values = vec![0.0; t + 2];
        for v in values.iter_mut().take(t + 1).skip(1) {
            *v = rng.gen_range(-1.0..1.0);
        }
        let sup = values.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(1e-12);
        let pos: Vec<f64> = values.iter().map(|v| v / sup * s).collect();
        let neg: Vec<f64> = pos.iter().map(|v| -v).collect();
        starts.push(GridFunction::new(pos).unwrap());
        if starts.len() < n_starts {
            starts.push(GridFunction::new(neg).unwrap());
        }
    }
    let mut found: Vec<SolveResult> = Vec::new();
    for init in &starts {
        if let Ok(result) = solve_newton(inst, lambda, init, opts) {
            let distinct = found.iter().all(|other| {
                let dist = result
                    .u
                    .iter()
                    .zip(&other.u)
                    .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
                dist > 1e-6f64.max(1e-6 * result.sup_norm.max(other.sup_norm))
            });
            if distinct {
                found.push(result);
            }
        }
    }
    found.sort_by(|a, b| a.i_value.partial_cmp(&b.i_value).unwrap());
    found
}
