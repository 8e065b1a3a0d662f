//! Adaptive Simpson quadrature, used to derive the primitive `F` when no
//! closed form is registered.

use thiserror::Error;

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Fixed pre-split of the interval before adaptive refinement, so narrow
    /// features away from the midpoint are not missed.
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 48,
            initial_panels: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("quadrature did not converge on [{a}, {b}] (max depth {depth})")]
    NoConvergence { a: f64, b: f64, depth: u32 },
    #[error("integrand returned a non-finite value at {x}")]
    NonFinite { x: f64 },
}

/// Integrates `f` over `[a, b]` (either orientation). The absolute tolerance
/// is distributed over the pre-split panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<f64, QuadError> {
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let panels = opts.initial_panels.max(1);
    let step = (hi - lo) / panels as f64;
    let mut total = 0.0;
    let eval = |x: f64| -> Result<f64, QuadError> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadError::NonFinite { x })
        }
    };
    for i in 0..panels {
        let x0 = lo + i as f64 * step;
        let x1 = if i + 1 == panels { hi } else { x0 + step };
        let fa = eval(x0)?;
        let fb = eval(x1)?;
        let m = 0.5 * (x0 + x1);
        let fm = eval(m)?;
        let whole = simpson(x0, x1, fa, fm, fb);
        let tol = (opts.abs_tol / panels as f64).max(f64::MIN_POSITIVE);
        total += adaptive(
            &eval,
            x0,
            x1,
            fa,
            fm,
            fb,
            whole,
            tol,
            opts.rel_tol,
            opts.max_depth,
        )?;
    }
    Ok(sign * total)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<E: Fn(f64) -> Result<f64, QuadError>>(
    eval: &E,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    abs_tol: f64,
    rel_tol: f64,
    depth: u32,
) -> Result<f64, QuadError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(lm)?;
    let frm = eval(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let refined = left + right;
    let err = refined - whole;
    let tol = abs_tol.max(rel_tol * refined.abs());
    if err.abs() <= 15.0 * tol || (b - a) < f64::EPSILON * (a.abs() + b.abs()) {
        // Richardson extrapolation term for the final estimate.
        return Ok(refined + err / 15.0);
    }
    if depth == 0 {
        return Err(QuadError::NoConvergence { a, b, depth: 0 });
    }
    let half_tol = 0.5 * abs_tol;
    Ok(adaptive(eval, a, m, fa, flm, fm, left, half_tol, rel_tol, depth - 1)?
        + adaptive(eval, m, b, fm, frm, fb, right, half_tol, rel_tol, depth - 1)?)
}
