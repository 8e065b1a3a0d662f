//! Norms, the modular, the energy functional `I_λ = Φ - λΨ`, its exact
//! gradient, and the Euler–Lagrange residual.
//!
//! The critical points of `I_λ` and the solutions of the difference equation
//! coincide; numerically this shows up as the componentwise identity between
//! `grad_i` (computed through the pairing `I'_λ(u)(e_k)`) and `residual`
//! (computed through flux differences), which the tests pin down to 1e-12
//! relative.

use crate::problem::{GridFunction, ProblemError, ProblemInstance};

/// `|x|^e * sign(x)` with a hard zero below 1e-300 to avoid underflow noise.
#[inline]
pub fn signed_pow(x: f64, e: f64) -> f64 {
    if x.abs() < 1e-300 {
        0.0
    } else {
        x.abs().powf(e) * x.signum()
    }
}

/// `|x|^e` with the same underflow shortcut.
#[inline]
pub fn abs_pow(x: f64, e: f64) -> f64 {
    if x.abs() < 1e-300 {
        if e == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        x.abs().powf(e)
    }
}

/// The map `x ↦ |x|^{p-2} x`, continuously extended by 0 at the origin
/// (well-defined since `p >= 2`).
#[inline]
pub fn p_power(x: f64, p: f64) -> f64 {
    signed_pow(x, p - 1.0)
}

/// Derivative of [`p_power`]: `(p-1)|x|^{p-2}`; at `x = 0` this is 1 for
/// `p = 2` and 0 for `p > 2`.
#[inline]
pub fn p_power_deriv(x: f64, p: f64) -> f64 {
    if x.abs() < 1e-300 {
        if p == 2.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (p - 1.0) * x.abs().powf(p - 2.0)
    }
}

fn norm_with_exponent(inst: &ProblemInstance, u: &GridFunction, p: f64) -> f64 {
    let t = inst.t();
    let mut sum = 0.0;
    for k in 1..=t + 1 {
        sum += inst.w(k - 1) * abs_pow(u.delta(k - 1), p);
        sum += inst.q(k) * abs_pow(u.value(k), p);
    }
    sum.powf(1.0 / p)
}

/// `‖u‖`: the weighted `p_minus` norm on `W`.
pub fn norm_minus(inst: &ProblemInstance, u: &GridFunction) -> f64 {
    let (p_minus, _) = inst.p_extrema();
    norm_with_exponent(inst, u, p_minus)
}

/// `‖u‖₊`: the equivalent weighted `p_plus` norm.
pub fn norm_plus(inst: &ProblemInstance, u: &GridFunction) -> f64 {
    let (_, p_plus) = inst.p_extrema();
    norm_with_exponent(inst, u, p_plus)
}

/// `max_{k in [1,T]} |u(k)|`.
pub fn sup_norm(u: &GridFunction) -> f64 {
    u.sup_norm()
}

/// The anisotropic modular
/// `φ(u) = Σ_{k=1}^{T+1} w(k-1)|Δu(k-1)|^{p(k-1)} + q(k)|u(k)|^{p(k)}`.
pub fn modular_phi(inst: &ProblemInstance, u: &GridFunction) -> f64 {
    let t = inst.t();
    let mut sum = 0.0;
    for k in 1..=t + 1 {
        sum += inst.w(k - 1) * abs_pow(u.delta(k - 1), inst.p(k - 1));
        sum += inst.q(k) * abs_pow(u.value(k), inst.p(k));
    }
    sum
}

/// Values of `Φ`, `Ψ`, `I_λ` and the modular at one grid function.
#[derive(Clone, Debug)]
pub struct EnergyBreakdown {
    pub phi_modular: f64,
    pub big_phi: f64,
    pub big_psi: f64,
    pub i_value: f64,
    /// `w(k-1)|Δu(k-1)|^{p(k-1)-2}Δu(k-1)` for `k` in `[1, T+1]`.
    pub per_k_flux: Vec<f64>,
}

/// `Φ(u) = Σ w(k-1)/p(k-1) |Δu(k-1)|^{p(k-1)} + q(k)/p(k) |u(k)|^{p(k)}`.
pub fn big_phi(inst: &ProblemInstance, u: &GridFunction) -> f64 {
    let t = inst.t();
    let mut sum = 0.0;
    for k in 1..=t + 1 {
        sum += inst.w(k - 1) / inst.p(k - 1) * abs_pow(u.delta(k - 1), inst.p(k - 1));
        sum += inst.q(k) / inst.p(k) * abs_pow(u.value(k), inst.p(k));
    }
    sum
}

/// `Ψ(u) = Σ_{k=1}^{T} F(k, u(k))`.
pub fn big_psi(inst: &ProblemInstance, u: &GridFunction) -> Result<f64, ProblemError> {
    let mut sum = 0.0;
    for k in 1..=inst.t() {
        sum += inst.primitive(k, u.value(k))?;
    }
    Ok(sum)
}

/// Evaluates the full energy `I_λ(u) = Φ(u) - λ Ψ(u)` with its pieces.
pub fn energy(
    inst: &ProblemInstance,
    u: &GridFunction,
    lambda: f64,
) -> Result<EnergyBreakdown, ProblemError> {
    inst.check_member(u)?;
    let t = inst.t();
    let phi_modular = modular_phi(inst, u);
    let big_phi_v = big_phi(inst, u);
    let big_psi_v = big_psi(inst, u)?;
    let (p_minus, p_plus) = inst.p_extrema();
    debug_assert!(
        big_phi_v >= phi_modular / p_plus * (1.0 - 1e-12)
            && big_phi_v <= phi_modular / p_minus * (1.0 + 1e-12),
        "Φ escaped the modular sandwich: φ={phi_modular}, Φ={big_phi_v}"
    );
    let per_k_flux: Vec<f64> = (1..=t + 1)
        .map(|k| inst.w(k - 1) * p_power(u.delta(k - 1), inst.p(k - 1)))
        .collect();
    Ok(EnergyBreakdown {
        phi_modular,
        big_phi: big_phi_v,
        big_psi: big_psi_v,
        i_value: big_phi_v - lambda * big_psi_v,
        per_k_flux,
    })
}

/// `I_λ(u)` alone, for line searches.
pub fn energy_value(
    inst: &ProblemInstance,
    u: &GridFunction,
    lambda: f64,
) -> Result<f64, ProblemError> {
    Ok(big_phi(inst, u) - lambda * big_psi(inst, u)?)
}

/// Euler–Lagrange residual of the difference equation, component `k` in
/// `[1, T]`:
///
/// ```text
/// r_k = w(k-1)|Δu(k-1)|^{p(k-1)-2}Δu(k-1) - w(k)|Δu(k)|^{p(k)-2}Δu(k)
///     + q(k)|u(k)|^{p(k)-2}u(k) - λ f(k, u(k))
/// ```
///
/// A solution of the boundary value problem has residual identically zero.
pub fn residual(inst: &ProblemInstance, u: &GridFunction, lambda: f64) -> Vec<f64> {
    let t = inst.t();
    let mut out = Vec::with_capacity(t);
    for k in 1..=t {
        let flux_left = inst.w(k - 1) * p_power(u.delta(k - 1), inst.p(k - 1));
        let flux_right = inst.w(k) * p_power(u.delta(k), inst.p(k));
        let r = flux_left - flux_right + inst.q(k) * p_power(u.value(k), inst.p(k))
            - lambda * inst.f(k, u.value(k));
        out.push(r);
    }
    out
}

/// The pairing `I'_λ(u)(v)`, linear in `v`.
pub fn directional_derivative(
    inst: &ProblemInstance,
    u: &GridFunction,
    v: &GridFunction,
    lambda: f64,
) -> f64 {
    let t = inst.t();
    let mut sum = 0.0;
    for k in 1..=t + 1 {
        sum += inst.w(k - 1) * p_power(u.delta(k - 1), inst.p(k - 1)) * v.delta(k - 1);
    }
    for k in 1..=t {
        sum += inst.q(k) * p_power(u.value(k), inst.p(k)) * v.value(k);
        sum -= lambda * inst.f(k, u.value(k)) * v.value(k);
    }
    sum
}

/// Gradient of `I_λ` computed through the pairing with the coordinate
/// functions `e_k`. By summation by parts this equals [`residual`]
/// componentwise; both routes are kept so the identity can be tested.
pub fn grad_i(inst: &ProblemInstance, u: &GridFunction, lambda: f64) -> Vec<f64> {
    let t = inst.t();
    (1..=t)
        .map(|k| {
            let mut values = vec![0.0; t + 2];
            values[k] = 1.0;
            let ek = GridFunction::new(values).expect("basis vector is a valid grid function");
            directional_derivative(inst, u, &ek, lambda)
        })
        .collect()
}

pub fn inf_norm(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::problem::build_test_function;

    fn grid(values: &[f64]) -> GridFunction {
        GridFunction::new(values.to_vec()).unwrap()
    }

    #[test]
    fn hand_summed_norms_and_modular() {
        let inst = examples::constant_rhs_instance(2, 2.0);
        let u = grid(&[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(norm_minus(&inst, &u), 2.0);
        assert_eq!(norm_plus(&inst, &u), 2.0);
        assert_eq!(modular_phi(&inst, &u), 4.0);
        let z = GridFunction::zero(2);
        assert_eq!(norm_minus(&inst, &z), 0.0);
        assert_eq!(modular_phi(&inst, &z), 0.0);
    }

    #[test]
    fn norm_minus_is_one_homogeneous() {
        let inst = examples::example_3_7_instance();
        let u = grid(&[0.0, 0.3, -0.7, 1.1, 0.2, -0.4, 0.9, 0.05, -1.3, 0.6, 0.8, 0.0]);
        let base = norm_minus(&inst, &u);
        for c in [0.5, 2.0, 7.3] {
            let scaled: Vec<f64> = u.values().iter().map(|v| c * v).collect();
            let su = grid(&scaled);
            let got = norm_minus(&inst, &su);
            assert!((got - c * base).abs() < 1e-12 * c * base);
        }
    }

    #[test]
    fn sup_norm_examples() {
        let u = grid(&[0.0, -3.0, 2.0, 0.0]);
        assert_eq!(sup_norm(&u), 3.0);
        let inst = examples::example_3_7_instance();
        let v = build_test_function(&inst, 0.1);
        assert_eq!(sup_norm(&v), 0.1);
    }

    #[test]
    fn sup_norm_bound_sampled() {
        let inst = examples::example_3_7_instance();
        let (p_minus, _) = inst.p_extrema();
        let c = (2.0 * inst.t() as f64 + 2.0).powf((p_minus - 1.0) / p_minus);
        let us = [
            grid(&[0.0, 0.3, -0.7, 1.1, 0.2, -0.4, 0.9, 0.05, -1.3, 0.6, 0.8, 0.0]),
            build_test_function(&inst, 0.7),
            grid(&[0.0, 1e-6, 0.0, 0.0, 0.0, 100.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
        ];
        for u in &us {
            assert!(sup_norm(u) <= c * norm_minus(&inst, u) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn energy_on_example_37_profile() {
        let inst = examples::example_3_7_instance();
        let v = build_test_function(&inst, 0.1);
        let e = energy(&inst, &v, 1.0).unwrap();
        let want_phi = 3.6051565783320568e-4;
        assert!(
            (e.big_phi - want_phi).abs() / want_phi < 1e-13,
            "Φ={} want {want_phi}",
            e.big_phi
        );
        let want_psi = 10.0 * 3.8645038329399411e-3;
        assert!((e.big_psi - want_psi).abs() / want_psi < 1e-13);
        assert_eq!(e.i_value, e.big_phi - 1.0 * e.big_psi);
        assert_eq!(e.per_k_flux.len(), 11);
    }

    #[test]
    fn energy_at_zero_is_zero() {
        let inst = examples::example_3_3_instance();
        let z = GridFunction::zero(10);
        let e = energy(&inst, &z, 3.7).unwrap();
        assert_eq!(e.big_phi, 0.0);
        assert_eq!(e.big_psi, 0.0);
        assert_eq!(e.i_value, 0.0);
        assert_eq!(e.phi_modular, 0.0);
    }

    #[test]
    fn phi_of_test_profile_between_power_bounds() {
        // d in (0,1): d^{p+} A / p+ < Φ(v̄) < d^{p-} A / p-
        let inst = examples::example_3_7_instance();
        let a = 12.0;
        for d in [0.05, 0.1, 0.5, 0.9] {
            let v = build_test_function(&inst, d);
            let phi = big_phi(&inst, &v);
            assert!(d.powf(14.0) * a / 14.0 < phi && phi < d.powf(3.0) * a / 3.0, "d={d}");
        }
    }

    #[test]
    fn residual_of_linear_solution_vanishes() {
        let inst = examples::constant_rhs_instance(2, 2.0);
        let u = grid(&[0.0, 0.5, 0.5, 0.0]);
        let r = residual(&inst, &u, 1.0);
        assert!(inf_norm(&r) < 1e-15, "{r:?}");
        // and u ≡ 0 solves the homogeneous problem when f(k,0)=0
        let inst33 = examples::example_3_3_instance();
        let z = GridFunction::zero(10);
        assert!(inf_norm(&residual(&inst33, &z, 5.0)) == 0.0);
    }

    #[test]
    fn residual_on_interior_constant_run() {
        let inst = examples::example_3_7_instance();
        let d = 0.37;
        let lambda = 2.5;
        let v = build_test_function(&inst, d);
        let r = residual(&inst, &v, lambda);
        for k in 2..=inst.t() - 1 {
            let want = inst.q(k) * d.powf(inst.p(k) - 1.0) - lambda * inst.f(k, d);
            let got = r[k - 1];
            assert!((got - want).abs() <= 1e-14 * want.abs().max(1.0), "k={k}");
        }
    }

    #[test]
    fn gradient_equals_residual_componentwise() {
        let inst = examples::example_3_7_instance();
        let u = grid(&[0.0, 0.3, -0.7, 1.1, 0.2, -0.4, 0.9, 0.05, -1.3, 0.6, 0.8, 0.0]);
        for lambda in [0.0, 1.0, 17.0] {
            let g = grad_i(&inst, &u, lambda);
            let r = residual(&inst, &u, lambda);
            for k in 0..g.len() {
                let scale = g[k].abs().max(r[k].abs()).max(1e-300);
                assert!(
                    (g[k] - r[k]).abs() <= 1e-12 * scale,
                    "k={k}: {} vs {}",
                    g[k],
                    r[k]
                );
            }
        }
    }

    #[test]
    fn gradient_matches_central_differences() {
        let inst = examples::example_3_7_instance();
        let u = grid(&[0.0, 0.31, -0.72, 1.13, 0.24, -0.45, 0.96, 0.17, -1.28, 0.59, 0.81, 0.0]);
        let lambda = 1.7;
        let g = grad_i(&inst, &u, lambda);
        let h = 1e-6;
        for k in 1..=inst.t() {
            let mut up = u.values().to_vec();
            let mut dn = u.values().to_vec();
            up[k] += h;
            dn[k] -= h;
            let up = grid(&up);
            let dn = grid(&dn);
            let fd = (energy_value(&inst, &up, lambda).unwrap()
                - energy_value(&inst, &dn, lambda).unwrap())
                / (2.0 * h);
            let scale = g[k - 1].abs().max(fd.abs()).max(1e-8);
            assert!(
                (g[k - 1] - fd).abs() / scale < 1e-5,
                "k={k}: {} vs fd {}",
                g[k - 1],
                fd
            );
        }
    }

    #[test]
    fn directional_derivative_pairing() {
        let inst = examples::example_3_7_instance();
        let u = grid(&[0.0, 0.3, -0.7, 1.1, 0.2, -0.4, 0.9, 0.05, -1.3, 0.6, 0.8, 0.0]);
        let z = GridFunction::zero(10);
        assert_eq!(directional_derivative(&inst, &u, &z, 1.0), 0.0);
        let g = grad_i(&inst, &u, 1.0);
        for k in 1..=10usize {
            let mut e = vec![0.0; 12];
            e[k] = 1.0;
            let ek = grid(&e);
            let got = directional_derivative(&inst, &u, &ek, 1.0);
            assert_eq!(got, g[k - 1]);
        }
    }

    #[test]
    fn p_power_at_zero_and_derivative() {
        assert_eq!(p_power(0.0, 3.5), 0.0);
        assert_eq!(p_power_deriv(0.0, 2.0), 1.0);
        assert_eq!(p_power_deriv(0.0, 3.0), 0.0);
        assert_eq!(p_power(-2.0, 3.0), -4.0);
        assert!((p_power_deriv(-2.0, 3.0) - 4.0).abs() < 1e-15);
    }
}
