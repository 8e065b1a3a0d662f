//! Hand-coded reference instances used by the built-in example configs and
//! throughout the test suites.

use std::sync::Arc;

use crate::problem::{GrowthCertificate, Nonlinearity, ProblemInstance};

/// T=10, `w(k)=e^{k(10-k)^2}`, `q(k)=2^k`, `p(k)=2k/11+3`,
/// `f(k,x) = e^{(k+2)(k-13)} x/(x^2+1e-11)^2`, with the closed primitive
/// `F(k,t) = (1e11/2) e^{(k+2)(k-13)} t^2/(t^2+1e-11)`.
pub fn example_3_3_instance() -> ProblemInstance {
    let t = 10usize;
    let w: Vec<f64> = (0..=t)
        .map(|k| {
            let kf = k as f64;
            (kf * (10.0 - kf).powi(2)).exp()
        })
        .collect();
    let q: Vec<f64> = (1..=t + 1).map(|k| 2f64.powi(k as i32)).collect();
    let p: Vec<f64> = (0..=t + 1).map(|k| 2.0 * k as f64 / 11.0 + 3.0).collect();
    let a = 1e-11;
    let coeff = |k: usize| {
        let kf = k as f64;
        ((kf + 2.0) * (kf - 13.0)).exp()
    };
    let f = Arc::new(move |k: usize, x: f64| coeff(k) * x / (x * x + a).powi(2));
    let big_f =
        Arc::new(move |k: usize, tt: f64| coeff(k) * tt * tt / (2.0 * a * (tt * tt + a)));
    let nl = Nonlinearity::from_fn(f).with_primitive(big_f);
    ProblemInstance::new(t, w, q, p, nl, None).unwrap()
}

pub fn example_3_3_growth() -> GrowthCertificate {
    GrowthCertificate::uniform(0.000012, 2.0, 10)
}

/// T=10, `w=q=1`, `p(k)=k+3`, separable `f(k,x) = g(x) = 1/((400x)^2+1)`
/// with `G(t) = atan(400t)/400`.
pub fn example_3_7_instance() -> ProblemInstance {
    let t = 10usize;
    let w = vec![1.0; t + 1];
    let q = vec![1.0; t + 1];
    let p: Vec<f64> = (0..=t + 1).map(|k| k as f64 + 3.0).collect();
    let nl = Nonlinearity::separable(
        vec![1.0; t],
        Arc::new(|x: f64| 1.0 / ((400.0 * x).powi(2) + 1.0)),
        Some(Arc::new(|tt: f64| (400.0 * tt).atan() / 400.0)),
    );
    ProblemInstance::new(t, w, q, p, nl, None).unwrap()
}

pub fn example_3_7_growth() -> GrowthCertificate {
    GrowthCertificate::uniform(0.0039, 2.0, 10)
}

/// Small uniform instance for tests: `w = q = 1`, constant exponent, and a
/// nonlinearity independent of `x` is allowed via `f`.
pub fn simple_instance(t: usize, p: f64, f: fn(usize, f64) -> f64) -> ProblemInstance {
    let nl = Nonlinearity::from_fn(Arc::new(move |k, x| f(k, x)));
    ProblemInstance::new(
        t,
        vec![1.0; t + 1],
        vec![1.0; t + 1],
        vec![p; t + 2],
        nl,
        None,
    )
    .unwrap()
}

/// `f ≡ 1` with its closed primitive `F(k,t) = t`, on unit weights.
pub fn constant_rhs_instance(t: usize, p: f64) -> ProblemInstance {
    let nl = Nonlinearity::from_fn(Arc::new(|_, _| 1.0)).with_primitive(Arc::new(|_, tt| tt));
    ProblemInstance::new(
        t,
        vec![1.0; t + 1],
        vec![1.0; t + 1],
        vec![p; t + 2],
        nl,
        None,
    )
    .unwrap()
}
