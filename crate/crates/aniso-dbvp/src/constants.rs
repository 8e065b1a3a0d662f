//! Constants derived from an instance: exponent and weight extrema, and the
//! quantities `A`, `K`, `K0`, `C1` that all interval formulas are built from.

use serde::{Deserialize, Serialize};

use crate::problem::ProblemInstance;

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct DerivedConstants {
    pub p_minus: f64,
    pub p_plus: f64,
    pub w_minus: f64,
    pub w_plus: f64,
    pub q_minus: f64,
    pub q_plus: f64,
    /// `A = w(0) + w(T) + Σ_{k=1}^{T} q(k)`.
    #[serde(rename = "A")]
    pub a: f64,
    /// `K = (2T+2)^{(1-p+)/p+} max{w+, q+}^{(p- - p+)/(p+ p-)}`.
    #[serde(rename = "K")]
    pub k: f64,
    /// `K0 = ((2T+2) max{w+, q+})^{(p- - p+)/(p+ p-)}`.
    #[serde(rename = "K0")]
    pub k0: f64,
    /// `C1 = (T+1)(w+ + q+)`.
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "T")]
    pub t: usize,
}

/// Computes every derived constant. `K` and `K0` are evaluated in log space
/// so weights as large as `e^{147}` do not lose precision through
/// intermediate powers.
pub fn derived_constants(inst: &ProblemInstance) -> DerivedConstants {
    let t = inst.t();
    let (p_minus, p_plus) = inst.p_extrema();
    let (w_minus, w_plus) = inst.w_extrema();
    let (q_minus, q_plus) = inst.q_extrema();
    let a = inst.w(0) + inst.w(t) + (1..=t).map(|k| inst.q(k)).sum::<f64>();
    let m = w_plus.max(q_plus);
    let two_t2 = 2.0 * t as f64 + 2.0;
    let cross = (p_minus - p_plus) / (p_plus * p_minus);
    let k = ((1.0 - p_plus) / p_plus * two_t2.ln() + cross * m.ln()).exp();
    let k0 = (cross * (two_t2.ln() + m.ln())).exp();
    let c1 = (t as f64 + 1.0) * (w_plus + q_plus);
    DerivedConstants {
        p_minus,
        p_plus,
        w_minus,
        w_plus,
        q_minus,
        q_plus,
        a,
        k,
        k0,
        c1,
        t,
    }
}

impl DerivedConstants {
    /// Range checks that hold for every valid instance.
    pub fn invariants_hold(&self) -> bool {
        2.0 <= self.p_minus
            && self.p_minus <= self.p_plus
            && 1.0 <= self.w_minus
            && self.w_minus <= self.w_plus
            && 1.0 <= self.q_minus
            && self.q_minus <= self.q_plus
            && self.a >= self.t as f64 + 2.0
            && 0.0 < self.k
            && self.k <= self.k0
            && self.k0 <= 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn example_33_constants() {
        let dc = derived_constants(&examples::example_3_3_instance());
        assert_eq!(dc.p_minus, 3.0);
        assert_eq!(dc.p_plus, 5.0);
        assert_eq!(dc.a, 2048.0);
        // K = 22^{-4/5} e^{-98/5}
        let want_k = (-0.8 * 22f64.ln() - 19.6).exp();
        assert!((dc.k - want_k).abs() / want_k < 1e-12, "{} vs {want_k}", dc.k);
        assert!((dc.k - 2.5935224402118565e-10).abs() / dc.k < 1e-12);
        assert!((dc.w_plus - 147f64.exp()).abs() / dc.w_plus < 1e-15);
        assert_eq!(dc.q_plus, 2048.0);
        assert!(dc.invariants_hold());
    }

    #[test]
    fn unit_weights_collapse() {
        let inst = examples::constant_rhs_instance(7, 2.0);
        let dc = derived_constants(&inst);
        // with w = q = 1 the weight factor drops out, leaving
        // K = (2T+2)^{(1-p+)/p+} = 16^{-1/2} and K0 = 1
        assert!((dc.k - 0.25).abs() < 1e-15);
        assert_eq!(dc.k0, 1.0);
        assert_eq!(dc.a, 9.0); // T + 2
        assert_eq!(dc.c1, 16.0); // 2 (T+1)
        assert!(dc.invariants_hold());
    }

    #[test]
    fn example_37_constants() {
        let dc = derived_constants(&examples::example_3_7_instance());
        assert_eq!(dc.p_minus, 3.0);
        assert_eq!(dc.p_plus, 14.0);
        assert_eq!(dc.a, 12.0);
        let want_k = (-(13.0 / 14.0) * 22f64.ln()).exp();
        assert!((dc.k - want_k).abs() / want_k < 1e-14);
        let want_k0 = (-(11.0 / 42.0) * 22f64.ln()).exp();
        assert!((dc.k0 - want_k0).abs() / want_k0 < 1e-14);
        assert!(dc.invariants_hold());
    }
}
