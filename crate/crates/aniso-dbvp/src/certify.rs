//! Machine-checks the hypotheses of each existence theorem on a concrete
//! instance and emits the admissible open λ-interval together with the norm
//! and sup-norm localization the theorem predicts.
//!
//! All strict inequalities are compared with zero slack; every verdict
//! carries its margin so borderline cases can be judged by the caller.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{derived_constants, DerivedConstants};
use crate::functional::abs_pow;
use crate::problem::{
    check_growth, golden_max, validate_instance, GrowthCertificate, GrowthCheckOptions,
    GrowthVerdict, ProblemError, ProblemInstance, Violation,
};

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("instance failed validation: {}", format_violations(.0))]
    InvalidInstance(Vec<Violation>),
    #[error("degenerate-denominator in a_d: |{denominator}| below 1e-300")]
    DegenerateDenominator { denominator: f64 },
    #[error("not-separable: the nonlinearity has no registered beta/g form")]
    NotSeparable,
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.message.clone())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T1.1")]
    T1_1,
    #[serde(rename = "T3.2")]
    T3_2,
    #[serde(rename = "T3.4")]
    T3_4,
    #[serde(rename = "T3.5")]
    T3_5,
    #[serde(rename = "T3.8")]
    T3_8,
    #[serde(rename = "C3.9")]
    C3_9,
}

impl std::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TheoremId::T1_1 => "T1.1",
            TheoremId::T3_2 => "T3.2",
            TheoremId::T3_4 => "T3.4",
            TheoremId::T3_5 => "T3.5",
            TheoremId::T3_8 => "T3.8",
            TheoremId::C3_9 => "C3.9",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "T1.1" => Ok(TheoremId::T1_1),
            "T3.2" => Ok(TheoremId::T3_2),
            "T3.4" => Ok(TheoremId::T3_4),
            "T3.5" => Ok(TheoremId::T3_5),
            "T3.8" => Ok(TheoremId::T3_8),
            "C3.9" => Ok(TheoremId::C3_9),
            other => Err(format!(
                "unknown theorem id `{other}` (expected one of T1.1, T3.2, T3.4, T3.5, T3.8, C3.9)"
            )),
        }
    }
}

/// One checked hypothesis. `margin` is `rhs - lhs` of the strict inequality
/// (positive means it holds with that much room). Non-gating conditions are
/// recorded for the report but do not decide certification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionResult {
    pub name: String,
    pub holds: bool,
    pub margin: f64,
    pub gating: bool,
    pub detail: String,
}

fn strict_less(name: &str, lhs: f64, rhs: f64, gating: bool) -> ConditionResult {
    ConditionResult {
        name: name.to_string(),
        holds: lhs < rhs,
        margin: rhs - lhs,
        gating,
        detail: format!("{lhs:e} < {rhs:e}"),
    }
}

/// Open interval of admissible λ; `upper = None` means unbounded above.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct LambdaInterval {
    pub lower: f64,
    pub upper: Option<f64>,
}

impl LambdaInterval {
    pub fn contains(&self, lambda: f64) -> bool {
        lambda > self.lower && self.upper.map(|u| lambda < u).unwrap_or(true)
    }

    pub fn is_empty(&self) -> bool {
        self.upper.map(|u| u <= self.lower).unwrap_or(false)
    }

    /// A point strictly inside, for sweeps and default solves: geometric mean
    /// for bounded intervals with positive endpoints, otherwise 2x the lower
    /// endpoint.
    pub fn interior_point(&self) -> f64 {
        match self.upper {
            Some(u) if self.lower > 0.0 => (self.lower * u).sqrt(),
            Some(u) => 0.5 * (self.lower + u),
            None => 2.0 * self.lower.max(f64::MIN_POSITIVE),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct CertInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
}

/// The Φ-shell `r1 < Φ(u) < r2` in which the guaranteed minimizer lives.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct Shell {
    pub r1: f64,
    pub r2: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct NormBounds {
    pub lower: f64,
    pub upper: f64,
}

/// A recorded `a_d(c)` evaluation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdValue {
    pub at_c: f64,
    pub value: f64,
}

/// Per-theorem verdicts plus the λ-interval and localization data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificationReport {
    pub theorem: TheoremId,
    pub inputs: CertInputs,
    pub constants: DerivedConstants,
    pub conditions: Vec<ConditionResult>,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<LambdaInterval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_bounds: Option<NormBounds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shell: Option<Shell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dhat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub ad_values: Vec<AdValue>,
}

impl CertificationReport {
    pub fn failed_conditions(&self) -> Vec<&ConditionResult> {
        self.conditions
            .iter()
            .filter(|c| c.gating && !c.holds)
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BallMaxOptions {
    pub grid: usize,
    pub refine_iters: usize,
}

impl Default for BallMaxOptions {
    fn default() -> Self {
        BallMaxOptions {
            grid: 4096,
            refine_iters: 64,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CertifyOptions {
    pub growth: GrowthCheckOptions,
    pub ball: BallMaxOptions,
}

/// Global maximum of `F(k, ·)` over `[-c, c]`: dense grid plus golden-section
/// refinement on the best brackets, guaranteed at least
/// `max(F(k,-c), F(k,0), F(k,c))`. For a separable nonnegative `g` the
/// analytic shortcut `max = beta(k) G(c)` is used and cross-checked against
/// the grid.
pub fn max_f_on_ball(
    inst: &ProblemInstance,
    k: usize,
    c: f64,
    opts: BallMaxOptions,
) -> Result<f64, CertifyError> {
    if c == 0.0 {
        return Ok(inst.primitive(k, 0.0)?);
    }
    if let Some(sep) = inst.nonlinearity().separable_form() {
        let nonneg = (0..=128).all(|i| {
            let x = -c + 2.0 * c * i as f64 / 128.0;
            sep.g(x) >= 0.0
        });
        if nonneg {
            // g >= 0 makes G nondecreasing, so the max over [-c, c] is G(c).
            let shortcut = sep.beta(k) * sep.big_g(c)?;
            let mut coarse = f64::NEG_INFINITY;
            for i in 0..=128 {
                let x = -c + 2.0 * c * i as f64 / 128.0;
                coarse = coarse.max(inst.primitive(k, x)?);
            }
            let tol = 1e-9 * shortcut.abs().max(1e-300);
            if coarse <= shortcut + tol {
                return Ok(shortcut.max(coarse));
            }
            // fall through to the grid search if the cross-check disagrees
        }
    }
    let n = opts.grid.max(8);
    let mut best = f64::NEG_INFINITY;
    let mut values = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let x = -c + 2.0 * c * i as f64 / n as f64;
        let v = inst.primitive(k, x)?;
        values.push((x, v));
        best = best.max(v);
    }
    // refine around interior local maxima
    let mut brackets: Vec<(f64, f64)> = Vec::new();
    for i in 1..values.len() - 1 {
        if values[i].1 >= values[i - 1].1 && values[i].1 >= values[i + 1].1 {
            brackets.push((values[i - 1].0, values[i + 1].0));
        }
    }
    brackets.sort_by(|a, b| {
        let fa = inst.primitive(k, 0.5 * (a.0 + a.1)).unwrap_or(f64::NEG_INFINITY);
        let fb = inst.primitive(k, 0.5 * (b.0 + b.1)).unwrap_or(f64::NEG_INFINITY);
        fb.partial_cmp(&fa).unwrap_or(std::cmp::Ordering::Equal)
    });
    for (lo, hi) in brackets.into_iter().take(8) {
        let (_, v) = golden_max(
            |x| inst.primitive(k, x).unwrap_or(f64::NEG_INFINITY),
            lo,
            hi,
            opts.refine_iters,
        );
        best = best.max(v);
    }
    let ends = inst
        .primitive(k, -c)?
        .max(inst.primitive(k, 0.0)?)
        .max(inst.primitive(k, c)?);
    Ok(best.max(ends))
}

/// Σ_{k=1}^{T} max_{|ξ|<=c} F(k, ξ).
pub fn sum_max_f_on_ball(
    inst: &ProblemInstance,
    c: f64,
    opts: BallMaxOptions,
) -> Result<f64, CertifyError> {
    let mut sum = 0.0;
    for k in 1..=inst.t() {
        sum += max_f_on_ball(inst, k, c, opts)?;
    }
    Ok(sum)
}

/// Σ_{k=1}^{T} F(k, d).
pub fn sum_f_at(inst: &ProblemInstance, d: f64) -> Result<f64, CertifyError> {
    let mut sum = 0.0;
    for k in 1..=inst.t() {
        sum += inst.primitive(k, d)?;
    }
    Ok(sum)
}

/// The comparison quotient
///
/// ```text
/// a_d(c) = ( Σ max_{|ξ|<=c} F(k,ξ) - Σ F(k,d) ) / ( (cK)^{p+}/p+ - d^{p-} A / p- )
/// ```
pub fn a_d(
    inst: &ProblemInstance,
    dc: &DerivedConstants,
    d: f64,
    c: f64,
    opts: BallMaxOptions,
) -> Result<f64, CertifyError> {
    let num = sum_max_f_on_ball(inst, c, opts)? - sum_f_at(inst, d)?;
    let den = abs_pow(c * dc.k, dc.p_plus) / dc.p_plus - abs_pow(d, dc.p_minus) / dc.p_minus * dc.a;
    if den.abs() < 1e-300 {
        return Err(CertifyError::DegenerateDenominator { denominator: den });
    }
    Ok(num / den)
}

/// The three strict inequalities of the comparison condition
///
/// ```text
/// (K/A^{1/p+}) c1 < d < (p- K^{p+} / (p+ A))^{1/p-} c2^{p+/p-} < (p-/(p+ A))^{1/p-}
/// ```
pub fn check_in2(dc: &DerivedConstants, c1: f64, d: f64, c2: f64) -> Vec<ConditionResult> {
    let left = dc.k / dc.a.powf(1.0 / dc.p_plus) * c1;
    let mid = (dc.p_minus * dc.k.powf(dc.p_plus) / (dc.p_plus * dc.a)).powf(1.0 / dc.p_minus)
        * c2.powf(dc.p_plus / dc.p_minus);
    let right = (dc.p_minus / (dc.p_plus * dc.a)).powf(1.0 / dc.p_minus);
    vec![
        strict_less("in2.left", left, d, true),
        strict_less("in2.mid", d, mid, true),
        strict_less("in2.right", mid, right, true),
    ]
}

/// `d̂ = w(0) d^{p(0)}/p(0) + w(T) d^{p(T)}/p(T) + Σ q(k) d^{p(k)}/p(k)`;
/// equals `Φ(v̄(d))`.
pub fn dhat(inst: &ProblemInstance, d: f64) -> f64 {
    let t = inst.t();
    let mut sum = inst.w(0) * abs_pow(d, inst.p(0)) / inst.p(0)
        + inst.w(t) * abs_pow(d, inst.p(t)) / inst.p(t);
    for k in 1..=t {
        sum += inst.q(k) * abs_pow(d, inst.p(k)) / inst.p(k);
    }
    sum
}

struct ReportBuilder {
    theorem: TheoremId,
    inputs: CertInputs,
    constants: DerivedConstants,
    conditions: Vec<ConditionResult>,
    ad_values: Vec<AdValue>,
}

impl ReportBuilder {
    fn new(theorem: TheoremId, inputs: CertInputs, constants: DerivedConstants) -> Self {
        ReportBuilder {
            theorem,
            inputs,
            constants,
            conditions: Vec::new(),
            ad_values: Vec::new(),
        }
    }

    fn push(&mut self, c: ConditionResult) {
        self.conditions.push(c);
    }

    fn certified(&self) -> bool {
        self.conditions.iter().all(|c| !c.gating || c.holds)
    }

    fn finish(self) -> CertificationReport {
        let certified = self.certified();
        CertificationReport {
            theorem: self.theorem,
            inputs: self.inputs,
            constants: self.constants,
            conditions: self.conditions,
            certified,
            interval: None,
            norm_bounds: None,
            sup_bound: None,
            shell: None,
            dhat: None,
            r: None,
            ad_values: self.ad_values,
        }
    }
}

fn growth_conditions(
    inst: &ProblemInstance,
    gc: &GrowthCertificate,
    dc: &DerivedConstants,
    opts: &CertifyOptions,
) -> Result<Vec<ConditionResult>, CertifyError> {
    let mut out = Vec::new();
    out.push(strict_less(
        "F1.alpha-range",
        2.0 - 1e-15,
        gc.alpha_minus() + 1e-15,
        true,
    ));
    out.push(strict_less(
        "F1.subcritical",
        gc.alpha_plus(),
        dc.p_minus,
        true,
    ));
    let verdict = check_growth(inst, gc, opts.growth)?;
    let (holds, detail) = match &verdict {
        GrowthVerdict::Holds => (true, "holds on the probe grid and at its extremes".to_string()),
        GrowthVerdict::Violated { k, t, excess } => (
            false,
            format!("violated at k={k}, t={t:e} (excess {excess:e})"),
        ),
        GrowthVerdict::UnverifiableBeyondProbeRange { reason } => {
            (false, format!("unverifiable beyond probe range: {reason}"))
        }
    };
    out.push(ConditionResult {
        name: "F1.growth".into(),
        holds,
        margin: f64::NAN,
        gating: true,
        detail,
    });
    Ok(out)
}

fn validated(inst: &ProblemInstance) -> Result<(), CertifyError> {
    let violations = validate_instance(inst);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CertifyError::InvalidInstance(violations))
    }
}

/// Existence of one nontrivial solution localized in the shell
/// `r1 < Φ(u) < r2`, for λ in `(1/a_d(c1), 1/a_d(c2))`.
pub fn certify_t2(
    inst: &ProblemInstance,
    gc: &GrowthCertificate,
    c1: f64,
    c2: f64,
    d: f64,
    opts: &CertifyOptions,
) -> Result<CertificationReport, CertifyError> {
    validated(inst)?;
    let dc = derived_constants(inst);
    let inputs = CertInputs {
        c1: Some(c1),
        c2: Some(c2),
        d: Some(d),
        c0: Some(gc.c0),
        ..Default::default()
    };
    let mut rb = ReportBuilder::new(TheoremId::T3_2, inputs, dc);
    rb.push(ConditionResult {
        name: "inputs".into(),
        holds: c1 >= 0.0 && c2 > 0.0 && d > 0.0,
        margin: f64::NAN,
        gating: true,
        detail: format!("c1={c1:e} >= 0, c2={c2:e} > 0, d={d:e} > 0"),
    });
    for c in growth_conditions(inst, gc, &dc, opts)? {
        rb.push(c);
    }
    for c in check_in2(&dc, c1, d, c2) {
        rb.push(c);
    }
    let ad_c1 = a_d(inst, &dc, d, c1, opts.ball)?;
    let ad_c2 = a_d(inst, &dc, d, c2, opts.ball)?;
    rb.ad_values.push(AdValue { at_c: c1, value: ad_c1 });
    rb.ad_values.push(AdValue { at_c: c2, value: ad_c2 });
    rb.push(strict_less("F2", ad_c2, ad_c1, true));
    rb.push(strict_less("ad-c1-positive", 0.0, ad_c1, true));
    let mut report = rb.finish();
    if report.certified {
        report.interval = Some(LambdaInterval {
            lower: 1.0 / ad_c1,
            upper: if ad_c2 > 0.0 { Some(1.0 / ad_c2) } else { None },
        });
        report.norm_bounds = Some(NormBounds {
            lower: (dc.p_minus / dc.p_plus).powf(1.0 / dc.p_minus)
                * abs_pow(c1 * dc.k, dc.p_plus / dc.p_minus),
            upper: c2 * (2.0 * dc.t as f64 + 2.0).powf((1.0 - dc.p_minus) / dc.p_minus),
        });
        report.shell = Some(Shell {
            r1: abs_pow(c1 * dc.k, dc.p_plus) / dc.p_plus,
            r2: abs_pow(c2 * dc.k, dc.p_plus) / dc.p_plus,
        });
    }
    Ok(report)
}

fn side_conditions(dc: &DerivedConstants, c: f64, d: f64) -> (ConditionResult, ConditionResult) {
    // A p+ d^{p-} < K^{p+} p- c^{p+} < p-
    let lhs = dc.a * dc.p_plus * abs_pow(d, dc.p_minus);
    let mid = abs_pow(c * dc.k, dc.p_plus) * dc.p_minus;
    (
        strict_less("side.left", lhs, mid, true),
        strict_less("side.right", mid, dc.p_minus, true),
    )
}

/// Existence with the sup-norm localization `‖u0‖∞ < c`, for λ in the
/// explicit interval built from `Σ F(k,d)` and `Σ max F`.
pub fn certify_t3(
    inst: &ProblemInstance,
    gc: &GrowthCertificate,
    c: f64,
    d: f64,
    opts: &CertifyOptions,
) -> Result<CertificationReport, CertifyError> {
    validated(inst)?;
    let dc = derived_constants(inst);
    let inputs = CertInputs {
        c: Some(c),
        d: Some(d),
        c0: Some(gc.c0),
        ..Default::default()
    };
    let mut rb = ReportBuilder::new(TheoremId::T3_4, inputs, dc);
    rb.push(ConditionResult {
        name: "inputs".into(),
        holds: c > 0.0 && d > 0.0,
        margin: f64::NAN,
        gating: true,
        detail: format!("c={c:e} > 0, d={d:e} > 0"),
    });
    for cond in growth_conditions(inst, gc, &dc, opts)? {
        rb.push(cond);
    }
    let (s1, s2) = side_conditions(&dc, c, d);
    rb.push(s1);
    rb.push(s2);
    let sum_fd = sum_f_at(inst, d)?;
    rb.push(strict_less("Fd-positive", 0.0, sum_fd, true));
    let sum_max = sum_max_f_on_ball(inst, c, opts.ball)?;
    let f3_rhs = dc.p_minus * abs_pow(c * dc.k, dc.p_plus)
        / (dc.p_plus * abs_pow(d, dc.p_minus) * dc.a)
        * sum_fd;
    rb.push(strict_less("F3", sum_max, f3_rhs, true));
    // the proof's reduction: a_d(c) < a_d(0); implied by F3 and the side
    // condition, recorded for the report
    let ad_c = a_d(inst, &dc, d, c, opts.ball)?;
    let ad_0 = a_d(inst, &dc, d, 0.0, opts.ball)?;
    rb.ad_values.push(AdValue { at_c: c, value: ad_c });
    rb.ad_values.push(AdValue { at_c: 0.0, value: ad_0 });
    rb.push(strict_less("ad-implication", ad_c, ad_0, false));
    let mut report = rb.finish();
    if report.certified {
        let r2 = abs_pow(c * dc.k, dc.p_plus) / dc.p_plus;
        let lower = abs_pow(d, dc.p_minus) * dc.a / (dc.p_minus * sum_fd);
        let upper_num = r2 - abs_pow(d, dc.p_minus) * dc.a / dc.p_minus;
        let upper_den = sum_max - sum_fd;
        report.interval = Some(LambdaInterval {
            lower,
            upper: if upper_den > 0.0 {
                Some(upper_num / upper_den)
            } else {
                None
            },
        });
        report.sup_bound = Some(c);
        report.shell = Some(Shell { r1: 0.0, r2 });
    }
    Ok(report)
}

/// Separable variant: `f(k,x) = beta(k) g(x)` with the interval expressed
/// through `G` and `Σ beta`.
pub fn certify_t3_separable(
    inst: &ProblemInstance,
    gc: &GrowthCertificate,
    c: f64,
    d: f64,
    opts: &CertifyOptions,
) -> Result<CertificationReport, CertifyError> {
    validated(inst)?;
    let sep = inst
        .nonlinearity()
        .separable_form()
        .ok_or(CertifyError::NotSeparable)?
        .clone();
    let dc = derived_constants(inst);
    let inputs = CertInputs {
        c: Some(c),
        d: Some(d),
        c0: Some(gc.c0),
        ..Default::default()
    };
    let mut rb = ReportBuilder::new(TheoremId::T3_5, inputs, dc);
    rb.push(ConditionResult {
        name: "inputs".into(),
        holds: c > 0.0 && d > 0.0,
        margin: f64::NAN,
        gating: true,
        detail: format!("c={c:e} > 0, d={d:e} > 0"),
    });
    for cond in growth_conditions(inst, gc, &dc, opts)? {
        rb.push(cond);
    }
    let (s1, s2) = side_conditions(&dc, c, d);
    rb.push(s1);
    rb.push(s2);
    let g_d = sep.big_g(d).map_err(CertifyError::Problem)?;
    rb.push(strict_less("Gd-positive", 0.0, g_d, true));
    let beta_sum = sep.beta_sum();
    rb.push(strict_less("beta-positive", 0.0, beta_sum, true));
    let max_g = max_g_on_ball(&sep, c, opts.ball)?;
    let f4_rhs = dc.p_minus * abs_pow(c * dc.k, dc.p_plus)
        / (dc.p_plus * abs_pow(d, dc.p_minus) * dc.a)
        * g_d;
    rb.push(strict_less("F4", max_g, f4_rhs, true));
    let mut report = rb.finish();
    if report.certified {
        let r2 = abs_pow(c * dc.k, dc.p_plus) / dc.p_plus;
        let lower = abs_pow(d, dc.p_minus) * dc.a / (dc.p_minus * g_d * beta_sum);
        let upper_num = r2 - abs_pow(d, dc.p_minus) * dc.a / dc.p_minus;
        let upper_den = (max_g - g_d) * beta_sum;
        report.interval = Some(LambdaInterval {
            lower,
            upper: if upper_den > 0.0 {
                Some(upper_num / upper_den)
            } else {
                None
            },
        });
        report.sup_bound = Some(c);
        report.shell = Some(Shell { r1: 0.0, r2 });
    }
    Ok(report)
}

fn max_g_on_ball(
    sep: &crate::problem::Separable,
    c: f64,
    opts: BallMaxOptions,
) -> Result<f64, CertifyError> {
    if c == 0.0 {
        return Ok(0.0);
    }
    let nonneg = (0..=128).all(|i| {
        let x = -c + 2.0 * c * i as f64 / 128.0;
        sep.g(x) >= 0.0
    });
    let big_g = |x: f64| sep.big_g(x).unwrap_or(f64::NEG_INFINITY);
    if nonneg {
        return Ok(sep.big_g(c).map_err(CertifyError::Problem)?);
    }
    let n = opts.grid.max(8);
    let mut best = f64::NEG_INFINITY;
    let mut prev2 = f64::NEG_INFINITY;
    let mut prev = f64::NEG_INFINITY;
    let mut best_bracket = None;
    for i in 0..=n {
        let x = -c + 2.0 * c * i as f64 / n as f64;
        let v = big_g(x);
        if i >= 2 && prev >= prev2 && prev >= v && prev >= best {
            best_bracket = Some((-c + 2.0 * c * (i - 2) as f64 / n as f64, x));
        }
        best = best.max(v);
        prev2 = prev;
        prev = v;
    }
    if let Some((lo, hi)) = best_bracket {
        let (_, v) = golden_max(big_g, lo, hi, opts.refine_iters);
        best = best.max(v);
    }
    Ok(best.max(big_g(-c)).max(big_g(0.0)).max(big_g(c)))
}

/// The special-case statement for `w = q = beta = 1`, `p(k) = k+3`: checks
/// the explicit power-form inequalities and emits the same interval as the
/// separable certification.
pub fn certify_t1_1(
    inst: &ProblemInstance,
    gc: &GrowthCertificate,
    c: f64,
    d: f64,
    opts: &CertifyOptions,
) -> Result<CertificationReport, CertifyError> {
    validated(inst)?;
    let dc = derived_constants(inst);
    let t = inst.t();
    let tf = t as f64;
    let inputs = CertInputs {
        c: Some(c),
        d: Some(d),
        c0: Some(gc.c0),
        ..Default::default()
    };
    let mut rb = ReportBuilder::new(TheoremId::T1_1, inputs, dc);

    let mut shape_ok = inst.nonlinearity().separable_form().is_some();
    for k in 0..=t + 1 {
        if (inst.p(k) - (k as f64 + 3.0)).abs() > 1e-12 {
            shape_ok = false;
        }
    }
    for k in 0..=t {
        if inst.w(k) != 1.0 {
            shape_ok = false;
        }
    }
    for k in 1..=t + 1 {
        if inst.q(k) != 1.0 {
            shape_ok = false;
        }
    }
    if let Some(sep) = inst.nonlinearity().separable_form() {
        for k in 1..=t {
            if (sep.beta(k) - 1.0).abs() > 1e-12 {
                shape_ok = false;
            }
        }
    }
    rb.push(ConditionResult {
        name: "shape".into(),
        holds: shape_ok,
        margin: f64::NAN,
        gating: true,
        detail: "w = q = beta = 1 and p(k) = k+3".into(),
    });
    if !shape_ok {
        return Ok(rb.finish());
    }
    let sep = inst.nonlinearity().separable_form().unwrap().clone();

    rb.push(ConditionResult {
        name: "inputs".into(),
        holds: c > 0.0 && d > 0.0,
        margin: f64::NAN,
        gating: true,
        detail: format!("c={c:e} > 0, d={d:e} > 0"),
    });
    for cond in growth_conditions(inst, gc, &dc, opts)? {
        rb.push(cond);
    }

    // d^3 < (3 / ((T+2)(T+4)(2T+2)^{T+3})) c^{T+4} < 3 / ((T+2)(T+4))
    let denom = (tf + 2.0) * (tf + 4.0) * (2.0 * tf + 2.0).powf(tf + 3.0);
    let middle = 3.0 * c.powf(tf + 4.0) / denom;
    rb.push(strict_less("1.3.left", d.powi(3), middle, true));
    rb.push(strict_less(
        "1.3.right",
        middle,
        3.0 / ((tf + 2.0) * (tf + 4.0)),
        true,
    ));

    let g_c = sep.big_g(c).map_err(CertifyError::Problem)?;
    let g_d = sep.big_g(d).map_err(CertifyError::Problem)?;
    rb.push(strict_less("Gd-positive", 0.0, g_d, true));
    // G(c)/c^{T+4} < (3 / ((T+4)(T+2)(2T+2)^{T+3})) G(d)/d^3
    rb.push(strict_less(
        "1.4",
        g_c / c.powf(tf + 4.0),
        3.0 / denom * g_d / d.powi(3),
        true,
    ));
    let mut report = rb.finish();
    if report.certified {
        let lower = d.powi(3) * (tf + 2.0) / (3.0 * tf * g_d);
        let upper = (3.0 * c.powf(tf + 4.0)
            - d.powi(3) * (tf + 4.0) * (tf + 2.0) * (2.0 * tf + 2.0).powf(tf + 3.0))
            / (3.0 * tf * (tf + 4.0) * (2.0 * tf + 2.0).powf(tf + 3.0) * (g_c - g_d));
        report.interval = Some(LambdaInterval {
            lower,
            upper: Some(upper),
        });
        report.sup_bound = Some(c);
        report.shell = Some(Shell {
            r1: 0.0,
            r2: abs_pow(c * dc.k, dc.p_plus) / dc.p_plus,
        });
    }
    Ok(report)
}

/// Unbounded-interval existence `λ in (d̂ / Σ F(k,d), ∞)` under the growth
/// and size condition (F5). Also probes coercivity of `I_λ` numerically
/// along the `v̄`-direction.
pub fn certify_t4(
    inst: &ProblemInstance,
    gc: &GrowthCertificate,
    c3: f64,
    d: f64,
    opts: &CertifyOptions,
) -> Result<CertificationReport, CertifyError> {
    validated(inst)?;
    let dc = derived_constants(inst);
    let inputs = CertInputs {
        c3: Some(c3),
        d: Some(d),
        c0: Some(gc.c0),
        ..Default::default()
    };
    let mut rb = ReportBuilder::new(TheoremId::T3_8, inputs, dc);
    rb.push(ConditionResult {
        name: "inputs".into(),
        holds: c3 > 0.0 && d > 0.0,
        margin: f64::NAN,
        gating: true,
        detail: format!("c3={c3:e} > 0, d={d:e} > 0"),
    });
    for cond in growth_conditions(inst, gc, &dc, opts)? {
        rb.push(cond);
    }
    // 1/A^{1/p+} > d > c3 K / A^{1/p+}
    let a_root = dc.a.powf(1.0 / dc.p_plus);
    rb.push(strict_less("side.left", d, 1.0 / a_root, true));
    rb.push(strict_less("side.right", c3 * dc.k / a_root, d, true));
    let dh = dhat(inst, d);
    let sum_fd = sum_f_at(inst, d)?;
    rb.push(strict_less("Fd-positive", 0.0, sum_fd, true));
    let alpha_term = abs_pow(c3, gc.alpha_plus()).max(abs_pow(c3, gc.alpha_minus()));
    let f5_lhs =
        dc.p_plus / abs_pow(c3 * dc.k, dc.p_plus) * inst.t() as f64 * gc.c0 * (1.0 + alpha_term);
    let f5_rhs = sum_fd / dh;
    rb.push(strict_less("F5", f5_lhs, f5_rhs, true));

    // numeric coercivity probe along the v̄-direction at λ just above the
    // interval's lower endpoint
    if sum_fd > 0.0 && dh > 0.0 {
        let lambda = 2.0 * dh / sum_fd;
        let mut increasing = true;
        let mut prev = f64::NEG_INFINITY;
        let mut detail = String::new();
        let n = 25;
        for i in 0..=n {
            let s = 10f64.powf(6.0 * i as f64 / n as f64);
            let v = crate::problem::build_test_function(inst, d * s);
            let e = crate::functional::energy_value(inst, &v, lambda)?;
            if i > n - 5 && e <= prev {
                increasing = false;
                detail = format!("I not increasing at scale {s:e}");
            }
            prev = e;
        }
        rb.push(ConditionResult {
            name: "coercivity-probe".into(),
            holds: increasing,
            margin: f64::NAN,
            gating: true,
            detail: if increasing {
                format!("I_lambda increasing along v-bar rays at lambda={lambda:e}")
            } else {
                detail
            },
        });
    }

    let mut report = rb.finish();
    report.dhat = Some(dh);
    report.r = Some(abs_pow(c3 * dc.k, dc.p_plus) / dc.p_plus);
    if report.certified {
        report.interval = Some(LambdaInterval {
            lower: dh / sum_fd,
            upper: None,
        });
    }
    Ok(report)
}

/// Three-solutions corollary: restricts the T3.8 interval to the bounded
/// `Λ_r = (d̂/ΣF(k,d), r / (T c0 (1 + max{c3^{α+}, c3^{α-}})))`.
pub fn certify_c10(
    inst: &ProblemInstance,
    gc: &GrowthCertificate,
    c3: f64,
    d: f64,
    opts: &CertifyOptions,
) -> Result<CertificationReport, CertifyError> {
    let t4 = certify_t4(inst, gc, c3, d, opts)?;
    let dc = t4.constants;
    let mut report = t4;
    report.theorem = TheoremId::C3_9;
    let r = report.r.expect("t4 always records r");
    let alpha_term = abs_pow(c3, gc.alpha_plus()).max(abs_pow(c3, gc.alpha_minus()));
    let upper = r / (dc.t as f64 * gc.c0 * (1.0 + alpha_term));
    let dh = report.dhat.expect("t4 always records dhat");
    let sum_fd = sum_f_at(inst, d)?;
    let lower = if sum_fd > 0.0 { dh / sum_fd } else { f64::INFINITY };
    let nonempty = strict_less("interval-nonempty", lower, upper, true);
    report.conditions.push(nonempty);
    report.certified = report
        .conditions
        .iter()
        .all(|c| !c.gating || c.holds);
    report.interval = if report.certified {
        Some(LambdaInterval {
            lower,
            upper: Some(upper),
        })
    } else {
        None
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::functional::big_phi;
    use crate::problem::{build_test_function, Nonlinearity, ProblemInstance};
    use std::sync::Arc;

    fn quick_opts() -> CertifyOptions {
        CertifyOptions {
            growth: GrowthCheckOptions {
                points: 4000,
                ..Default::default()
            },
            ball: BallMaxOptions::default(),
        }
    }

    #[test]
    fn ad_on_example_33_matches_oracle_values() {
        let inst = examples::example_3_3_instance();
        let dc = derived_constants(&inst);
        let d = 1e-5;
        let ad_c1 = a_d(&inst, &dc, d, 1e-9, BallMaxOptions::default()).unwrap();
        let ad_c2 = a_d(&inst, &dc, d, 1e9, BallMaxOptions::default()).unwrap();
        // independently recomputed at 50-digit precision
        assert!((ad_c1 - 30898916.775897742).abs() / 30898916.775897742 < 1e-11, "{ad_c1}");
        assert!((ad_c2 - 8.98818401992298450e-3).abs() / 8.99e-3 < 1e-11, "{ad_c2}");
    }

    #[test]
    fn ad_at_zero_ball_is_the_closed_form() {
        let inst = examples::example_3_7_instance();
        let dc = derived_constants(&inst);
        let d = 0.1;
        let got = a_d(&inst, &dc, d, 0.0, BallMaxOptions::default()).unwrap();
        let sum_fd = sum_f_at(&inst, d).unwrap();
        let want = dc.p_minus * sum_fd / (abs_pow(d, dc.p_minus) * dc.a);
        assert!((got + want).abs() > 0.0); // sign: a_d(0) = -ΣF / (d^{p-}A/p-) = ... below
        // a_d(0) = (0 - ΣF(k,d)) / (0 - d^{p-}A/p-) = p- ΣF / (d^{p-} A)
        assert!((got - want).abs() / want < 1e-14, "{got} vs {want}");
    }

    #[test]
    fn ad_numerator_nonnegative_when_ball_covers_d() {
        let inst = examples::example_3_7_instance();
        let d = 0.1;
        for c in [0.1, 0.5, 17.1] {
            let n = sum_max_f_on_ball(&inst, c, BallMaxOptions::default()).unwrap()
                - sum_f_at(&inst, d).unwrap();
            assert!(n >= 0.0, "c={c}: numerator {n}");
        }
    }

    #[test]
    fn degenerate_denominator_is_an_error() {
        let inst = examples::example_3_7_instance();
        let dc = derived_constants(&inst);
        // (cK)^{p+}/p+ = d^{p-} A / p- exactly, by construction
        let d = 0.1;
        let target = abs_pow(d, dc.p_minus) / dc.p_minus * dc.a;
        let c = (target * dc.p_plus).powf(1.0 / dc.p_plus) / dc.k;
        let r = a_d(&inst, &dc, d, c, BallMaxOptions::default());
        match r {
            Err(CertifyError::DegenerateDenominator { .. }) => {}
            other => {
                // allowed to miss exact cancellation by float rounding; then
                // the quotient must be enormous
                let v = other.unwrap();
                assert!(v.abs() > 1e9, "expected near-degenerate quotient, got {v}");
            }
        }
    }

    #[test]
    fn max_f_on_ball_basics() {
        let inst = examples::example_3_7_instance();
        // c = 0 gives F(k,0) = 0
        assert_eq!(max_f_on_ball(&inst, 1, 0.0, BallMaxOptions::default()).unwrap(), 0.0);
        // nonnegative separable g: max over [-c,c] is G(c)
        let c = 2.0;
        let got = max_f_on_ball(&inst, 3, c, BallMaxOptions::default()).unwrap();
        let want = (400.0 * c).atan() / 400.0;
        assert!((got - want).abs() < 1e-14);
        // monotone-even primitive: endpoint max
        let nl = Nonlinearity::from_fn(Arc::new(|_, x: f64| 2.0 * x))
            .with_primitive(Arc::new(|_, t: f64| t * t));
        let inst2 = ProblemInstance::new(2, vec![1.0; 3], vec![1.0; 3], vec![2.0; 4], nl, None).unwrap();
        let got = max_f_on_ball(&inst2, 1, 2.0, BallMaxOptions::default()).unwrap();
        assert!((got - 4.0).abs() < 1e-12);
    }

    #[test]
    fn max_f_on_ball_finds_interior_peak() {
        // F(k,t) = -(t^2 - 1)^2 has interior maxima at t = ±1, value 0,
        // endpoints lower.
        let nl = Nonlinearity::from_fn(Arc::new(|_, x: f64| -4.0 * x * (x * x - 1.0)))
            .with_primitive(Arc::new(|_, t: f64| -(t * t - 1.0).powi(2) + 1.0));
        let inst = ProblemInstance::new(2, vec![1.0; 3], vec![1.0; 3], vec![2.0; 4], nl, None).unwrap();
        let got = max_f_on_ball(&inst, 1, 3.0, BallMaxOptions::default()).unwrap();
        assert!((got - 1.0).abs() < 1e-10, "{got}");
    }

    #[test]
    fn certify_t2_example_33() {
        let inst = examples::example_3_3_instance();
        let gc = examples::example_3_3_growth();
        let report = certify_t2(&inst, &gc, 1e-9, 1e9, 1e-5, &quick_opts()).unwrap();
        assert!(report.certified, "failed: {:?}", report.failed_conditions());
        let interval = report.interval.unwrap();
        assert!((interval.lower - 3.2363594078483543e-8).abs() / 3.236e-8 < 1e-10);
        assert!((interval.upper.unwrap() - 111.25717917917846).abs() / 111.257 < 1e-10);
        let nb = report.norm_bounds.unwrap();
        assert!((nb.lower - 8.896115924449449e-32).abs() / 8.896e-32 < 1e-10);
        assert!((nb.upper - 1.2736542412069941e8).abs() / 1.27e8 < 1e-10);
        let shell = report.shell.unwrap();
        assert!((shell.r2 - 2.3468214328855738e-4).abs() / 2.3468e-4 < 1e-10);
    }

    #[test]
    fn certify_t2_rejects_equal_c1_c2() {
        let inst = examples::example_3_3_instance();
        let gc = examples::example_3_3_growth();
        let report = certify_t2(&inst, &gc, 1e-9, 1e-9, 1e-5, &quick_opts()).unwrap();
        assert!(!report.certified);
        assert!(report
            .failed_conditions()
            .iter()
            .any(|c| c.name.starts_with("in2")));
        assert!(report.interval.is_none());
    }

    #[test]
    fn in2_boundary_case_fails_strictly() {
        let inst = examples::example_3_3_instance();
        let dc = derived_constants(&inst);
        let d = 1e-5;
        let c1 = d * dc.a.powf(1.0 / dc.p_plus) / dc.k;
        let conds = check_in2(&dc, c1, d, 1e9);
        let left = &conds[0];
        assert!(!left.holds, "boundary case must fail the strict comparison");
        assert!(left.margin.abs() < 1e-18);
    }

    #[test]
    fn certify_t2_flat_primitive_fails_f2() {
        // f = 0 below x=1, so F is flat near small d: a_d(c1) = 0 and the
        // comparison condition cannot hold.
        let nl = Nonlinearity::from_fn(Arc::new(|_, x: f64| {
            if x > 1.0 {
                (x - 1.0).powi(3)
            } else {
                0.0
            }
        }))
        .with_primitive(Arc::new(|_, t: f64| {
            if t > 1.0 {
                (t - 1.0).powi(4) / 4.0
            } else {
                0.0
            }
        }));
        let inst =
            ProblemInstance::new(3, vec![1.0; 4], vec![1.0; 4], vec![3.0; 5], nl, None).unwrap();
        let gc = GrowthCertificate::uniform(1.0, 2.0, 3);
        let report = certify_t2(&inst, &gc, 0.01, 2.0, 0.1, &quick_opts()).unwrap();
        assert!(!report.certified);
        let names: Vec<&str> = report
            .failed_conditions()
            .iter()
            .map(|c| c.name.as_str())
            .collect();
        assert!(
            names.contains(&"F2") || names.contains(&"ad-c1-positive"),
            "{names:?}"
        );
    }

    #[test]
    fn certify_t1_1_example_37() {
        let inst = examples::example_3_7_instance();
        let gc = examples::example_3_7_growth();
        let report = certify_t1_1(&inst, &gc, 17.1, 0.1, &quick_opts()).unwrap();
        assert!(report.certified, "failed: {:?}", report.failed_conditions());
        let interval = report.interval.unwrap();
        assert!(
            (interval.lower - 0.10350617240705334).abs() / 0.1035 < 1e-9,
            "{}",
            interval.lower
        );
        assert!(
            (interval.upper.unwrap() - 67.87674577386252).abs() / 67.87 < 1e-9,
            "{:?}",
            interval.upper
        );
        assert_eq!(report.sup_bound, Some(17.1));
    }

    #[test]
    fn t1_1_shape_gate() {
        let inst = examples::example_3_3_instance();
        let gc = examples::example_3_3_growth();
        let report = certify_t1_1(&inst, &gc, 17.1, 0.1, &quick_opts()).unwrap();
        assert!(!report.certified);
        assert_eq!(report.conditions[0].name, "shape");
        assert!(!report.conditions[0].holds);
    }

    #[test]
    fn t3_separable_t3_and_t1_1_agree_on_example_37() {
        let inst = examples::example_3_7_instance();
        let gc = examples::example_3_7_growth();
        let opts = quick_opts();
        let a = certify_t3(&inst, &gc, 17.1, 0.1, &opts).unwrap();
        let b = certify_t3_separable(&inst, &gc, 17.1, 0.1, &opts).unwrap();
        let c = certify_t1_1(&inst, &gc, 17.1, 0.1, &opts).unwrap();
        for r in [&a, &b, &c] {
            assert!(r.certified);
        }
        let (ia, ib, ic) = (
            a.interval.unwrap(),
            b.interval.unwrap(),
            c.interval.unwrap(),
        );
        assert!((ia.lower - ib.lower).abs() / ib.lower < 1e-12);
        assert!((ib.lower - ic.lower).abs() / ic.lower < 1e-12);
        assert!((ia.upper.unwrap() - ib.upper.unwrap()).abs() / ib.upper.unwrap() < 1e-12);
        assert!((ib.upper.unwrap() - ic.upper.unwrap()).abs() / ic.upper.unwrap() < 1e-12);
    }

    #[test]
    fn t3_equals_t2_with_degenerate_c1() {
        let inst = examples::example_3_7_instance();
        let gc = examples::example_3_7_growth();
        let opts = quick_opts();
        let t3 = certify_t3(&inst, &gc, 17.1, 0.1, &opts).unwrap();
        let t2 = certify_t2(&inst, &gc, 0.0, 17.1, 0.1, &opts).unwrap();
        assert!(t3.certified && t2.certified);
        let (i3, i2) = (t3.interval.unwrap(), t2.interval.unwrap());
        assert!((i3.lower - i2.lower).abs() / i2.lower < 1e-12);
        assert!((i3.upper.unwrap() - i2.upper.unwrap()).abs() / i2.upper.unwrap() < 1e-12);
    }

    #[test]
    fn t3_with_zero_nonlinearity_fails() {
        let nl = Nonlinearity::from_fn(Arc::new(|_, _| 0.0)).with_primitive(Arc::new(|_, _| 0.0));
        let inst =
            ProblemInstance::new(3, vec![1.0; 4], vec![1.0; 4], vec![3.0; 5], nl, None).unwrap();
        let gc = GrowthCertificate::uniform(1.0, 2.0, 3);
        let report = certify_t3(&inst, &gc, 0.3, 0.1, &quick_opts()).unwrap();
        assert!(!report.certified);
        assert!(report
            .failed_conditions()
            .iter()
            .any(|c| c.name == "Fd-positive"));
    }

    #[test]
    fn dhat_matches_big_phi_of_profile() {
        let inst = examples::example_3_7_instance();
        assert_eq!(dhat(&inst, 0.0), 0.0);
        let want = 3.6051565783320568e-4;
        let got = dhat(&inst, 0.1);
        assert!((got - want).abs() / want < 1e-13);
        for d in [1e-5, 0.1, 0.9, 3.0] {
            let v = build_test_function(&inst, d);
            let phi = big_phi(&inst, &v);
            assert!((dhat(&inst, d) - phi).abs() <= 1e-14 * phi.abs().max(1e-300), "d={d}");
        }
        // unit weights, p = 2: closed form d^2 (T+2) / 2
        let inst2 = examples::constant_rhs_instance(5, 2.0);
        let d = 0.37;
        assert!((dhat(&inst2, d) - d * d * 7.0 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn certify_t4_example_310_is_honest() {
        let inst = examples::example_3_3_instance();
        let gc = examples::example_3_3_growth();
        let report = certify_t4(&inst, &gc, 0.05, 5e-10, &quick_opts()).unwrap();
        // recomputed at 50-digit precision
        let dh = report.dhat.unwrap();
        assert!((dh - 4.333097820078396e-29).abs() / dh < 1e-12);
        let sum_fd = sum_f_at(&inst, 5e-10).unwrap();
        let rhs = sum_fd / dh;
        assert!((rhs - 1.3387090198872766e16).abs() / rhs < 1e-11);
        // the F5 size condition does not hold for these inputs: the left side
        // is ~1.64e51, far above the right side ~1.34e16
        assert!(!report.certified);
        let f5 = report
            .conditions
            .iter()
            .find(|c| c.name == "F5")
            .expect("F5 recorded");
        assert!(!f5.holds);
        // side conditions do hold
        for name in ["side.left", "side.right"] {
            assert!(report.conditions.iter().find(|c| c.name == name).unwrap().holds);
        }
    }

    #[test]
    fn certify_c10_interval_sits_inside_t4s() {
        let inst = examples::example_3_3_instance();
        let gc = examples::example_3_3_growth();
        let t4 = certify_t4(&inst, &gc, 0.05, 5e-10, &quick_opts()).unwrap();
        let c10 = certify_c10(&inst, &gc, 0.05, 5e-10, &quick_opts()).unwrap();
        assert_eq!(c10.theorem, TheoremId::C3_9);
        // Λ_r ⊆ Λ_d: same lower endpoint, finite upper vs unbounded
        let r = t4.r.unwrap();
        let upper = r / (10.0 * gc.c0 * (1.0 + 0.05f64.powi(2)));
        assert!((upper - 6.096273464478319e-52).abs() / upper < 1e-11, "{upper}");
        let lower = t4.dhat.unwrap() / sum_f_at(&inst, 5e-10).unwrap();
        assert!(upper < f64::INFINITY);
        assert!(lower > 0.0);
        // with these printed inputs the bounded interval is empty, and the
        // report says so
        assert!(!c10.certified);
        assert!(c10
            .conditions
            .iter()
            .any(|c| c.name == "interval-nonempty" && !c.holds));
    }

    #[test]
    fn t4_zero_nonlinearity_fails_cleanly() {
        let nl = Nonlinearity::from_fn(Arc::new(|_, _| 0.0)).with_primitive(Arc::new(|_, _| 0.0));
        let inst =
            ProblemInstance::new(3, vec![1.0; 4], vec![1.0; 4], vec![3.0; 5], nl, None).unwrap();
        let gc = GrowthCertificate::uniform(1.0, 2.0, 3);
        let report = certify_t4(&inst, &gc, 0.1, 0.3, &quick_opts()).unwrap();
        assert!(!report.certified);
        assert!(report
            .failed_conditions()
            .iter()
            .any(|c| c.name == "Fd-positive"));
        assert!(report.interval.is_none());
    }

    #[test]
    fn not_separable_is_an_error() {
        let inst = examples::example_3_3_instance();
        let gc = examples::example_3_3_growth();
        match certify_t3_separable(&inst, &gc, 0.05, 1e-5, &quick_opts()) {
            Err(CertifyError::NotSeparable) => {}
            other => panic!("expected NotSeparable, got {other:?}"),
        }
    }

    #[test]
    fn theorem_id_round_trip() {
        for (s, id) in [
            ("T1.1", TheoremId::T1_1),
            ("T3.2", TheoremId::T3_2),
            ("T3.4", TheoremId::T3_4),
            ("T3.5", TheoremId::T3_5),
            ("T3.8", TheoremId::T3_8),
            ("C3.9", TheoremId::C3_9),
        ] {
            assert_eq!(s.parse::<TheoremId>().unwrap(), id);
            assert_eq!(id.to_string(), s);
        }
        assert!("T9.9".parse::<TheoremId>().is_err());
    }

    #[test]
    fn interval_interior_point_and_contains() {
        let i = LambdaInterval {
            lower: 0.1,
            upper: Some(10.0),
        };
        assert!(i.contains(i.interior_point()));
        assert!(!i.contains(0.1));
        let unbounded = LambdaInterval {
            lower: 2.0,
            upper: None,
        };
        assert!(unbounded.contains(1e300));
        assert!(!unbounded.contains(2.0));
        assert!(LambdaInterval {
            lower: 3.0,
            upper: Some(3.0)
        }
        .is_empty());
    }
}
