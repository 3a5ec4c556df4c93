//! Monitors that check recorded pursuit traces and domain geometry against
//! the inequalities the theory promises.

mod geometry;
mod words;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curves::{fit_growth_exponent, window_total_rotation, GrowthFit, PolygonalCurve};
use crate::error::{Error, Result};
use crate::pursuit::PursuitTrace;

pub use geometry::{cat_thinness_sample, first_variation_check, ThinnessOptions};
pub use words::{is_cube_free, thue_morse_word};

pub const SEPARATION_TOL: f64 = 1e-9;
/// Angles near degenerate triangles amplify distance error.
pub const ANGLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Largest violation seen (0 when nothing was violated).
    pub worst: f64,
    pub tolerance: f64,
    /// Step or sample index of the worst case.
    pub index: Option<usize>,
    #[serde(default)]
    pub context: Value,
    /// Why the check could not be evaluated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckReport {
    fn from_violations(name: &str, tolerance: f64, violations: impl IntoIterator<Item = f64>, context: Value) -> Self {
        let mut worst = 0.0;
        let mut index = None;
        for (i, v) in violations.into_iter().enumerate() {
            if v > worst || v.is_nan() {
                worst = v;
                index = Some(i);
            }
        }
        CheckReport {
            name: name.into(),
            passed: worst <= tolerance,
            worst,
            tolerance,
            index,
            context,
            error: None,
        }
    }
}

/// `L_{i+1} <= L_i` at every step.
pub fn check_separation_monotone(trace: &PursuitTrace) -> CheckReport {
    let l = &trace.separation;
    let drift = l.windows(2).map(|w| w[1] - w[0]);
    let telescoped: f64 = trace.steps.iter().map(|s| s.increment).sum();
    let total = l[0] - l[l.len() - 1];
    CheckReport::from_violations(
        "separation_monotone",
        SEPARATION_TOL,
        drift,
        json!({ "steps": trace.steps.len(), "telescoping_error": (telescoped - total).abs() }),
    )
}

/// `pi - beta_i <= alpha_i <= alpha_tilde_i` at every step.
pub fn check_angle_sandwich(trace: &PursuitTrace) -> Result<CheckReport> {
    let mut violations = Vec::with_capacity(trace.steps.len());
    for (i, s) in trace.steps.iter().enumerate() {
        if trace.separation[i + 1] == 0.0 {
            violations.push(0.0);
            continue;
        }
        let (Some(alpha), Some(beta), Some(tilde)) = (s.alpha, s.beta, s.alpha_tilde) else {
            return Err(Error::IncompleteTrace(format!("step {i} is missing angle data")));
        };
        violations.push(((PI - beta) - alpha).max(alpha - tilde));
    }
    Ok(CheckReport::from_violations(
        "angle_sandwich",
        ANGLE_TOL,
        violations,
        json!({ "steps": trace.steps.len() }),
    ))
}

/// `tau^P((n+1)D) <= tau^E(nD) + pi`, for flat domains.
pub fn check_tc_relation(trace: &PursuitTrace) -> Result<CheckReport> {
    let k = trace.domain.curvature_bound();
    if k > 0.0 {
        return Err(Error::Unsupported(format!(
            "the pursuer/evader rotation relation is only established for K <= 0, domain has K = {k}"
        )));
    }
    let n = trace.tau_p.len();
    let gaps = (0..n.saturating_sub(1)).map(|i| trace.tau_p[i + 1] - trace.tau_e[i] - PI);
    Ok(CheckReport::from_violations(
        "tc_relation",
        ANGLE_TOL,
        gaps,
        json!({
            "tau_p": trace.tau_p.last().copied().unwrap_or(0.0),
            "tau_e": trace.tau_e.last().copied().unwrap_or(0.0),
        }),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqrtBoundReport {
    /// All lengths below are rescaled so the curvature bound is 1.
    pub scale: f64,
    pub tau_p: Vec<f64>,
    pub l0: f64,
    pub l_n: f64,
    /// Observed `min sin L_{i+1} sin(L_i - D)`.
    pub b: f64,
    pub c: f64,
    /// `min(sin^2 L(0), sin^2 L(T))` and its constant.
    pub b_continuous: f64,
    pub c_continuous: f64,
    /// `C sqrt(nD) - tau^P(nD)`.
    pub margin: Vec<f64>,
    pub min_margin: f64,
    /// Worst `alpha_tilde_i^2 - 5 Delta_i sin D / B` and its step.
    pub step_worst: f64,
    pub step_index: Option<usize>,
    /// `B` is small enough that the constant is of little use.
    pub b_degenerate: bool,
    pub passed: bool,
}

/// Square-root growth bound on the pursuer's total rotation.
pub fn sqrt_bound_report(trace: &PursuitTrace) -> Result<SqrtBoundReport> {
    let k = trace.domain.curvature_bound();
    let rk = if k > 0.0 { k.sqrt() } else { 1.0 };
    let l: Vec<f64> = trace.separation.iter().map(|x| x * rk).collect();
    let d = trace.step_size * rk;
    let l0 = l[0];
    if l0 >= PI {
        return Err(Error::Hypothesis(format!(
            "initial separation {l0} is not below pi (in units where K = 1)"
        )));
    }
    if trace.captured() {
        return Err(Error::NotApplicable("the evader was captured".into()));
    }
    if trace.steps.is_empty() {
        return Err(Error::InsufficientData("no steps recorded".into()));
    }
    let l_n = *l.last().unwrap();
    let b = trace.steps.iter().map(|s| s.b_stat).fold(f64::INFINITY, f64::min);
    if !(b > 0.0) {
        return Err(Error::Hypothesis(format!("B = {b} is not positive")));
    }
    let drop = (l0 - l_n).max(0.0);
    let c = (5.0 * drop / b).sqrt();
    let b_continuous = l0.sin().powi(2).min(l_n.sin().powi(2));
    let c_continuous = (5.0 * drop / b_continuous).sqrt();

    let margin: Vec<f64> = trace
        .tau_p
        .iter()
        .enumerate()
        .map(|(n, tau)| c * (n as f64 * d).sqrt() - tau)
        .collect();
    let min_margin = margin.iter().copied().fold(f64::INFINITY, f64::min);

    let (mut step_worst, mut step_index) = (f64::NEG_INFINITY, None);
    for (i, s) in trace.steps.iter().enumerate() {
        let tilde = s
            .alpha_tilde
            .ok_or_else(|| Error::IncompleteTrace(format!("step {i} has no model angle")))?;
        let v = tilde * tilde - 5.0 * s.increment * rk * d.sin() / b;
        if v > step_worst {
            step_worst = v;
            step_index = Some(i);
        }
    }
    Ok(SqrtBoundReport {
        scale: rk,
        tau_p: trace.tau_p.clone(),
        l0,
        l_n,
        b,
        c,
        b_continuous,
        c_continuous,
        min_margin,
        margin,
        step_worst,
        step_index,
        b_degenerate: b < 1e-3,
        passed: min_margin >= -ANGLE_TOL && step_worst <= ANGLE_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Classification {
    Capture {
        step: usize,
    },
    Escape {
        /// Final separation, standing in for the limit.
        l_n: f64,
        /// Least-squares slope of `L` per step over the last tenth.
        tail_slope: f64,
        /// `L_N > D` and the tail is no longer shrinking.
        settled: bool,
        tau_p_fit: Option<GrowthFit>,
        tau_e_fit: Option<GrowthFit>,
        c_p_fit: Option<GrowthFit>,
        c_e_fit: Option<GrowthFit>,
    },
}

pub const MIN_CLASSIFY_STEPS: usize = 100;

fn slope(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let xm = (n - 1.0) / 2.0;
    let ym = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, v) in y.iter().enumerate() {
        let dx = i as f64 - xm;
        sxy += dx * (v - ym);
        sxx += dx * dx;
    }
    sxy / sxx
}

pub fn capture_classifier(trace: &PursuitTrace) -> Result<Classification> {
    if let Some(step) = trace.capture_step {
        return Ok(Classification::Capture { step });
    }
    let n = trace.steps.len();
    if n < MIN_CLASSIFY_STEPS {
        return Err(Error::InsufficientData(format!(
            "{n} steps, at least {MIN_CLASSIFY_STEPS} needed"
        )));
    }
    let l = &trace.separation;
    let tail = &l[l.len() - (l.len() / 10).max(10)..];
    let tail_slope = slope(tail);
    let l_n = *l.last().unwrap();
    let t: Vec<f64> = (0..l.len()).map(|k| trace.time(k)).collect();
    let fit = |y: &[f64]| fit_growth_exponent(&t, y, 0.5).ok();
    Ok(Classification::Escape {
        l_n,
        tail_slope,
        settled: l_n > trace.step_size && tail_slope > -1e-8,
        tau_p_fit: fit(&trace.tau_p),
        tau_e_fit: fit(&trace.tau_e),
        c_p_fit: fit(&trace.c_p),
        c_e_fit: fit(&trace.c_e),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSeries {
    pub width: f64,
    pub centers: Vec<f64>,
    pub rotation: Vec<f64>,
    pub decreasing: bool,
    pub final_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitDiagnostic {
    pub series: Vec<WindowSeries>,
    /// Every series trends down and ends at most 1e-3.
    pub passed: bool,
}

/// Rotations this small are rounding noise.
const NOISE_FLOOR: f64 = 1e-9;

/// Total rotation of the pursuer curve in windows of the given widths
/// centred at `count` evenly spaced times.
pub fn limit_geodesic_diagnostic(trace: &PursuitTrace, widths: &[f64], count: usize) -> Result<LimitDiagnostic> {
    if trace.captured() {
        return Err(Error::NotApplicable("the evader was captured".into()));
    }
    if trace.pursuer_paths.len() != trace.steps.len() {
        return Err(Error::IncompleteTrace("pursuer segments were not recorded".into()));
    }
    let curve = PolygonalCurve::from_paths(&trace.domain, trace.pursuer_paths.clone())?;
    let total = curve.length();
    let count = count.max(2);
    let mut series = Vec::with_capacity(widths.len());
    for &w in widths {
        if !(w > 0.0 && 2.0 * w < total) {
            return Err(Error::OutOfRange {
                what: "window width",
                value: w,
                min: 0.0,
                max: total / 2.0,
            });
        }
        let centers: Vec<f64> = (0..count)
            .map(|k| w + (total - 2.0 * w) * k as f64 / (count - 1) as f64)
            .collect();
        let rotation = centers
            .iter()
            .map(|&t0| window_total_rotation(&curve, t0, w))
            .collect::<Result<Vec<_>>>()?;
        let final_value = *rotation.last().unwrap();
        series.push(WindowSeries {
            width: w,
            decreasing: final_value <= rotation[0] + NOISE_FLOOR,
            final_value,
            centers,
            rotation,
        });
    }
    let passed = series.iter().all(|s| s.decreasing && s.final_value <= 1e-3);
    Ok(LimitDiagnostic { series, passed })
}
