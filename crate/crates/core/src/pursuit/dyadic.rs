use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EvaderCurve, EvaderPolicy, Pursuit, PursuitTrace};
use crate::domain::{DomainSpec, Point, TieBreak};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicLevel {
    pub m: u32,
    pub step_size: f64,
    pub steps: usize,
    pub captured: bool,
    /// `min_i L_m(t_i) - L(t_i)/2` with the finest level standing in for
    /// the continuous separation `L`.
    pub half_margin: f64,
    /// `min_i L(t_i)/2 - D(m)`.
    pub step_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicReport {
    pub levels: Vec<DyadicLevel>,
    /// `sup_t d(P_m(t), P_{m+1}(t))` for consecutive levels.
    pub sup_gaps: Vec<f64>,
    pub horizon: f64,
    pub horizon_used: f64,
    /// The horizon was not a multiple of the coarsest step and was rounded
    /// down.
    pub horizon_rounded: bool,
    #[serde(skip)]
    pub traces: Vec<PursuitTrace>,
}

/// Pursuer position at time `k * D / 2` on a trace with step `D`, holding
/// still after capture.
fn half_step_position(trace: &PursuitTrace, k: usize) -> Result<Point> {
    let i = k / 2;
    let last = trace.pursuer.len() - 1;
    if i >= last {
        return Ok(trace.pursuer[last].clone());
    }
    if k.is_multiple_of(2) {
        return Ok(trace.pursuer[i].clone());
    }
    let seg = &trace.pursuer_paths[i];
    trace.domain.point_along(seg, 0.5 * seg.length)
}

fn separation_at(trace: &PursuitTrace, i: usize) -> f64 {
    trace.separation[i.min(trace.separation.len() - 1)]
}

/// Discrete pursuit of the prescribed evader curve with steps `2^-m` for
/// `m` in `m_min..=m_max`, compared at shared times.
pub fn run_dyadic(
    spec: &DomainSpec,
    start: &Point,
    curve: &EvaderCurve,
    m_min: u32,
    m_max: u32,
    horizon: f64,
) -> Result<DyadicReport> {
    if m_min > m_max || m_max > 40 {
        return Err(Error::config("dyadic", format!("bad level range {m_min}..={m_max}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::config("horizon", format!("must be positive, got {horizon}")));
    }
    let coarse = (-(m_min as f64)).exp2();
    let n0 = (horizon / coarse + 1e-9).floor() as usize;
    if n0 == 0 {
        return Err(Error::Precondition(format!(
            "horizon {horizon} is shorter than the coarsest step {coarse}"
        )));
    }
    let horizon_used = n0 as f64 * coarse;
    let horizon_rounded = (horizon_used - horizon).abs() > 1e-12 * horizon;

    let policy = EvaderPolicy::PrescribedCurve { curve: curve.clone() };
    let traces = (m_min..=m_max)
        .into_par_iter()
        .map(|m| {
            let d = (-(m as f64)).exp2();
            Pursuit::new(spec, start.clone(), policy.clone(), d)
                .max_steps(n0 << (m - m_min))
                .tie_break(TieBreak::Forbid)
                .run()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sup_gaps = Vec::with_capacity(traces.len() - 1);
    for w in traces.windows(2) {
        let (coarse_trace, fine) = (&w[0], &w[1]);
        let n_fine = (fine.steps.len()).max(2 * coarse_trace.steps.len());
        let mut gap: f64 = 0.0;
        for j in 0..=n_fine {
            let a = half_step_position(coarse_trace, j)?;
            let b = &fine.pursuer[j.min(fine.pursuer.len() - 1)];
            gap = gap.max(spec.distance(&a, b)?);
        }
        sup_gaps.push(gap);
    }

    let finest = traces.last().unwrap();
    let levels = traces
        .iter()
        .zip(m_min..=m_max)
        .map(|(tr, m)| {
            let stride = 1usize << (m_max - m);
            let d = tr.step_size;
            let (mut half_margin, mut step_margin) = (f64::INFINITY, f64::INFINITY);
            for i in 0..tr.separation.len() {
                let reference = separation_at(finest, i * stride);
                half_margin = half_margin.min(tr.separation[i] - 0.5 * reference);
                step_margin = step_margin.min(0.5 * reference - d);
            }
            DyadicLevel {
                m,
                step_size: d,
                steps: tr.steps.len(),
                captured: tr.captured(),
                half_margin,
                step_margin,
            }
        })
        .collect();

    Ok(DyadicReport {
        levels,
        sup_gaps,
        horizon,
        horizon_used,
        horizon_rounded,
        traces,
    })
}
