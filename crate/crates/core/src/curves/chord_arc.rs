use std::f64::consts::{FRAC_PI_2, SQRT_2};

use serde::{Deserialize, Serialize};

use super::PolygonalCurve;
use crate::domain::GEOM_TOL;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subarc {
    pub first_vertex: usize,
    pub last_vertex: usize,
    /// Total rotation at vertices strictly inside the subarc.
    pub tau: f64,
    pub length: f64,
    pub chord: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChordArcReport {
    pub subarcs: Vec<Subarc>,
    pub max_ratio: f64,
    /// Every subarc satisfies `length <= sqrt(2) * chord + 1e-9`.
    pub passed: bool,
    pub total_length: f64,
    pub total_tau: f64,
    pub sup_chord: f64,
    /// `(tau / (pi/2) + 1) * sqrt(2) * sup_chord`.
    pub aggregate_bound: f64,
    /// Whether the partition is small enough for the aggregate bound to be
    /// claimed; `aggregate_holds` is only set in that case.
    pub aggregate_applicable: bool,
    pub aggregate_holds: Option<bool>,
}

/// Greedy partition at vertices into maximal subarcs whose internal total
/// rotation is at most pi/2, with the length/chord ratio of each.
pub fn chord_arc_certificate(curve: &PolygonalCurve) -> Result<ChordArcReport> {
    let domain = curve.domain();
    if domain.curvature_bound() > 0.0 {
        return Err(Error::Unsupported(format!(
            "chord-arc certificate needs K <= 0, domain has K = {}",
            domain.curvature_bound()
        )));
    }
    let turns = curve.turn_angles()?;
    let cum = curve.cumulative();
    let verts = curve.vertices();
    let n = verts.len();

    let mut cuts = vec![0usize];
    let mut acc = 0.0;
    for (k, &turn) in turns.iter().enumerate() {
        let v = k + 1;
        if turn > FRAC_PI_2 || acc + turn > FRAC_PI_2 {
            cuts.push(v);
            acc = 0.0;
        } else {
            acc += turn;
        }
    }
    cuts.push(n - 1);

    let mut subarcs = Vec::with_capacity(cuts.len() - 1);
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let tau = turns[a..b.saturating_sub(1).max(a)].iter().sum();
        let length = cum[b] - cum[a];
        let chord = domain.distance(&verts[a], &verts[b])?;
        subarcs.push(Subarc {
            first_vertex: a,
            last_vertex: b,
            tau,
            length,
            chord,
            ratio: length / chord,
        });
    }
    let max_ratio = subarcs.iter().map(|s| s.ratio).fold(0.0, f64::max);
    let passed = subarcs.iter().all(|s| s.length <= SQRT_2 * s.chord + GEOM_TOL);
    let total_tau: f64 = turns.iter().sum();
    let sup_chord = subarcs.iter().map(|s| s.chord).fold(0.0, f64::max);
    let allowed = total_tau / FRAC_PI_2 + 1.0;
    let aggregate_bound = allowed * SQRT_2 * sup_chord;
    let aggregate_applicable = subarcs.len() as f64 <= allowed;
    let total_length = curve.length();
    Ok(ChordArcReport {
        max_ratio,
        passed,
        total_length,
        total_tau,
        sup_chord,
        aggregate_bound,
        aggregate_applicable,
        aggregate_holds: aggregate_applicable.then_some(total_length <= aggregate_bound + GEOM_TOL),
        subarcs,
    })
}
