//! Polygonal curves in a domain: total rotation, the total curvature and
//! circumradius functions, model-space comparison, chord-arc certificates,
//! growth fits and the two-disk winding geodesic.

mod chord_arc;
mod fit;
mod model;
mod winding;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::domain::{DomainSpec, GeodesicPath, PathEnd, Point, TieBreak, GEOM_TOL};
use crate::error::{Error, Result};

pub use chord_arc::{chord_arc_certificate, ChordArcReport, Subarc};
pub use fit::{asymptotic_ray_fit, fit_growth_exponent, GrowthFit, RayFit};
pub use model::{comparison_angle, spherical_length_bound};
pub use winding::build_winding_geodesic;

/// Default number of interior samples per piece for circumradius on K > 0.
pub const CIRCUMRADIUS_SAMPLES: usize = 64;

/// A piecewise-geodesic curve: vertices joined by chosen geodesics.
#[derive(Debug, Clone)]
pub struct PolygonalCurve<'d> {
    domain: &'d DomainSpec,
    vertices: Vec<Point>,
    paths: Vec<GeodesicPath>,
    cumulative: Vec<f64>,
}

impl<'d> PolygonalCurve<'d> {
    /// Join consecutive vertices by shortest paths.
    pub fn new(domain: &'d DomainSpec, vertices: Vec<Point>, tie: TieBreak) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Degenerate("a curve needs at least two vertices".into()));
        }
        let paths = vertices
            .windows(2)
            .map(|w| domain.shortest_path(&w[0], &w[1], tie))
            .collect::<Result<Vec<_>>>()?;
        Self::from_paths(domain, paths)
    }

    /// Use the given geodesics as the connecting paths.
    pub fn from_paths(domain: &'d DomainSpec, paths: Vec<GeodesicPath>) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::Degenerate("a curve needs at least one segment".into()));
        }
        let threshold = domain.threshold();
        let mut vertices = Vec::with_capacity(paths.len() + 1);
        let mut cumulative = Vec::with_capacity(paths.len() + 1);
        cumulative.push(0.0);
        for (i, path) in paths.iter().enumerate() {
            if path.length <= 0.0 {
                return Err(Error::Degenerate(format!("repeated vertex at index {i}")));
            }
            if path.length >= threshold {
                return Err(Error::Precondition(format!(
                    "segment {i} has length {} >= {threshold}",
                    path.length
                )));
            }
            vertices.push(domain.canonical(&path.start));
            cumulative.push(cumulative[i] + path.length);
        }
        vertices.push(domain.canonical(&paths.last().unwrap().end()));
        Ok(PolygonalCurve {
            domain,
            vertices,
            paths,
            cumulative,
        })
    }

    pub fn domain(&self) -> &'d DomainSpec {
        self.domain
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn paths(&self) -> &[GeodesicPath] {
        &self.paths
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// `pi - beta_i` at every interior vertex, in order.
    pub fn turn_angles(&self) -> Result<Vec<f64>> {
        self.paths
            .windows(2)
            .map(|w| {
                let back = w[0].direction_at(PathEnd::Finish)?;
                let ahead = w[1].direction_at(PathEnd::Start)?;
                Ok(PI - back.angle_to(&ahead)?)
            })
            .collect()
    }

    /// Point at arclength `s` along the curve.
    pub fn point_at(&self, s: f64) -> Result<Point> {
        let total = self.length();
        if !(s >= -GEOM_TOL && s <= total + GEOM_TOL) {
            return Err(Error::OutOfRange {
                what: "arclength",
                value: s,
                min: 0.0,
                max: total,
            });
        }
        let s = s.clamp(0.0, total);
        let k = self.cumulative.partition_point(|&c| c <= s).clamp(1, self.paths.len()) - 1;
        let path = &self.paths[k];
        self.domain
            .point_along(path, (s - self.cumulative[k]).clamp(0.0, path.length))
    }
}

/// Sampled time series along a curve. Fields that an operation does not
/// compute are left empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveSeries {
    pub t: Vec<f64>,
    pub tau: Vec<f64>,
    pub c: Vec<f64>,
    pub r: Vec<f64>,
}

pub fn total_rotation(curve: &PolygonalCurve) -> Result<f64> {
    Ok(curve.turn_angles()?.iter().sum())
}

/// `tau` at every vertex arclength. The value at an interior vertex already
/// includes that vertex's turn.
pub fn tc_function(curve: &PolygonalCurve) -> Result<CurveSeries> {
    let turns = curve.turn_angles()?;
    let mut tau = Vec::with_capacity(curve.vertices.len());
    tau.push(0.0);
    let mut acc = 0.0;
    for turn in &turns {
        acc += turn;
        tau.push(acc);
    }
    tau.push(acc);
    Ok(CurveSeries {
        t: curve.cumulative.clone(),
        tau,
        ..CurveSeries::default()
    })
}

/// Running maximum of the distance from the curve's start. For `K = 0`
/// domains vertices suffice; otherwise every piece is sampled at
/// `samples_per_piece` interior points.
pub fn circumradius_function(curve: &PolygonalCurve, samples_per_piece: usize) -> Result<CurveSeries> {
    let domain = curve.domain;
    let sampled = domain.curvature_bound() > 0.0;
    if sampled && samples_per_piece < 1 {
        return Err(Error::config(
            "samples_per_piece",
            "must be at least 1 on domains with K > 0",
        ));
    }
    let origin = &curve.vertices[0];
    let mut out = CurveSeries {
        t: vec![0.0],
        c: vec![0.0],
        r: vec![0.0],
        ..CurveSeries::default()
    };
    let mut push = |t: f64, p: &Point| -> Result<()> {
        let r = domain.distance(origin, p)?;
        let c = out.c.last().unwrap().max(r);
        out.t.push(t);
        out.r.push(r);
        out.c.push(c);
        Ok(())
    };
    for (k, path) in curve.paths.iter().enumerate() {
        if sampled {
            for j in 1..=samples_per_piece {
                let s = path.length * j as f64 / (samples_per_piece + 1) as f64;
                push(curve.cumulative[k] + s, &domain.point_along(path, s)?)?;
            }
        }
        push(curve.cumulative[k + 1], &curve.vertices[k + 1])?;
    }
    Ok(out)
}

/// `tau(t0 + width) - tau(t0 - width)`.
pub fn window_total_rotation(curve: &PolygonalCurve, t0: f64, width: f64) -> Result<f64> {
    let total = curve.length();
    let (lo, hi) = (t0 - width, t0 + width);
    if !(width >= 0.0 && lo >= -GEOM_TOL && hi <= total + GEOM_TOL) {
        return Err(Error::OutOfRange {
            what: "window",
            value: t0,
            min: width,
            max: total - width,
        });
    }
    let turns = curve.turn_angles()?;
    Ok(turns
        .iter()
        .zip(&curve.cumulative[1..])
        .filter(|(_, &s)| s > lo && s <= hi)
        .map(|(turn, _)| turn)
        .sum())
}
