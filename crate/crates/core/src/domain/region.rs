use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{vec, POINT_TOL};
use crate::error::{Error, Result};

/// Boundary of a convex planar region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum RegionBoundary {
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    /// Vertices in either rotational order.
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
}

fn orientation(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| vec::cross2(vertices[i], vertices[(i + 1) % n]))
        .sum::<f64>()
        .signum()
}

impl RegionBoundary {
    pub(super) fn validate(&self) -> Result<()> {
        match self {
            RegionBoundary::Disk { center, radius } => {
                if !(*radius > 0.0 && radius.is_finite()) || center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidDomain(format!("disk radius {radius} must be > 0")));
                }
            }
            RegionBoundary::Polygon { vertices } => {
                let n = vertices.len();
                if n < 3 {
                    return Err(Error::InvalidDomain("a polygon needs at least 3 vertices".into()));
                }
                let sign = orientation(vertices);
                for i in 0..n {
                    let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
                    let turn = vec::cross2([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]);
                    if sign == 0.0 || turn * sign <= 0.0 {
                        return Err(Error::InvalidDomain(format!(
                            "polygon is not strictly convex at vertex {}",
                            (i + 1) % n
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub(super) fn check(&self, c: &[f64]) -> Result<()> {
        let p = vec::xy(c);
        match self {
            RegionBoundary::Disk { center, radius } => {
                let d = vec::dist(&p, center);
                if d > radius + POINT_TOL * radius.max(1.0) {
                    return Err(Error::InvalidPoint(format!(
                        "point {c:?} lies outside the disk (distance {d} > radius {radius})"
                    )));
                }
            }
            RegionBoundary::Polygon { vertices } => {
                let sign = orientation(vertices);
                let n = vertices.len();
                for i in 0..n {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    let edge = [b[0] - a[0], b[1] - a[1]];
                    let side = sign * vec::cross2(edge, [p[0] - a[0], p[1] - a[1]]) / vec::norm(&edge);
                    if side < -POINT_TOL {
                        return Err(Error::InvalidPoint(format!(
                            "point {c:?} lies outside polygon edge {i}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn bbox(&self) -> ([f64; 2], [f64; 2]) {
        match self {
            RegionBoundary::Disk { center, radius } => (
                [center[0] - radius, center[1] - radius],
                [center[0] + radius, center[1] + radius],
            ),
            RegionBoundary::Polygon { vertices } => vertices
                .iter()
                .fold(([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]), |(lo, hi), v| {
                    ([lo[0].min(v[0]), lo[1].min(v[1])], [hi[0].max(v[0]), hi[1].max(v[1])])
                }),
        }
    }

    pub(super) fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        let (lo, hi) = self.bbox();
        loop {
            let p = vec![rng.gen_range(lo[0]..hi[0]), rng.gen_range(lo[1]..hi[1])];
            if self.check(&p).is_ok() {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clockwise_square_is_accepted() {
        let cw = RegionBoundary::Polygon {
            vertices: vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]],
        };
        cw.validate().unwrap();
        cw.check(&[0.5, 0.5]).unwrap();
        cw.check(&[1.0, 0.5]).unwrap();
        assert!(cw.check(&[1.1, 0.5]).is_err());
    }

    #[test]
    fn reflex_polygon_is_rejected() {
        let dart = RegionBoundary::Polygon {
            vertices: vec![[0.0, 0.0], [2.0, 0.0], [1.0, 0.3], [1.0, 2.0]],
        };
        assert!(dart.validate().is_err());
    }

    #[test]
    fn disk_membership() {
        let d = RegionBoundary::Disk {
            center: [1.0, 0.0],
            radius: 2.0,
        };
        d.check(&[3.0, 0.0]).unwrap();
        assert!(d.check(&[3.001, 0.0]).is_err());
    }
}
