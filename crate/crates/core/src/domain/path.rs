use serde::{Deserialize, Serialize};

use super::vec;
use super::{Direction, Point, TreePoint};
use crate::error::{Error, Result};

/// Rotational sense of a boundary arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Ccw,
    Cw,
}

/// One primitive piece of a geodesic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    Line {
        from: Vec<f64>,
        to: Vec<f64>,
    },
    /// Arc of a removed-disk boundary circle. `end_angle` is unwrapped, so a
    /// piece may cover more than one full turn.
    Arc {
        center: [f64; 2],
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
    /// Great-circle arc `radius * (cos(s/R) origin + sin(s/R) tangent)`, with
    /// `origin` and `tangent` orthonormal.
    GreatArc {
        radius: f64,
        origin: Vec<f64>,
        tangent: Vec<f64>,
        angle: f64,
    },
    TreeSegment {
        edge: usize,
        from: f64,
        to: f64,
    },
}

impl Piece {
    pub fn length(&self) -> f64 {
        match self {
            Piece::Line { from, to } => vec::dist(from, to),
            Piece::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } => radius * (end_angle - start_angle).abs(),
            Piece::GreatArc { radius, angle, .. } => radius * angle,
            Piece::TreeSegment { from, to, .. } => (to - from).abs(),
        }
    }

    pub fn orientation(&self) -> Option<Orientation> {
        match self {
            Piece::Arc {
                start_angle, end_angle, ..
            } => Some(if end_angle >= start_angle {
                Orientation::Ccw
            } else {
                Orientation::Cw
            }),
            _ => None,
        }
    }

    /// Point at arclength `s` from the start of the piece (clamped).
    pub fn point_at(&self, s: f64) -> Point {
        let len = self.length();
        let s = s.clamp(0.0, len);
        match self {
            Piece::Line { from, to } => {
                if s == 0.0 || len == 0.0 {
                    Point::Coords(from.clone())
                } else if s == len {
                    Point::Coords(to.clone())
                } else {
                    let dir = vec::sub(to, from);
                    Point::Coords(vec::axpy(from, s / len, &dir))
                }
            }
            Piece::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let sign = if end_angle >= start_angle { 1.0 } else { -1.0 };
                let theta = if s == len {
                    *end_angle
                } else {
                    start_angle + sign * s / radius
                };
                Point::Coords(vec![center[0] + radius * theta.cos(), center[1] + radius * theta.sin()])
            }
            Piece::GreatArc {
                radius,
                origin,
                tangent,
                ..
            } => {
                let phi = s / radius;
                let (sn, cs) = phi.sin_cos();
                let p: Vec<f64> = origin
                    .iter()
                    .zip(tangent)
                    .map(|(o, t)| radius * (cs * o + sn * t))
                    .collect();
                Point::Coords(p)
            }
            Piece::TreeSegment { edge, from, to } => {
                let sign = if to >= from { 1.0 } else { -1.0 };
                let offset = if s == len { *to } else { from + sign * s };
                Point::Tree(TreePoint { edge: *edge, offset })
            }
        }
    }

    pub fn start(&self) -> Point {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point {
        self.point_at(self.length())
    }

    /// Unit direction of travel at arclength `s` along the piece.
    pub fn direction_at(&self, s: f64) -> Direction {
        match self {
            Piece::Line { from, to } => Direction::Tangent(vec::normalize(&vec::sub(to, from)).unwrap_or_default()),
            Piece::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } => {
                let ccw = end_angle >= start_angle;
                let sign = if ccw { 1.0 } else { -1.0 };
                let theta = start_angle + sign * s.clamp(0.0, self.length()) / radius;
                let (sn, cs) = theta.sin_cos();
                Direction::Tangent(vec![-sign * sn, sign * cs])
            }
            Piece::GreatArc {
                radius,
                origin,
                tangent,
                ..
            } => {
                let phi = s / radius;
                let (sn, cs) = phi.sin_cos();
                Direction::Tangent(origin.iter().zip(tangent).map(|(o, t)| -sn * o + cs * t).collect())
            }
            Piece::TreeSegment { edge, from, to } => Direction::Tree {
                edge: *edge,
                increasing: to > from,
            },
        }
    }

    pub fn reversed(&self) -> Piece {
        match self {
            Piece::Line { from, to } => Piece::Line {
                from: to.clone(),
                to: from.clone(),
            },
            Piece::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => Piece::Arc {
                center: *center,
                radius: *radius,
                start_angle: *end_angle,
                end_angle: *start_angle,
            },
            Piece::GreatArc {
                radius,
                origin,
                tangent,
                angle,
            } => {
                let (sn, cs) = angle.sin_cos();
                let new_origin: Vec<f64> = origin.iter().zip(tangent).map(|(o, t)| cs * o + sn * t).collect();
                let new_tangent: Vec<f64> = origin.iter().zip(tangent).map(|(o, t)| sn * o - cs * t).collect();
                Piece::GreatArc {
                    radius: *radius,
                    origin: new_origin,
                    tangent: new_tangent,
                    angle: *angle,
                }
            }
            Piece::TreeSegment { edge, from, to } => Piece::TreeSegment {
                edge: *edge,
                from: *to,
                to: *from,
            },
        }
    }

    /// The sub-piece covering arclengths `[a, b]` of this piece.
    pub fn slice(&self, a: f64, b: f64) -> Piece {
        let len = self.length();
        let (a, b) = (a.clamp(0.0, len), b.clamp(0.0, len));
        match self {
            Piece::Line { .. } => Piece::Line {
                from: self.point_at(a).into_coords(),
                to: self.point_at(b).into_coords(),
            },
            Piece::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let sign = if end_angle >= start_angle { 1.0 } else { -1.0 };
                let at = |s: f64| {
                    if s == len {
                        *end_angle
                    } else {
                        start_angle + sign * s / radius
                    }
                };
                Piece::Arc {
                    center: *center,
                    radius: *radius,
                    start_angle: at(a),
                    end_angle: at(b),
                }
            }
            Piece::GreatArc { radius, .. } => {
                let origin = vec::scale(&self.point_at(a).into_coords(), 1.0 / radius);
                let tangent = match self.direction_at(a) {
                    Direction::Tangent(t) => t,
                    Direction::Tree { .. } => unreachable!(),
                };
                Piece::GreatArc {
                    radius: *radius,
                    origin,
                    tangent,
                    angle: (b - a) / radius,
                }
            }
            Piece::TreeSegment { edge, from, to } => {
                let sign = if to >= from { 1.0 } else { -1.0 };
                let at = |s: f64| if s == len { *to } else { from + sign * s };
                Piece::TreeSegment {
                    edge: *edge,
                    from: at(a),
                    to: at(b),
                }
            }
        }
    }
}

/// Which end of a path a direction is read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathEnd {
    /// Initial direction of travel.
    Start,
    /// Direction at the final point pointing back along the path.
    Finish,
}

/// A geodesic as an ordered list of primitive pieces. The `start` point is
/// stored so that zero-length paths still know where they are.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub start: Point,
    pub pieces: Vec<Piece>,
    pub length: f64,
}

impl GeodesicPath {
    pub fn new(start: Point, pieces: Vec<Piece>) -> Self {
        let pieces: Vec<Piece> = pieces.into_iter().filter(|p| p.length() > 0.0).collect();
        let length = pieces.iter().map(Piece::length).sum();
        GeodesicPath { start, pieces, length }
    }

    pub fn trivial(at: Point) -> Self {
        GeodesicPath {
            start: at,
            pieces: Vec::new(),
            length: 0.0,
        }
    }

    pub fn end(&self) -> Point {
        self.pieces.last().map(Piece::end).unwrap_or_else(|| self.start.clone())
    }

    /// Locate arclength `s`: (piece index, offset into piece).
    fn locate(&self, s: f64) -> (usize, f64) {
        let mut acc = 0.0;
        for (i, piece) in self.pieces.iter().enumerate() {
            let len = piece.length();
            if s <= acc + len || i + 1 == self.pieces.len() {
                return (i, (s - acc).clamp(0.0, len));
            }
            acc += len;
        }
        (0, 0.0)
    }

    pub fn point_along(&self, s: f64) -> Result<Point> {
        let slack = 1e-12 * self.length.max(1.0);
        if !(s >= -slack && s <= self.length + slack) {
            return Err(Error::OutOfRange {
                what: "arclength",
                value: s,
                min: 0.0,
                max: self.length,
            });
        }
        if self.pieces.is_empty() || s <= 0.0 {
            return Ok(self.start.clone());
        }
        if s >= self.length {
            return Ok(self.end());
        }
        let (i, off) = self.locate(s);
        Ok(self.pieces[i].point_at(off))
    }

    pub fn direction_at(&self, end: PathEnd) -> Result<Direction> {
        if self.pieces.is_empty() || self.length <= 0.0 {
            return Err(Error::Degenerate("zero-length path has no direction".into()));
        }
        Ok(match end {
            PathEnd::Start => self.pieces[0].direction_at(0.0),
            PathEnd::Finish => {
                let last = self.pieces.last().unwrap();
                last.direction_at(last.length()).negated()
            }
        })
    }

    /// Sub-path over arclengths `[a, b]`.
    pub fn slice(&self, a: f64, b: f64) -> GeodesicPath {
        let a = a.clamp(0.0, self.length);
        let b = b.clamp(a, self.length);
        let start = self.point_along(a).expect("clamped");
        let mut pieces = Vec::new();
        let mut acc = 0.0;
        for piece in &self.pieces {
            let len = piece.length();
            let (lo, hi) = (acc, acc + len);
            if hi > a && lo < b {
                pieces.push(piece.slice(a.max(lo) - lo, b.min(hi) - lo));
            }
            acc = hi;
        }
        GeodesicPath::new(start, pieces)
    }

    pub fn reversed(&self) -> GeodesicPath {
        GeodesicPath::new(self.end(), self.pieces.iter().rev().map(Piece::reversed).collect())
    }

    /// Largest turn between consecutive pieces at their junctions.
    pub fn max_junction_turn(&self) -> f64 {
        self.pieces
            .windows(2)
            .map(|w| {
                let out = w[0].direction_at(w[0].length());
                let inn = w[1].direction_at(0.0);
                out.angle_to(&inn).unwrap_or(std::f64::consts::PI)
            })
            .fold(0.0, f64::max)
    }

    /// Evenly spaced points for drawing.
    pub fn sample(&self, per_unit: f64, min_per_piece: usize) -> Vec<Point> {
        let mut out = vec![self.start.clone()];
        for piece in &self.pieces {
            let n = ((piece.length() * per_unit).ceil() as usize).max(min_per_piece.max(1));
            for k in 1..=n {
                out.push(piece.point_at(piece.length() * k as f64 / n as f64));
            }
        }
        out
    }

    /// Twice the signed area swept between this planar path and the chord
    /// back to its start. Negative when the path lies to the left of the
    /// chord direction.
    pub(crate) fn signed_chord_area2(&self) -> f64 {
        let mut total = 0.0;
        for piece in &self.pieces {
            total += match piece {
                Piece::Line { from, to } => from[0] * to[1] - to[0] * from[1],
                Piece::Arc {
                    center,
                    radius,
                    start_angle,
                    end_angle,
                } => {
                    let (s1, c1) = start_angle.sin_cos();
                    let (s2, c2) = end_angle.sin_cos();
                    radius * radius * (end_angle - start_angle) + radius * center[0] * (s2 - s1)
                        - radius * center[1] * (c2 - c1)
                }
                _ => 0.0,
            };
        }
        if let (Point::Coords(a), Point::Coords(b)) = (&self.start, &self.end()) {
            total += b[0] * a[1] - a[0] * b[1];
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn line(a: [f64; 2], b: [f64; 2]) -> Piece {
        Piece::Line {
            from: a.to_vec(),
            to: b.to_vec(),
        }
    }

    #[test]
    fn point_along_line_and_endpoints() {
        let p = GeodesicPath::new(Point::xy(0.0, 0.0), vec![line([0.0, 0.0], [10.0, 0.0])]);
        assert_eq!(p.point_along(1.0).unwrap(), Point::xy(1.0, 0.0));
        assert_eq!(p.point_along(0.0).unwrap(), Point::xy(0.0, 0.0));
        assert_eq!(p.point_along(10.0).unwrap(), Point::xy(10.0, 0.0));
        assert!(matches!(p.point_along(10.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(p.point_along(-0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn arc_direction_and_reverse() {
        let arc = Piece::Arc {
            center: [0.0, 0.0],
            radius: 1.0,
            start_angle: 0.0,
            end_angle: PI / 2.0,
        };
        let d = arc.direction_at(0.0);
        assert!(d.angle_to(&Direction::Tangent(vec![0.0, 1.0])).unwrap() < 1e-15);
        let r = arc.reversed();
        assert_eq!(r.orientation(), Some(Orientation::Cw));
        let end = r.end().into_coords();
        assert!((end[0] - 1.0).abs() < 1e-15 && end[1].abs() < 1e-15);
    }

    #[test]
    fn slice_preserves_length() {
        let p = GeodesicPath::new(
            Point::xy(-2.0, 0.0),
            vec![
                line([-2.0, 0.0], [0.0, 1.0]),
                Piece::Arc {
                    center: [0.0, 0.0],
                    radius: 1.0,
                    start_angle: PI / 2.0,
                    end_angle: 0.0,
                },
            ],
        );
        let s = p.slice(1.0, p.length - 0.5);
        assert!((s.length - (p.length - 1.5)).abs() < 1e-12);
        let a = s.start.coords().to_vec();
        let b = p.point_along(1.0).unwrap().into_coords();
        assert!(vec::dist(&a, &b) < 1e-12);
    }

    #[test]
    fn great_arc_reverse_round_trip() {
        let piece = Piece::GreatArc {
            radius: 2.0,
            origin: vec![1.0, 0.0, 0.0],
            tangent: vec![0.0, 1.0, 0.0],
            angle: 1.0,
        };
        let r = piece.reversed();
        let s = r.start().into_coords();
        let e = piece.end().into_coords();
        assert!(vec::dist(&s, &e) < 1e-14);
        let back = r.end().into_coords();
        assert!(vec::dist(&back, &[2.0, 0.0, 0.0]) < 1e-14);
    }
}
