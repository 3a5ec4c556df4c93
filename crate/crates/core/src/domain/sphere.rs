use std::f64::consts::PI;

use rand::Rng;

use super::path::{GeodesicPath, Piece};
use super::{vec, Point, Side, GEOM_TOL, POINT_TOL};
use crate::error::{Error, Result};

pub(super) fn validate(radius: f64, c: &[f64]) -> Result<()> {
    let n = vec::norm(c);
    if (n - radius).abs() > POINT_TOL * radius {
        return Err(Error::InvalidPoint(format!(
            "point {c:?} has norm {n}, not the sphere radius {radius}"
        )));
    }
    Ok(())
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn unit(radius: f64, c: &[f64]) -> Vec<f64> {
    vec::normalize(c).unwrap_or_else(|| vec::scale(c, 1.0 / radius))
}

pub(super) fn distance(radius: f64, p: &[f64], q: &[f64]) -> f64 {
    let (u, v) = (unit(radius, p), unit(radius, q));
    radius * vec::norm(&cross(&u, &v)).atan2(vec::dot(&u, &v))
}

pub(super) fn is_antipodal(radius: f64, p: &[f64], q: &[f64]) -> bool {
    let (u, v) = (unit(radius, p), unit(radius, q));
    vec::norm(&cross(&u, &v)) < GEOM_TOL && vec::dot(&u, &v) < 0.0
}

/// A unit tangent at `u` used to break antipodal ties.
fn reference_tangent(u: &[f64]) -> Vec<f64> {
    let axis = if u[2].abs() > 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let w = vec::axpy(&axis, -vec::dot(&axis, u), u);
    vec::normalize(&w).expect("reference axis is not parallel to u")
}

pub(super) fn shortest_path(radius: f64, p: &[f64], q: &[f64], side: Side) -> Result<GeodesicPath> {
    let (u, v) = (unit(radius, p), unit(radius, q));
    let start = Point::Coords(p.to_vec());
    let (tangent, angle) = if is_antipodal(radius, p, q) {
        let w = reference_tangent(&u);
        match side {
            Side::Forbid => {
                return Err(Error::Ambiguous {
                    candidates: vec![format!("every great semicircle of length {}", PI * radius)],
                })
            }
            Side::Upper => (w, PI),
            Side::Lower => (vec::scale(&w, -1.0), PI),
        }
    } else {
        let rej = vec::axpy(&v, -vec::dot(&u, &v), &u);
        match vec::normalize(&rej) {
            Some(t) => (t, vec::norm(&cross(&u, &v)).atan2(vec::dot(&u, &v))),
            None => return Ok(GeodesicPath::trivial(start)),
        }
    };
    if angle == 0.0 {
        return Ok(GeodesicPath::trivial(start));
    }
    Ok(GeodesicPath::new(
        start,
        vec![Piece::GreatArc {
            radius,
            origin: u,
            tangent,
            angle,
        }],
    ))
}

pub(super) fn sample(radius: f64, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let c: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = vec::norm(&c);
        if n > 0.1 && n <= 1.0 {
            return vec::scale(&c, radius / n);
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::domain::{DomainSpec, PathEnd, Point, TieBreak};
    use crate::error::Error;
    use std::f64::consts::PI;

    fn pole() -> Point {
        Point::Coords(vec![0.0, 0.0, 1.0])
    }

    #[test]
    fn antipodes_are_pi_apart() {
        let s = DomainSpec::sphere(1.0).unwrap();
        let d = s.distance(&pole(), &Point::Coords(vec![0.0, 0.0, -1.0])).unwrap();
        assert_eq!(d, PI);
        let s2 = DomainSpec::sphere(3.0).unwrap();
        let p = Point::Coords(vec![3.0, 0.0, 0.0]);
        let q = Point::Coords(vec![0.0, 3.0, 0.0]);
        assert!((s2.distance(&p, &q).unwrap() - 1.5 * PI).abs() < 1e-14);
    }

    #[test]
    fn antipodal_tie_breaks() {
        let s = DomainSpec::sphere(1.0).unwrap();
        let south = Point::Coords(vec![0.0, 0.0, -1.0]);
        assert!(matches!(
            s.shortest_path(&pole(), &south, TieBreak::Forbid),
            Err(Error::Ambiguous { .. })
        ));
        let up = s.shortest_path(&pole(), &south, TieBreak::Upper).unwrap();
        let down = s.shortest_path(&pole(), &south, TieBreak::Lower).unwrap();
        let a = up.point_along(PI / 2.0).unwrap();
        let b = down.point_along(PI / 2.0).unwrap();
        assert!((crate::domain::vec::dist(a.coords(), b.coords()) - 2.0).abs() < 1e-12);
        assert!(crate::domain::vec::dist(up.end().coords(), south.coords()) < 1e-12);
        let cands = s.shortest_path_candidates(&pole(), &south, 1e-9).unwrap();
        assert_eq!(cands.len(), 2);
    }

    #[test]
    fn great_circle_step() {
        let s = DomainSpec::sphere(1.0).unwrap();
        let e = Point::Coords(vec![1f64.sin(), 0.0, 1f64.cos()]);
        let path = s.shortest_path(&pole(), &e, TieBreak::Forbid).unwrap();
        assert!((path.length - 1.0).abs() < 1e-15);
        let mid = s.point_along(&path, 0.5).unwrap();
        assert!((s.distance(&pole(), &mid).unwrap() - 0.5).abs() < 1e-14);
        assert!((s.distance(&mid, &e).unwrap() - 0.5).abs() < 1e-14);
        let dir = path.direction_at(PathEnd::Start).unwrap();
        match dir {
            crate::domain::Direction::Tangent(t) => {
                assert!((t[0] - 1.0).abs() < 1e-15 && t[2].abs() < 1e-15)
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn off_sphere_point_is_rejected() {
        let s = DomainSpec::sphere(1.0).unwrap();
        assert!(s.validate_point(&Point::Coords(vec![0.0, 0.0, 1.001])).is_err());
    }
}
