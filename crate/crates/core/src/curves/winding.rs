use std::f64::consts::TAU;

use crate::domain::{vec, Disk, DomainKind, DomainSpec, GeodesicPath, Piece, Point};
use crate::error::{Error, Result};

/// Tangent line leaving `from` counter-clockwise and meeting `to`
/// counter-clockwise: (departure point, arrival point, normal angle). Both
/// circles lie to the left of the line.
fn ccw_bitangent(from: &Disk, to: &Disk) -> ([f64; 2], [f64; 2], f64) {
    let v = [to.center[0] - from.center[0], to.center[1] - from.center[1]];
    let d = v[0].hypot(v[1]);
    let phi = ((from.radius - to.radius) / d).acos();
    let theta = v[1].atan2(v[0]) - phi;
    (from.point_at_angle(theta), to.point_at_angle(theta), theta)
}

fn midpoint(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

fn line(a: [f64; 2], b: [f64; 2]) -> Piece {
    Piece::Line {
        from: a.to_vec(),
        to: b.to_vec(),
    }
}

/// Local geodesic around two removed disks following `word`: each letter
/// `i` is a counter-clockwise tangential contact with circle `i`, and a run
/// of `k` equal letters adds `k - 1` full counter-clockwise circuits.
///
/// The path starts halfway along the tangent line arriving at the first
/// circle and ends halfway along the line leaving the last one.
pub fn build_winding_geodesic(spec: &DomainSpec, word: &[u8]) -> Result<GeodesicPath> {
    let disks = match spec.kind() {
        DomainKind::PlaneMinusDisks { disks } if disks.len() == 2 => disks,
        _ => {
            return Err(Error::Unsupported(
                "winding geodesics need a plane with exactly two removed disks".into(),
            ))
        }
    };
    let gap = vec::dist(&disks[0].center, &disks[1].center);
    if gap <= disks[0].radius + disks[1].radius {
        return Err(Error::InvalidDomain(format!("disks overlap (center distance {gap})")));
    }
    if word.is_empty() {
        return Err(Error::Precondition("word must be nonempty".into()));
    }
    if let Some(bad) = word.iter().find(|&&l| l != 1 && l != 2) {
        return Err(Error::Precondition(format!("letter {bad} is not 1 or 2")));
    }
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &l in word {
        let i = (l - 1) as usize;
        match runs.last_mut() {
            Some((j, k)) if *j == i => *k += 1,
            _ => runs.push((i, 1)),
        }
    }

    let first = runs[0].0;
    let (leave0, arrive, mut theta_in) = ccw_bitangent(&disks[1 - first], &disks[first]);
    let start = midpoint(leave0, arrive);
    let mut pieces = vec![line(start, arrive)];
    for (idx, &(i, k)) in runs.iter().enumerate() {
        let next = runs.get(idx + 1).map_or(1 - i, |r| r.0);
        let (leave, reach, theta_out) = ccw_bitangent(&disks[i], &disks[next]);
        let sweep = (theta_out - theta_in).rem_euclid(TAU) + TAU * (k - 1) as f64;
        pieces.push(Piece::Arc {
            center: disks[i].center,
            radius: disks[i].radius,
            start_angle: theta_in,
            end_angle: theta_in + sweep,
        });
        if idx + 1 < runs.len() {
            pieces.push(line(leave, reach));
        } else {
            pieces.push(line(leave, midpoint(leave, reach)));
        }
        theta_in = theta_out;
    }
    Ok(GeodesicPath::new(Point::Coords(start.to_vec()), pieces))
}
