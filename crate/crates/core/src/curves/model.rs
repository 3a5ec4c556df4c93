use std::f64::consts::PI;

use crate::error::{Error, Result};

const SIDE_SLACK: f64 = 1e-12;

/// Angle opposite side `a` in the model triangle with sides `a, b, c` in the
/// plane (`k == 0`) or the sphere of curvature `k > 0`.
///
/// Uses the half-angle form, which stays accurate for thin triangles where
/// the law-of-cosines arccos loses half its digits.
pub fn comparison_angle(k: f64, a: f64, b: f64, c: f64) -> Result<f64> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::OutOfRange {
            what: "curvature",
            value: k,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    if [a, b, c].iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::ModelTriangle(a, b, c));
    }
    let slack = SIDE_SLACK * (a + b + c).max(1.0);
    if a > b + c + slack || b > a + c + slack || c > a + b + slack {
        return Err(Error::ModelTriangle(a, b, c));
    }
    if b == 0.0 || c == 0.0 {
        return Err(Error::Degenerate(format!(
            "model angle between sides {b} and {c} is undefined"
        )));
    }
    let s = 0.5 * (a + b + c);
    let (sa, sb, sc) = ((s - a).max(0.0), (s - b).max(0.0), (s - c).max(0.0));
    let (num, den) = if k == 0.0 {
        (sb * sc, s * sa)
    } else {
        let rk = k.sqrt();
        let limit = 2.0 * PI / rk;
        if 2.0 * s >= limit {
            return Err(Error::Perimeter {
                perimeter: 2.0 * s,
                limit,
            });
        }
        ((sb * rk).sin() * (sc * rk).sin(), (s * rk).sin() * (sa * rk).sin())
    };
    Ok((2.0 * num.max(0.0).sqrt().atan2(den.max(0.0).sqrt())).clamp(0.0, PI))
}

/// Length of the isosceles once-broken geodesic in the unit sphere with
/// total curvature `tau` and endpoint separation `d`.
pub fn spherical_length_bound(tau: f64, d: f64) -> Result<f64> {
    if !(tau >= 0.0 && d >= 0.0 && tau + d < PI) {
        return Err(Error::Precondition(format!(
            "need tau >= 0, d >= 0 and tau + d < pi (tau = {tau}, d = {d})"
        )));
    }
    let (cos_d, cos_tau) = (d.cos(), tau.cos());
    // Decreasing in l on [0, pi/2].
    let f = |l: f64| {
        let (s, c) = l.sin_cos();
        c * c - s * s * cos_tau - cos_d
    };
    let (mut lo, mut hi) = (0.0_f64, PI / 2.0);
    if f(lo) <= 0.0 {
        return Ok(0.0);
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + hi)
}
