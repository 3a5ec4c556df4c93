//! Small dense-vector helpers. Points in the planar and spherical domains are
//! plain `Vec<f64>`; these keep the arithmetic readable.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm. Exact for axis-aligned vectors (uses `hypot` in 2-D).
pub fn norm(a: &[f64]) -> f64 {
    if a.len() == 2 {
        return a[0].hypot(a[1]);
    }
    let scale = a.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * a.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

pub fn normalize(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    (n > 0.0 && n.is_finite()).then(|| scale(a, 1.0 / n))
}

/// Angle between two unit vectors, accurate near 0 and near pi.
pub fn unit_angle(u: &[f64], v: &[f64]) -> f64 {
    let diff = norm(&sub(u, v));
    let sum = norm(&add(u, v));
    2.0 * diff.atan2(sum)
}

/// Counter-clockwise rotation by 90 degrees.
pub fn perp(a: [f64; 2]) -> [f64; 2] {
    [-a[1], a[0]]
}

pub fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn xy(a: &[f64]) -> [f64; 2] {
    [a[0], a[1]]
}

/// Distance from `c` to the closed segment `a`-`b` in the plane.
pub fn segment_point_distance(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ac = [c[0] - a[0], c[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((ac[0] * ab[0] + ac[1] * ab[1]) / len2).clamp(0.0, 1.0)
    };
    let p = [a[0] + t * ab[0], a[1] + t * ab[1]];
    (c[0] - p[0]).hypot(c[1] - p[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_angle_is_accurate_at_extremes() {
        let u = [1.0, 0.0];
        let v = [1e-12_f64.cos(), 1e-12_f64.sin()];
        assert!((unit_angle(&u, &v) - 1e-12).abs() < 1e-24);
        let w = [-1.0, 1e-12];
        let w = normalize(&w).unwrap();
        assert!((unit_angle(&u, &w) - (std::f64::consts::PI - 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn norm_handles_tiny_and_huge() {
        assert_eq!(norm(&[3.0, 4.0]), 5.0);
        assert!((norm(&[1e-200, 1e-200, 1e-200]) - 3f64.sqrt() * 1e-200).abs() < 1e-214);
        assert!((norm(&[1e200, 0.0, 0.0]) - 1e200).abs() < 1e186);
    }

    #[test]
    fn segment_distance() {
        assert_eq!(segment_point_distance([0.0, 0.0], [2.0, 0.0], [1.0, 1.0]), 1.0);
        assert_eq!(segment_point_distance([0.0, 0.0], [2.0, 0.0], [3.0, 0.0]), 1.0);
    }
}
