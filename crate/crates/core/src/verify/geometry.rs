use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::CheckReport;
use crate::curves::comparison_angle;
use crate::domain::{vec, DomainKind, DomainSpec, GeodesicPath, PathEnd, Point, TieBreak};
use crate::error::{Error, Result};

const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThinnessOptions {
    pub trials: usize,
    pub samples_per_triangle: usize,
    pub seed: u64,
    /// Half-width of the sampling box for unbounded domains.
    pub extent: f64,
}

impl Default for ThinnessOptions {
    fn default() -> Self {
        ThinnessOptions {
            trials: 100,
            samples_per_triangle: 20,
            seed: 0,
            extent: 4.0,
        }
    }
}

/// Comparison triangle in the plane (`k == 0`) or on the sphere of
/// curvature `k`, with vertices in ambient coordinates.
struct Model {
    k: f64,
    vertices: [Vec<f64>; 3],
}

impl Model {
    /// Sides in order `|AB|, |BC|, |CA|`.
    fn new(k: f64, sides: [f64; 3]) -> Result<Self> {
        let [c, a, b] = sides;
        let gamma = comparison_angle(k, a, b, c)?;
        let (sg, cg) = gamma.sin_cos();
        let vertices = if k == 0.0 {
            [vec![0.0, 0.0], vec![c, 0.0], vec![b * cg, b * sg]]
        } else {
            let r = 1.0 / k.sqrt();
            let (sc, cc) = (c / r).sin_cos();
            let (sb, cb) = (b / r).sin_cos();
            [
                vec![0.0, 0.0, r],
                vec![r * sc, 0.0, r * cc],
                vec![r * sb * cg, r * sb * sg, r * cb],
            ]
        };
        Ok(Model { k, vertices })
    }

    fn point(&self, side: usize, s: f64) -> Vec<f64> {
        let (x, y) = (&self.vertices[side], &self.vertices[(side + 1) % 3]);
        if self.k == 0.0 {
            return vec::axpy(x, s, &vec::sub(y, x));
        }
        let r = vec::norm(x);
        let omega = self.angle(x, y);
        if omega == 0.0 {
            return x.clone();
        }
        let (wa, wb) = (((1.0 - s) * omega).sin() / omega.sin(), (s * omega).sin() / omega.sin());
        let p: Vec<f64> = x.iter().zip(y).map(|(u, v)| wa * u + wb * v).collect();
        vec::scale(&p, r / vec::norm(&p))
    }

    fn angle(&self, x: &[f64], y: &[f64]) -> f64 {
        let cross = [
            x[1] * y[2] - x[2] * y[1],
            x[2] * y[0] - x[0] * y[2],
            x[0] * y[1] - x[1] * y[0],
        ];
        vec::norm(&cross).atan2(vec::dot(x, y))
    }

    fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        if self.k == 0.0 {
            vec::dist(x, y)
        } else {
            self.angle(x, y) / self.k.sqrt()
        }
    }
}

/// Random triangles: distances between points on two sides never exceed
/// the corresponding distances in the comparison triangle.
pub fn cat_thinness_sample(spec: &DomainSpec, opts: &ThinnessOptions) -> CheckReport {
    let tolerance = match spec.kind() {
        DomainKind::PlaneMinusDisks { .. } => 1e-6,
        _ => 1e-9,
    };
    let k = spec.curvature_bound().max(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut violations = Vec::with_capacity(opts.trials);
    let mut skipped = 0usize;
    let mut sampled = 0usize;
    for _ in 0..opts.trials {
        // Positively curved models only cover short triangles; resample.
        let mut found = None;
        for _ in 0..MAX_ATTEMPTS {
            let v: Vec<Point> = (0..3).map(|_| spec.sample_point(&mut rng, opts.extent)).collect();
            let sides: Result<Vec<GeodesicPath>> = (0..3)
                .map(|i| spec.shortest_path(&v[i], &v[(i + 1) % 3], TieBreak::Upper))
                .collect();
            match sides {
                Ok(sides) if k == 0.0 || sides.iter().map(|p| p.length).sum::<f64>() < 2.0 * spec.threshold() => {
                    found = Some(sides);
                    break;
                }
                _ => skipped += 1,
            }
        }
        let Some(sides) = found else { continue };
        let lengths = [sides[0].length, sides[1].length, sides[2].length];
        let Ok(model) = Model::new(k, lengths) else {
            skipped += 1;
            continue;
        };
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..opts.samples_per_triangle {
            let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
            let (s, u) = (rng.gen::<f64>(), rng.gen::<f64>());
            let (Ok(x), Ok(y)) = (
                spec.point_along(&sides[i], s * lengths[i]),
                spec.point_along(&sides[j], u * lengths[j]),
            ) else {
                continue;
            };
            let Ok(actual) = spec.distance(&x, &y) else { continue };
            let bound = model.distance(&model.point(i, s), &model.point(j, u));
            worst = worst.max(actual - bound);
            sampled += 1;
        }
        violations.push(worst);
    }
    CheckReport::from_violations(
        "cat_thinness",
        tolerance,
        violations,
        json!({ "model_curvature": k, "skipped": skipped, "pairs": sampled }),
    )
}

/// One-sided finite-difference derivative (second order, steps `h` and
/// `2h`) of the distance between two geodesics against `-(cos a1 + cos a2)`.
pub fn first_variation_check(spec: &DomainSpec, g1: &GeodesicPath, g2: &GeodesicPath, h: f64) -> Result<CheckReport> {
    if !(h > 0.0 && 2.0 * h <= g1.length && 2.0 * h <= g2.length) {
        return Err(Error::OutOfRange {
            what: "h",
            value: h,
            min: 0.0,
            max: 0.5 * g1.length.min(g2.length),
        });
    }
    let sigma = spec.shortest_path(&g1.start, &g2.start, TieBreak::Forbid)?;
    let r0 = sigma.length;
    if r0 <= 0.0 {
        return Err(Error::Degenerate("the geodesics start at the same point".into()));
    }
    if r0 >= spec.threshold() {
        return Err(Error::Precondition(format!(
            "starting distance {r0} is not below pi/sqrt(K)"
        )));
    }
    let a1 = g1
        .direction_at(PathEnd::Start)?
        .angle_to(&sigma.direction_at(PathEnd::Start)?)?;
    let a2 = g2
        .direction_at(PathEnd::Start)?
        .angle_to(&sigma.direction_at(PathEnd::Finish)?)?;
    let r = |s: f64| -> Result<f64> { spec.distance(&spec.point_along(g1, s)?, &spec.point_along(g2, s)?) };
    let fd = (4.0 * r(h)? - r(2.0 * h)? - 3.0 * r0) / (2.0 * h);
    let err = (fd + a1.cos() + a2.cos()).abs();
    Ok(CheckReport::from_violations(
        "first_variation",
        10.0 * h + 1e-8,
        [err],
        json!({ "derivative": fd, "alpha1": a1, "alpha2": a2, "r0": r0 }),
    ))
}
