use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{vec, DomainKind, DomainSpec, Point, TieBreak};
use crate::error::{Error, Result};

/// How a geodesic runner picks its course.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Heading {
    /// Constant velocity direction (Euclidean spaces only).
    Direction(Vec<f64>),
    /// Run along the geodesic toward a far point and stop there.
    Toward(Point),
}

/// A unit-speed-or-slower evader curve `E(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "curve", rename_all = "snake_case")]
pub enum EvaderCurve {
    Stationary {
        point: Point,
    },
    /// `start + t * velocity`, `|velocity| <= 1`.
    Line {
        start: Vec<f64>,
        velocity: Vec<f64>,
    },
    /// Great circle on a sphere through `start` with unit initial tangent
    /// `tangent`, travelled at `speed`.
    GreatCircle {
        start: Vec<f64>,
        tangent: Vec<f64>,
        speed: f64,
    },
    /// Boundary circle of removed disk `disk`, counter-clockwise from
    /// `start_angle`, at `speed`.
    Circle {
        disk: usize,
        start_angle: f64,
        speed: f64,
    },
    /// `(u cos 2 pi u, u sin 2 pi u)` at unit speed, from parameter `u0`.
    Spiral {
        u0: f64,
    },
    /// Straight polyline in ambient coordinates, at `speed`, stopping at
    /// the last point.
    Polyline {
        points: Vec<Vec<f64>>,
        speed: f64,
    },
}

/// Arclength of the spiral from `u = 0`.
pub fn spiral_arclength(u: f64) -> f64 {
    let w = 2.0 * PI * u;
    (w * (1.0 + w * w).sqrt() + w.asinh()) / (4.0 * PI)
}

/// Parameter `u` at spiral arclength `s` (Newton on a monotone function).
pub fn spiral_parameter(s: f64) -> f64 {
    let mut u = (s / PI).sqrt();
    for _ in 0..60 {
        let speed = (1.0 + (2.0 * PI * u).powi(2)).sqrt();
        let step = (spiral_arclength(u) - s) / speed;
        u = (u - step).max(0.0);
        if step.abs() <= 1e-15 * u.max(1.0) {
            break;
        }
    }
    u
}

pub fn spiral_point(u: f64) -> [f64; 2] {
    let (s, c) = (2.0 * PI * u).sin_cos();
    [u * c, u * s]
}

impl EvaderCurve {
    pub fn at(&self, domain: &DomainSpec, t: f64) -> Result<Point> {
        Ok(match self {
            EvaderCurve::Stationary { point } => point.clone(),
            EvaderCurve::Line { start, velocity } => Point::Coords(vec::axpy(start, t, velocity)),
            EvaderCurve::GreatCircle { start, tangent, speed } => {
                let r = vec::norm(start);
                let phi = speed * t / r;
                let (s, c) = phi.sin_cos();
                Point::Coords(start.iter().zip(tangent).map(|(o, w)| c * o + s * r * w).collect())
            }
            EvaderCurve::Circle {
                disk,
                start_angle,
                speed,
            } => {
                let d = domain
                    .disks()
                    .get(*disk)
                    .ok_or_else(|| Error::config("evader.curve.disk", format!("no disk {disk}")))?;
                Point::Coords(d.point_at_angle(start_angle + speed * t / d.radius).to_vec())
            }
            EvaderCurve::Spiral { u0 } => {
                let s = spiral_arclength(*u0) + t;
                let p = spiral_point(spiral_parameter(s));
                Point::Coords(p.to_vec())
            }
            EvaderCurve::Polyline { points, speed } => {
                let mut left = speed * t;
                for w in points.windows(2) {
                    let len = vec::dist(&w[0], &w[1]);
                    if left <= len {
                        let dir = vec::sub(&w[1], &w[0]);
                        return Ok(Point::Coords(vec::axpy(&w[0], left / len, &dir)));
                    }
                    left -= len;
                }
                Point::Coords(points.last().cloned().unwrap_or_default())
            }
        })
    }

    /// Largest speed of the curve, for the unit-speed precondition.
    pub fn speed(&self) -> f64 {
        match self {
            EvaderCurve::Stationary { .. } => 0.0,
            EvaderCurve::Line { velocity, .. } => vec::norm(velocity),
            EvaderCurve::GreatCircle { speed, .. }
            | EvaderCurve::Circle { speed, .. }
            | EvaderCurve::Polyline { speed, .. } => speed.abs(),
            EvaderCurve::Spiral { .. } => 1.0,
        }
    }
}

/// Declarative evader strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvaderPolicy {
    GeodesicRunner {
        start: Point,
        #[serde(flatten)]
        heading: Heading,
    },
    /// Visit the points in order, at most one step length per step.
    Waypoints {
        points: Vec<Point>,
    },
    /// Unit-speed spiral in the plane from parameter `u0`.
    Spiral {
        u0: f64,
    },
    /// Stay diametrically opposite the pursuer on a removed-disk boundary.
    AntipodalOscillator {
        disk: usize,
    },
    /// Orbit a removed-disk boundary counter-clockwise at full speed,
    /// starting `lead` ahead (in arclength) of the pursuer.
    CircleOrbiter {
        disk: usize,
        lead: f64,
    },
    /// Walk toward uniformly sampled targets.
    RandomWalk {
        #[serde(default)]
        seed: u64,
        start: Point,
        #[serde(default = "default_extent")]
        extent: f64,
    },
    PrescribedCurve {
        curve: EvaderCurve,
    },
}

fn default_extent() -> f64 {
    10.0
}

impl EvaderPolicy {
    pub fn is_stochastic(&self) -> bool {
        matches!(self, EvaderPolicy::RandomWalk { .. })
    }

    /// Checks that the policy makes sense on `domain`.
    pub fn check_domain(&self, domain: &DomainSpec) -> Result<()> {
        let planar_only = |what: &str| -> Result<()> {
            if domain.is_planar() {
                Ok(())
            } else {
                Err(Error::Unsupported(format!("{what} needs a planar domain")))
            }
        };
        let disk = |k: usize, what: &str| -> Result<()> {
            if k < domain.disks().len() {
                Ok(())
            } else {
                Err(Error::Unsupported(format!(
                    "{what} needs removed disk {k}, domain has {}",
                    domain.disks().len()
                )))
            }
        };
        match self {
            EvaderPolicy::GeodesicRunner {
                heading: Heading::Direction(v),
                ..
            } => {
                if !matches!(domain.kind(), DomainKind::Euclidean { .. }) {
                    return Err(Error::Unsupported(
                        "a fixed heading needs a Euclidean space; use a target point".into(),
                    ));
                }
                if Some(v.len()) != domain.ambient_dim() || vec::normalize(v).is_none() {
                    return Err(Error::config(
                        "evader.direction",
                        "must be a nonzero vector of the space's dimension",
                    ));
                }
                Ok(())
            }
            EvaderPolicy::Spiral { .. } => planar_only("the spiral evader"),
            EvaderPolicy::AntipodalOscillator { disk: k } => disk(*k, "the antipodal oscillator"),
            EvaderPolicy::CircleOrbiter { disk: k, lead } => {
                disk(*k, "the circle orbiter")?;
                let r = domain.disks()[*k].radius;
                if !(*lead > 0.0 && *lead < PI * r) {
                    return Err(Error::config("evader.lead", format!("must lie in (0, {})", PI * r)));
                }
                Ok(())
            }
            EvaderPolicy::PrescribedCurve { curve } => {
                if curve.speed() > 1.0 + 1e-12 {
                    return Err(Error::config("evader.curve.speed", "evader speed must be at most 1"));
                }
                match curve {
                    EvaderCurve::Circle { disk: k, .. } => disk(*k, "a boundary-circle curve"),
                    EvaderCurve::Spiral { .. } => planar_only("the spiral curve"),
                    EvaderCurve::GreatCircle { .. } if !matches!(domain.kind(), DomainKind::Sphere { .. }) => {
                        Err(Error::Unsupported("great circles need a sphere".into()))
                    }
                    _ => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }
}

/// What an evader sees when choosing its next position.
pub struct StepContext<'a> {
    pub step: usize,
    pub domain: &'a DomainSpec,
    pub step_size: f64,
    pub evader: &'a Point,
    pub pursuer_next: &'a Point,
}

/// Running state of an evader policy.
pub struct Evader {
    policy: EvaderPolicy,
    rng: Option<ChaCha8Rng>,
    waypoint: usize,
    target: Option<Point>,
}

fn rotate_about(center: [f64; 2], p: &[f64], angle: f64) -> Vec<f64> {
    let (s, c) = angle.sin_cos();
    let (x, y) = (p[0] - center[0], p[1] - center[1]);
    vec![center[0] + c * x - s * y, center[1] + s * x + c * y]
}

/// Move from `from` toward `to` by at most `d` along a shortest path.
fn advance(domain: &DomainSpec, from: &Point, to: &Point, d: f64) -> Result<Point> {
    let path = domain.shortest_path(from, to, TieBreak::Upper)?;
    if path.length <= d {
        Ok(domain.canonical(to))
    } else {
        domain.point_along(&path, d)
    }
}

impl Evader {
    pub fn new(policy: EvaderPolicy) -> Self {
        let rng = match &policy {
            EvaderPolicy::RandomWalk { seed, .. } => Some(ChaCha8Rng::seed_from_u64(*seed)),
            _ => None,
        };
        Evader {
            policy,
            rng,
            waypoint: 0,
            target: None,
        }
    }

    pub fn policy(&self) -> &EvaderPolicy {
        &self.policy
    }

    /// Initial evader position given the pursuer's start.
    pub fn start(&mut self, domain: &DomainSpec, pursuer: &Point) -> Result<Point> {
        Ok(match &self.policy {
            EvaderPolicy::GeodesicRunner { start, .. } | EvaderPolicy::RandomWalk { start, .. } => start.clone(),
            EvaderPolicy::Waypoints { points } => points
                .first()
                .cloned()
                .ok_or_else(|| Error::config("evader.points", "needs at least one point"))?,
            EvaderPolicy::Spiral { u0 } => Point::Coords(spiral_point(*u0).to_vec()),
            EvaderPolicy::AntipodalOscillator { disk } => {
                let c = domain.disks()[*disk].center;
                let p = pursuer.coords();
                Point::xy(2.0 * c[0] - p[0], 2.0 * c[1] - p[1])
            }
            EvaderPolicy::CircleOrbiter { disk, lead } => {
                let d = domain.disks()[*disk];
                Point::Coords(rotate_about(d.center, pursuer.coords(), lead / d.radius))
            }
            EvaderPolicy::PrescribedCurve { curve } => curve.at(domain, 0.0)?,
        })
    }

    /// The evader's position after step `ctx.step`.
    pub fn next(&mut self, ctx: &StepContext) -> Result<Point> {
        let d = ctx.step_size;
        let t = (ctx.step + 1) as f64 * d;
        Ok(match &self.policy {
            EvaderPolicy::GeodesicRunner { start, heading } => match heading {
                Heading::Direction(v) => {
                    let u = vec::normalize(v).expect("checked nonzero");
                    Point::Coords(vec::axpy(start.coords(), t, &u))
                }
                Heading::Toward(target) => advance(ctx.domain, ctx.evader, target, d)?,
            },
            EvaderPolicy::Waypoints { points } => {
                while self.waypoint + 1 < points.len()
                    && ctx.domain.distance(ctx.evader, &points[self.waypoint + 1])? == 0.0
                {
                    self.waypoint += 1;
                }
                match points.get(self.waypoint + 1) {
                    Some(next) => advance(ctx.domain, ctx.evader, next, d)?,
                    None => ctx.evader.clone(),
                }
            }
            EvaderPolicy::Spiral { u0 } => EvaderCurve::Spiral { u0: *u0 }.at(ctx.domain, t)?,
            EvaderPolicy::AntipodalOscillator { disk } => {
                let c = ctx.domain.disks()[*disk].center;
                let p = ctx.pursuer_next.coords();
                Point::xy(2.0 * c[0] - p[0], 2.0 * c[1] - p[1])
            }
            EvaderPolicy::CircleOrbiter { disk, .. } => {
                let disk = ctx.domain.disks()[*disk];
                Point::Coords(rotate_about(disk.center, ctx.evader.coords(), d / disk.radius))
            }
            EvaderPolicy::RandomWalk { extent, .. } => {
                let rng = self.rng.as_mut().expect("seeded");
                let reached = match &self.target {
                    Some(tg) => ctx.domain.distance(ctx.evader, tg)? == 0.0,
                    None => true,
                };
                if reached {
                    self.target = Some(ctx.domain.sample_point(rng, *extent));
                }
                let target = self.target.clone().unwrap();
                advance(ctx.domain, ctx.evader, &target, d)?
            }
            EvaderPolicy::PrescribedCurve { curve } => curve.at(ctx.domain, t)?,
        })
    }
}
