//! Discrete simple pursuit: at every step the pursuer moves a distance `D`
//! along a shortest path toward the evader's current position, then the
//! evader moves at most `D`.

mod dyadic;
mod policy;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curves::comparison_angle;
use crate::domain::{DomainSpec, GeodesicPath, PathEnd, Point, TieBreak};
use crate::error::{Error, Result};

pub use dyadic::{run_dyadic, DyadicLevel, DyadicReport};
pub use policy::{
    spiral_arclength, spiral_parameter, spiral_point, Evader, EvaderCurve, EvaderPolicy, Heading, StepContext,
};

/// Result of one pursuer move.
#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    /// `d(P, E) <= D` already held; nobody moves.
    Captured,
    /// New pursuer position and the path segment walked to reach it.
    Moved { next: Point, path: GeodesicPath },
}

fn check_long_separation(spec: &DomainSpec, l: f64, tie: TieBreak) -> Result<()> {
    let k = spec.curvature_bound();
    if k > 0.0 && l >= spec.threshold() && tie == TieBreak::Forbid {
        return Err(Error::Precondition(format!(
            "separation {l} is at least pi/sqrt(K) = {}; geodesics may branch, choose a tie-break",
            spec.threshold()
        )));
    }
    Ok(())
}

/// One pursuer step from `p` toward `e`.
pub fn pursuit_step(spec: &DomainSpec, p: &Point, e: &Point, d: f64, tie: TieBreak) -> Result<StepOutcome> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::OutOfRange {
            what: "step size",
            value: d,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    let l = spec.distance(p, e)?;
    if l <= d {
        return Ok(StepOutcome::Captured);
    }
    check_long_separation(spec, l, tie)?;
    let full = spec.shortest_path(p, e, tie)?;
    Ok(StepOutcome::Moved {
        next: spec.point_along(&full, d)?,
        path: full.slice(0.0, d),
    })
}

/// Everything recorded about step `i` (the move from `(P_i, E_i)` to
/// `(P_{i+1}, E_{i+1})`). Angles are `None` where the configuration is
/// degenerate, e.g. when the evader did not move.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// At `P_{i+1}` between the geodesics to `E_i` and `E_{i+1}`.
    pub alpha: Option<f64>,
    /// Model comparison angle for `alpha`.
    pub alpha_tilde: Option<f64>,
    /// Pursuer interior angle at `P_{i+1}`.
    pub beta: Option<f64>,
    /// Angle of the triangle `E_i P_{i+1} E_{i+1}` at `E_i`.
    pub phi: Option<f64>,
    /// Angle of the same triangle at `E_{i+1}`.
    pub delta: Option<f64>,
    /// Evader interior angle at `E_i`.
    pub theta: Option<f64>,
    /// `L_i - L_{i+1}`.
    pub increment: f64,
    /// `sin L_{i+1} sin(L_i - D)` in units where the curvature bound is 1.
    pub b_stat: f64,
    /// `d(E_i, E_{i+1})`.
    pub evader_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PursuitTrace {
    pub domain: DomainSpec,
    pub step_size: f64,
    pub tie_break: TieBreak,
    pub pursuer: Vec<Point>,
    pub evader: Vec<Point>,
    /// `L_i = d(P_i, E_i)`.
    pub separation: Vec<f64>,
    pub steps: Vec<StepRecord>,
    /// `tau_p[k]`: total rotation of the pursuer polygon `P_0 .. P_k`.
    pub tau_p: Vec<f64>,
    /// `tau_e[k]`: total rotation of the evader polygon `E_0 .. E_k`.
    pub tau_e: Vec<f64>,
    /// `r_p[k] = d(P_0, P_k)`, likewise for the evader; `c_*` are running
    /// maxima of `r_*`.
    pub r_p: Vec<f64>,
    pub r_e: Vec<f64>,
    pub c_p: Vec<f64>,
    pub c_e: Vec<f64>,
    pub capture_step: Option<usize>,
    /// Pursuer and evader segments `P_i P_{i+1}`, `E_i E_{i+1}`.
    #[serde(skip)]
    pub pursuer_paths: Vec<GeodesicPath>,
    #[serde(skip)]
    pub evader_paths: Vec<GeodesicPath>,
}

impl PursuitTrace {
    /// Number of completed steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn captured(&self) -> bool {
        self.capture_step.is_some()
    }

    /// Time of position `k`.
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step_size
    }
}

/// Configured discrete pursuit run.
#[derive(Debug, Clone)]
pub struct Pursuit<'a> {
    spec: &'a DomainSpec,
    start: Point,
    policy: EvaderPolicy,
    step_size: f64,
    max_steps: usize,
    tie_break: TieBreak,
    allow_long_start: bool,
}

impl<'a> Pursuit<'a> {
    pub fn new(spec: &'a DomainSpec, start: Point, policy: EvaderPolicy, step_size: f64) -> Self {
        Pursuit {
            spec,
            start,
            policy,
            step_size,
            max_steps: 1000,
            tie_break: TieBreak::Forbid,
            allow_long_start: false,
        }
    }

    pub fn max_steps(mut self, n: usize) -> Self {
        self.max_steps = n;
        self
    }

    pub fn tie_break(mut self, tie: TieBreak) -> Self {
        self.tie_break = tie;
        self
    }

    /// Permit `L_0 >= pi/sqrt(K)` on positively curved domains.
    pub fn allow_long_start(mut self, allow: bool) -> Self {
        self.allow_long_start = allow;
        self
    }

    pub fn run(&self) -> Result<PursuitTrace> {
        Run::new(self)?.finish(self.max_steps)
    }
}

/// Run discrete simple pursuit for at most `max_steps` steps.
pub fn run_discrete(
    spec: &DomainSpec,
    start: &Point,
    policy: &EvaderPolicy,
    step_size: f64,
    max_steps: usize,
    tie: TieBreak,
) -> Result<PursuitTrace> {
    Pursuit::new(spec, start.clone(), policy.clone(), step_size)
        .max_steps(max_steps)
        .tie_break(tie)
        .run()
}

fn angle(a: &GeodesicPath, ea: PathEnd, b: &GeodesicPath, eb: PathEnd) -> Option<f64> {
    let u = a.direction_at(ea).ok()?;
    let v = b.direction_at(eb).ok()?;
    u.angle_to(&v).ok()
}

struct Run<'a> {
    spec: &'a DomainSpec,
    d: f64,
    tie: TieBreak,
    evader: Evader,
    trace: PursuitTrace,
    /// Shortest path `P_i -> E_i` for the current `i`, computed ahead.
    ahead: Option<Result<GeodesicPath>>,
    /// Last evader segment of positive length.
    last_evader_move: Option<GeodesicPath>,
    /// Curvature used for B statistics and model angles.
    scale: f64,
}

impl<'a> Run<'a> {
    fn new(cfg: &Pursuit<'a>) -> Result<Self> {
        let spec = cfg.spec;
        let d = cfg.step_size;
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::config(
                "step_size",
                format!("must be positive and finite, got {d}"),
            ));
        }
        cfg.policy.check_domain(spec)?;
        spec.validate_point(&cfg.start)?;
        let p0 = spec.canonical(&cfg.start);
        let mut evader = Evader::new(cfg.policy.clone());
        let e0 = spec.canonical(&evader.start(spec, &p0)?);
        spec.validate_point(&e0).map_err(|e| Error::PolicyViolation {
            step: 0,
            detail: e.to_string(),
        })?;
        let l0 = spec.distance(&p0, &e0)?;
        if l0 <= d {
            return Err(Error::Precondition(format!(
                "initial separation {l0} is within the step size {d}"
            )));
        }
        if spec.curvature_bound() > 0.0 && l0 >= spec.threshold() && !cfg.allow_long_start {
            return Err(Error::Precondition(format!(
                "initial separation {l0} is at least pi/sqrt(K) = {}",
                spec.threshold()
            )));
        }
        let k = spec.curvature_bound();
        Ok(Run {
            spec,
            d,
            tie: cfg.tie_break,
            evader,
            trace: PursuitTrace {
                domain: spec.clone(),
                step_size: d,
                tie_break: cfg.tie_break,
                pursuer: vec![p0],
                evader: vec![e0],
                separation: vec![l0],
                steps: Vec::new(),
                tau_p: vec![0.0],
                tau_e: vec![0.0],
                r_p: vec![0.0],
                r_e: vec![0.0],
                c_p: vec![0.0],
                c_e: vec![0.0],
                capture_step: None,
                pursuer_paths: Vec::new(),
                evader_paths: Vec::new(),
            },
            ahead: None,
            last_evader_move: None,
            scale: if k > 0.0 { k } else { 1.0 },
        })
    }

    fn finish(mut self, max_steps: usize) -> Result<PursuitTrace> {
        for i in 0..max_steps {
            if *self.trace.separation.last().unwrap() <= self.d {
                self.trace.capture_step = Some(i);
                break;
            }
            self.step(i).map_err(|e| e.at_step(i))?;
        }
        if self.trace.capture_step.is_none() && *self.trace.separation.last().unwrap() <= self.d {
            self.trace.capture_step = Some(self.trace.steps.len());
        }
        Ok(self.trace)
    }

    fn step(&mut self, i: usize) -> Result<()> {
        let spec = self.spec;
        let d = self.d;
        let tie = self.tie.advanced(i as u64);
        let p = self.trace.pursuer[i].clone();
        let e = self.trace.evader[i].clone();
        let l = self.trace.separation[i];

        check_long_separation(spec, l, tie)?;
        let full = match self.ahead.take() {
            Some(path) => path?,
            None => spec.shortest_path(&p, &e, tie)?,
        };
        let p_next = spec.point_along(&full, d)?;
        let head = full.slice(0.0, d);
        let rest = full.slice(d, full.length);

        let e_next = self.evader.next(&StepContext {
            step: i,
            domain: spec,
            step_size: d,
            evader: &e,
            pursuer_next: &p_next,
        })?;
        let e_next = spec.canonical(&e_next);
        spec.validate_point(&e_next).map_err(|err| Error::PolicyViolation {
            step: i,
            detail: err.to_string(),
        })?;
        let evader_step = spec.distance(&e, &e_next)?;
        let slack = 1e-12 * (1.0 + coord_scale(&e_next));
        if evader_step > d * (1.0 + 1e-12) + slack {
            return Err(Error::PolicyViolation {
                step: i,
                detail: format!("evader moved {evader_step} with step size {d}"),
            });
        }
        let l_next = spec.distance(&p_next, &e_next)?;

        let next_tie = self.tie.advanced(i as u64 + 1);
        let ahead = if l_next > 0.0 {
            spec.shortest_path(&p_next, &e_next, next_tie)
        } else {
            Ok(GeodesicPath::trivial(p_next.clone()))
        };
        let evader_path = if evader_step > 0.0 {
            let side = if tie == TieBreak::Forbid { TieBreak::Upper } else { tie };
            spec.shortest_path(&e, &e_next, side)?
        } else {
            GeodesicPath::trivial(e.clone())
        };

        let (alpha, beta, delta) = match &ahead {
            Ok(next) => (
                angle(&rest, PathEnd::Start, next, PathEnd::Start),
                angle(&head, PathEnd::Finish, next, PathEnd::Start),
                angle(next, PathEnd::Finish, &evader_path, PathEnd::Finish),
            ),
            Err(_) => (None, None, None),
        };
        let phi = angle(&rest, PathEnd::Finish, &evader_path, PathEnd::Start);
        let theta = if evader_path.length > 0.0 {
            self.last_evader_move
                .as_ref()
                .and_then(|prev| angle(prev, PathEnd::Finish, &evader_path, PathEnd::Start))
        } else {
            None
        };
        let model_k = spec.curvature_bound().max(0.0);
        let alpha_tilde = comparison_angle(model_k, evader_step, l - d, l_next).ok();
        let rk = self.scale.sqrt();
        let b_stat = (l_next * rk).sin() * ((l - d) * rk).sin();

        let tr = &mut self.trace;
        // The turn at P_i counts once the pursuer has left it.
        let turn_p = match i {
            0 => 0.0,
            _ => tr.steps[i - 1].beta.map_or(0.0, |b| PI - b),
        };
        tr.tau_p.push(tr.tau_p[i] + turn_p);
        tr.tau_e.push(tr.tau_e[i] + theta.map_or(0.0, |t| PI - t));

        let r_p = spec.distance(&tr.pursuer[0], &p_next)?;
        let r_e = spec.distance(&tr.evader[0], &e_next)?;
        tr.c_p.push(tr.c_p.last().unwrap().max(r_p));
        tr.c_e.push(tr.c_e.last().unwrap().max(r_e));
        tr.r_p.push(r_p);
        tr.r_e.push(r_e);

        tr.steps.push(StepRecord {
            alpha,
            alpha_tilde,
            beta,
            phi,
            delta,
            theta,
            increment: l - l_next,
            b_stat,
            evader_step,
        });
        tr.pursuer.push(p_next);
        tr.evader.push(e_next);
        tr.separation.push(l_next);
        tr.pursuer_paths.push(head);
        if evader_path.length > 0.0 {
            self.last_evader_move = Some(evader_path.clone());
        }
        tr.evader_paths.push(evader_path);
        self.ahead = Some(ahead);
        Ok(())
    }
}

fn coord_scale(p: &Point) -> f64 {
    match p {
        Point::Coords(c) => crate::domain::vec::norm(c),
        Point::Tree(_) => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Disk, TieBreak};

    fn runner(x: f64, y: f64, dir: [f64; 2]) -> EvaderPolicy {
        EvaderPolicy::GeodesicRunner {
            start: Point::xy(x, y),
            heading: Heading::Direction(dir.to_vec()),
        }
    }

    #[test]
    fn euclidean_step() {
        let e2 = DomainSpec::euclidean(2);
        let out = pursuit_step(&e2, &Point::xy(0.0, 0.0), &Point::xy(10.0, 0.0), 1.0, TieBreak::Forbid).unwrap();
        match out {
            StepOutcome::Moved { next, .. } => assert_eq!(next, Point::xy(1.0, 0.0)),
            other => panic!("{other:?}"),
        }
        let near = pursuit_step(&e2, &Point::xy(0.0, 0.0), &Point::xy(1.0, 0.0), 1.0, TieBreak::Forbid).unwrap();
        assert_eq!(near, StepOutcome::Captured);
    }

    #[test]
    fn sphere_step_follows_great_circle() {
        let s = DomainSpec::sphere(1.0).unwrap();
        let p = Point::Coords(vec![0.0, 0.0, 1.0]);
        let e = Point::Coords(vec![1f64.sin(), 0.0, 1f64.cos()]);
        let StepOutcome::Moved { next, .. } = pursuit_step(&s, &p, &e, 0.5, TieBreak::Forbid).unwrap() else {
            panic!()
        };
        let q = next.coords();
        assert!((q[0] - 0.5f64.sin()).abs() < 1e-12 && q[1].abs() < 1e-15 && (q[2] - 0.5f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn step_wraps_onto_removed_disk() {
        let pmd = DomainSpec::plane_minus_disks(vec![Disk::new([0.0, 0.0], 1.0)]).unwrap();
        let p = Point::xy(-2.0, 0.0);
        let e = Point::xy(2.0, 0.0);
        // Separation 2 sqrt(3) + pi/3 exceeds pi, so a tie-break is required.
        assert!(matches!(
            pursuit_step(&pmd, &p, &e, 2.0, TieBreak::Forbid),
            Err(Error::Precondition(_))
        ));
        let StepOutcome::Moved { next, .. } = pursuit_step(&pmd, &p, &e, 2.0, TieBreak::Upper).unwrap() else {
            panic!()
        };
        let a = 2.0 * PI / 3.0 - (2.0 - 3f64.sqrt());
        let q = next.coords();
        assert!(
            (q[0] - a.cos()).abs() < 1e-12 && (q[1] - a.sin()).abs() < 1e-12,
            "{q:?}"
        );
        let back = pmd.distance(&next, &e).unwrap();
        assert!((back - (pmd.distance(&p, &e).unwrap() - 2.0)).abs() < 1e-9);
    }

    #[test]
    fn collinear_chase_keeps_distance() {
        let e2 = DomainSpec::euclidean(2);
        let tr = run_discrete(
            &e2,
            &Point::xy(0.0, 0.0),
            &runner(5.0, 0.0, [1.0, 0.0]),
            0.1,
            2000,
            TieBreak::Forbid,
        )
        .unwrap();
        assert!(!tr.captured());
        assert!(tr.separation.iter().all(|l| (l - 5.0).abs() < 1e-9));
        assert!(tr.tau_p.iter().all(|t| t.abs() < 1e-12));
        assert_eq!(tr.tau_p.len(), tr.pursuer.len());
        assert_eq!(tr.tau_e.len(), tr.evader.len());
    }

    #[test]
    fn stationary_evader_is_caught() {
        let e2 = DomainSpec::euclidean(2);
        let policy = EvaderPolicy::PrescribedCurve {
            curve: EvaderCurve::Stationary {
                point: Point::xy(3.0, 4.0),
            },
        };
        let tr = run_discrete(&e2, &Point::xy(0.0, 0.0), &policy, 1.0, 100, TieBreak::Forbid).unwrap();
        assert_eq!(tr.capture_step, Some(4));
        assert_eq!(tr.steps.len(), 4);
        assert!(tr.steps.iter().all(|s| s.alpha_tilde == Some(0.0)));
    }

    #[test]
    fn capture_on_the_boundary_is_inclusive() {
        let e2 = DomainSpec::euclidean(1);
        let policy = EvaderPolicy::PrescribedCurve {
            curve: EvaderCurve::Stationary {
                point: Point::Coords(vec![2.0]),
            },
        };
        let tr = run_discrete(&e2, &Point::Coords(vec![0.0]), &policy, 1.0, 10, TieBreak::Forbid).unwrap();
        assert_eq!(tr.capture_step, Some(1));
    }

    #[test]
    fn evader_entering_a_disk_is_rejected() {
        let pmd = DomainSpec::plane_minus_disks(vec![Disk::new([0.0, 0.0], 1.0)]).unwrap();
        let policy = EvaderPolicy::PrescribedCurve {
            curve: EvaderCurve::Polyline {
                points: vec![vec![3.0, 0.0], vec![-3.0, 0.0]],
                speed: 1.0,
            },
        };
        let err = run_discrete(&pmd, &Point::xy(3.5, 2.0), &policy, 0.5, 20, TieBreak::Forbid).unwrap_err();
        assert!(matches!(err, Error::PolicyViolation { step: 4, .. }), "{err}");
    }

    #[test]
    fn long_start_needs_opt_in() {
        let pmd = DomainSpec::plane_minus_disks(vec![Disk::new([0.0, 0.0], 2.0)]).unwrap();
        let policy = EvaderPolicy::AntipodalOscillator { disk: 0 };
        let p0 = Point::xy(2.0, 0.0);
        let plain = Pursuit::new(&pmd, p0.clone(), policy.clone(), 0.5).tie_break(TieBreak::Alternate(0));
        assert!(matches!(plain.run(), Err(Error::Precondition(_))));
        let tr = plain.allow_long_start(true).max_steps(50).run().unwrap();
        assert!(!tr.captured());
        for (n, t) in tr.tau_p.iter().enumerate().skip(1) {
            assert!((t - (n - 1) as f64 * PI).abs() < 1e-6 * n as f64, "{n} {t}");
        }
    }

    #[test]
    fn orbit_keeps_distance_and_stays_straight() {
        let pmd = DomainSpec::plane_minus_disks(vec![Disk::new([0.0, 0.0], 2.0)]).unwrap();
        let policy = EvaderPolicy::CircleOrbiter { disk: 0, lead: 1.0 };
        let tr = run_discrete(&pmd, &Point::xy(2.0, 0.0), &policy, 0.05, 2000, TieBreak::Forbid).unwrap();
        assert!(!tr.captured());
        assert!(tr.separation.iter().all(|l| (l - 1.0).abs() < 1e-9));
        assert!(*tr.tau_p.last().unwrap() < 1e-6);
        assert!(*tr.tau_e.last().unwrap() < 1e-6);
    }

    #[test]
    fn runs_are_deterministic() {
        let disk = DomainSpec::unit_disk();
        let policy = EvaderPolicy::RandomWalk {
            seed: 7,
            start: Point::xy(0.5, 0.0),
            extent: 1.0,
        };
        let a = run_discrete(&disk, &Point::xy(-0.5, 0.0), &policy, 0.05, 5000, TieBreak::Forbid).unwrap();
        let b = run_discrete(&disk, &Point::xy(-0.5, 0.0), &policy, 0.05, 5000, TieBreak::Forbid).unwrap();
        assert!(a.captured());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn tree_pursuit_captures() {
        let tree = DomainSpec::metric_tree(
            4,
            vec![
                crate::domain::TreeEdge {
                    a: 0,
                    b: 1,
                    length: 1.0,
                },
                crate::domain::TreeEdge {
                    a: 1,
                    b: 2,
                    length: 1.0,
                },
                crate::domain::TreeEdge {
                    a: 1,
                    b: 3,
                    length: 1.0,
                },
            ],
        )
        .unwrap();
        let policy = EvaderPolicy::RandomWalk {
            seed: 3,
            start: Point::on_edge(1, 1.0),
            extent: 1.0,
        };
        let tr = run_discrete(&tree, &Point::on_edge(0, 0.0), &policy, 0.05, 100_000, TieBreak::Forbid).unwrap();
        assert!(tr.captured());
        assert!(tr.separation.windows(2).all(|w| w[1] <= w[0] + 1e-9));
    }

    #[test]
    fn dyadic_stationary_levels_agree() {
        let e2 = DomainSpec::euclidean(2);
        let curve = EvaderCurve::Stationary {
            point: Point::xy(10.0, 0.0),
        };
        let rep = run_dyadic(&e2, &Point::xy(0.0, 0.0), &curve, 2, 5, 4.0).unwrap();
        assert!(!rep.horizon_rounded);
        assert!(rep.sup_gaps.iter().all(|g| *g < 1e-12), "{:?}", rep.sup_gaps);
        let rounded = run_dyadic(&e2, &Point::xy(0.0, 0.0), &curve, 2, 3, 4.1).unwrap();
        assert!(rounded.horizon_rounded);
        assert_eq!(rounded.horizon_used, 4.0);
    }
}
