//! Playing fields: point representations, distances, shortest paths,
//! directions and angles for each supported CAT(K) domain.
//!
//! All domains are immutable after construction; every operation is a pure
//! function of its inputs, so a [`DomainSpec`] can be shared freely between
//! threads.

mod disks;
mod path;
mod region;
mod sphere;
mod tree;
pub mod vec;

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use disks::Disk;
pub use path::{GeodesicPath, Orientation, PathEnd, Piece};
pub use region::RegionBoundary;
pub use tree::{MetricTree, TreeEdge};

/// Tolerance for point validity.
pub const POINT_TOL: f64 = 1e-12;
/// Tolerance for geometric identities.
pub const GEOM_TOL: f64 = 1e-9;

/// A location on a metric tree: an edge and an offset from the edge's first
/// endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreePoint {
    pub edge: usize,
    pub offset: f64,
}

/// A point of some domain. Planar, Euclidean and spherical domains use
/// ambient coordinates; metric trees use an edge location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Coords(Vec<f64>),
    Tree(TreePoint),
}

impl Point {
    pub fn xy(x: f64, y: f64) -> Self {
        Point::Coords(vec![x, y])
    }

    pub fn on_edge(edge: usize, offset: f64) -> Self {
        Point::Tree(TreePoint { edge, offset })
    }

    /// Ambient coordinates. Panics on tree points.
    pub fn coords(&self) -> &[f64] {
        match self {
            Point::Coords(c) => c,
            Point::Tree(_) => panic!("tree point has no ambient coordinates"),
        }
    }

    pub fn into_coords(self) -> Vec<f64> {
        match self {
            Point::Coords(c) => c,
            Point::Tree(_) => panic!("tree point has no ambient coordinates"),
        }
    }

    pub fn as_tree(&self) -> Option<TreePoint> {
        match self {
            Point::Tree(t) => Some(*t),
            Point::Coords(_) => None,
        }
    }
}

/// An initial direction of a geodesic at a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Direction {
    /// Unit tangent vector in ambient coordinates.
    Tangent(Vec<f64>),
    /// Outgoing tree edge and whether travel increases the edge offset.
    Tree { edge: usize, increasing: bool },
}

impl Direction {
    pub fn negated(self) -> Direction {
        match self {
            Direction::Tangent(v) => Direction::Tangent(v.iter().map(|x| -x).collect()),
            Direction::Tree { edge, increasing } => Direction::Tree {
                edge,
                increasing: !increasing,
            },
        }
    }

    /// Angle distance between two directions at the same point.
    pub fn angle_to(&self, other: &Direction) -> Result<f64> {
        match (self, other) {
            (Direction::Tangent(u), Direction::Tangent(v)) if u.len() == v.len() => Ok(vec::unit_angle(u, v)),
            (Direction::Tree { .. }, Direction::Tree { .. }) => Ok(if self == other { 0.0 } else { PI }),
            _ => Err(Error::Degenerate("directions of different kinds".into())),
        }
    }
}

/// How to choose among several geodesics of equal length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Report an ambiguity error.
    #[default]
    Forbid,
    /// Take the candidate lying furthest to the left of the travel direction.
    Upper,
    /// Take the candidate lying furthest to the right.
    Lower,
    /// `Upper` for even counters and `Lower` for odd ones. Pursuit advances
    /// the counter by one per step.
    Alternate(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Forbid,
    Upper,
    Lower,
}

impl TieBreak {
    pub(crate) fn side(self) -> Side {
        match self {
            TieBreak::Forbid => Side::Forbid,
            TieBreak::Upper => Side::Upper,
            TieBreak::Lower => Side::Lower,
            TieBreak::Alternate(c) if c % 2 == 0 => Side::Upper,
            TieBreak::Alternate(_) => Side::Lower,
        }
    }

    /// The tie-break in effect `k` steps later.
    pub fn advanced(self, k: u64) -> TieBreak {
        match self {
            TieBreak::Alternate(c) => TieBreak::Alternate(c.wrapping_add(k)),
            other => other,
        }
    }
}

/// Declarative description of a domain, as found in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainKind {
    Euclidean { dim: usize },
    ConvexRegion { boundary: RegionBoundary },
    Sphere { radius: f64 },
    PlaneMinusDisks { disks: Vec<Disk> },
    MetricTree { vertices: usize, edges: Vec<TreeEdge> },
}

/// A validated playing field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainKind", into = "DomainKind")]
pub struct DomainSpec {
    kind: DomainKind,
    curvature_bound: f64,
    compact: bool,
    tree: Option<MetricTree>,
}

impl TryFrom<DomainKind> for DomainSpec {
    type Error = Error;
    fn try_from(kind: DomainKind) -> Result<Self> {
        DomainSpec::new(kind)
    }
}

impl From<DomainSpec> for DomainKind {
    fn from(spec: DomainSpec) -> Self {
        spec.kind
    }
}

impl DomainSpec {
    pub fn new(kind: DomainKind) -> Result<Self> {
        let (curvature_bound, compact, tree) = match &kind {
            DomainKind::Euclidean { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidDomain("dimension must be positive".into()));
                }
                (0.0, false, None)
            }
            DomainKind::ConvexRegion { boundary } => {
                boundary.validate()?;
                (0.0, true, None)
            }
            DomainKind::Sphere { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidDomain(format!("sphere radius {radius} must be > 0")));
                }
                (1.0 / (radius * radius), true, None)
            }
            DomainKind::PlaneMinusDisks { disks } => {
                disks::validate(disks)?;
                // Every radius is at least 1, so the domain is CAT(1).
                (1.0, false, None)
            }
            DomainKind::MetricTree { vertices, edges } => (0.0, true, Some(MetricTree::new(*vertices, edges.clone())?)),
        };
        Ok(DomainSpec {
            kind,
            curvature_bound,
            compact,
            tree,
        })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new(DomainKind::Euclidean { dim }).expect("valid dimension")
    }

    pub fn sphere(radius: f64) -> Result<Self> {
        Self::new(DomainKind::Sphere { radius })
    }

    pub fn unit_disk() -> Self {
        Self::new(DomainKind::ConvexRegion {
            boundary: RegionBoundary::Disk {
                center: [0.0, 0.0],
                radius: 1.0,
            },
        })
        .expect("unit disk is valid")
    }

    pub fn convex_polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(DomainKind::ConvexRegion {
            boundary: RegionBoundary::Polygon { vertices },
        })
    }

    pub fn plane_minus_disks(disks: Vec<Disk>) -> Result<Self> {
        Self::new(DomainKind::PlaneMinusDisks { disks })
    }

    /// Plane minus disks without the radius and disjointness checks, with a
    /// caller-declared curvature bound. Only for negative controls: the
    /// result need not be CAT(K) at all.
    pub fn plane_minus_disks_unchecked(disks: Vec<Disk>, curvature_bound: f64) -> Self {
        DomainSpec {
            kind: DomainKind::PlaneMinusDisks { disks },
            curvature_bound,
            compact: false,
            tree: None,
        }
    }

    pub fn metric_tree(vertices: usize, edges: Vec<TreeEdge>) -> Result<Self> {
        Self::new(DomainKind::MetricTree { vertices, edges })
    }

    /// Random tree on `n_edges + 1` vertices; each new vertex hangs off a
    /// uniformly chosen earlier one with edge length in `[0.5, 2)`.
    pub fn random_tree(n_edges: usize, rng: &mut impl Rng) -> Self {
        let edges = (0..n_edges)
            .map(|k| TreeEdge {
                a: rng.gen_range(0..=k),
                b: k + 1,
                length: rng.gen_range(0.5..2.0),
            })
            .collect();
        Self::metric_tree(n_edges + 1, edges).expect("random tree is valid")
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn curvature_bound(&self) -> f64 {
        self.curvature_bound
    }

    pub fn is_compact(&self) -> bool {
        self.compact
    }

    /// `pi / sqrt(K)`, infinite when `K <= 0`.
    pub fn threshold(&self) -> f64 {
        if self.curvature_bound > 0.0 {
            PI / self.curvature_bound.sqrt()
        } else {
            f64::INFINITY
        }
    }

    pub fn is_planar(&self) -> bool {
        matches!(
            self.kind,
            DomainKind::Euclidean { dim: 2 } | DomainKind::ConvexRegion { .. } | DomainKind::PlaneMinusDisks { .. }
        )
    }

    pub fn disks(&self) -> &[Disk] {
        match &self.kind {
            DomainKind::PlaneMinusDisks { disks } => disks,
            _ => &[],
        }
    }

    pub fn tree(&self) -> Option<&MetricTree> {
        self.tree.as_ref()
    }

    /// Ambient dimension of coordinate points, or `None` for trees.
    pub fn ambient_dim(&self) -> Option<usize> {
        match &self.kind {
            DomainKind::Euclidean { dim } => Some(*dim),
            DomainKind::ConvexRegion { .. } | DomainKind::PlaneMinusDisks { .. } => Some(2),
            DomainKind::Sphere { .. } => Some(3),
            DomainKind::MetricTree { .. } => None,
        }
    }

    pub fn validate_point(&self, p: &Point) -> Result<()> {
        match (p, &self.kind) {
            (Point::Tree(t), DomainKind::MetricTree { .. }) => self.tree.as_ref().expect("tree index").validate(*t),
            (Point::Coords(c), _) if Some(c.len()) == self.ambient_dim() => {
                if c.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidPoint(format!("non-finite coordinates {c:?}")));
                }
                match &self.kind {
                    DomainKind::Euclidean { .. } => Ok(()),
                    DomainKind::ConvexRegion { boundary } => boundary.check(c),
                    DomainKind::Sphere { radius } => sphere::validate(*radius, c),
                    DomainKind::PlaneMinusDisks { disks } => disks::validate_point(disks, c),
                    DomainKind::MetricTree { .. } => unreachable!(),
                }
            }
            _ => Err(Error::InvalidPoint(format!(
                "point {p:?} has the wrong representation for this domain"
            ))),
        }
    }

    /// Canonical form of a point (tree vertices get a single representation).
    pub fn canonical(&self, p: &Point) -> Point {
        match (p, &self.tree) {
            (Point::Tree(t), Some(tree)) => Point::Tree(tree.canonical(*t)),
            _ => p.clone(),
        }
    }

    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        self.validate_point(p)?;
        self.validate_point(q)?;
        Ok(match &self.kind {
            DomainKind::Euclidean { .. } | DomainKind::ConvexRegion { .. } => vec::dist(p.coords(), q.coords()),
            DomainKind::Sphere { radius } => sphere::distance(*radius, p.coords(), q.coords()),
            DomainKind::PlaneMinusDisks { disks } => disks::distance(disks, vec::xy(p.coords()), vec::xy(q.coords())),
            DomainKind::MetricTree { .. } => {
                let tree = self.tree.as_ref().expect("tree index");
                tree.distance(p.as_tree().unwrap(), q.as_tree().unwrap())
            }
        })
    }

    pub fn shortest_path(&self, p: &Point, q: &Point, tie: TieBreak) -> Result<GeodesicPath> {
        self.validate_point(p)?;
        self.validate_point(q)?;
        match &self.kind {
            DomainKind::Euclidean { .. } | DomainKind::ConvexRegion { .. } => Ok(GeodesicPath::new(
                p.clone(),
                vec![Piece::Line {
                    from: p.coords().to_vec(),
                    to: q.coords().to_vec(),
                }],
            )),
            DomainKind::Sphere { radius } => sphere::shortest_path(*radius, p.coords(), q.coords(), tie.side()),
            DomainKind::PlaneMinusDisks { disks } => {
                disks::shortest_path(disks, vec::xy(p.coords()), vec::xy(q.coords()), tie.side())
            }
            DomainKind::MetricTree { .. } => {
                let tree = self.tree.as_ref().expect("tree index");
                Ok(tree.shortest_path(p.as_tree().unwrap(), q.as_tree().unwrap()))
            }
        }
    }

    /// All geodesics from `p` to `q` whose length is within `tol` of the
    /// minimum, as distinct paths. Only plane-minus-disks and spheres can
    /// return more than one.
    pub fn shortest_path_candidates(&self, p: &Point, q: &Point, tol: f64) -> Result<Vec<GeodesicPath>> {
        match &self.kind {
            DomainKind::PlaneMinusDisks { disks } => {
                self.validate_point(p)?;
                self.validate_point(q)?;
                Ok(disks::candidates(disks, vec::xy(p.coords()), vec::xy(q.coords()), tol))
            }
            DomainKind::Sphere { radius } if sphere::is_antipodal(*radius, p.coords(), q.coords()) => Ok(vec![
                self.shortest_path(p, q, TieBreak::Upper)?,
                self.shortest_path(p, q, TieBreak::Lower)?,
            ]),
            _ => Ok(vec![self.shortest_path(p, q, TieBreak::Upper)?]),
        }
    }

    pub fn point_along(&self, path: &GeodesicPath, s: f64) -> Result<Point> {
        Ok(self.canonical(&path.point_along(s)?))
    }

    pub fn direction_at(&self, path: &GeodesicPath, end: PathEnd) -> Result<Direction> {
        path.direction_at(end)
    }

    /// Angle at `p` between the geodesics from `p` to `q` and to `r`.
    pub fn angle_at(&self, p: &Point, q: &Point, r: &Point, tie: TieBreak) -> Result<f64> {
        let pq = self.shortest_path(p, q, tie)?;
        let pr = self.shortest_path(p, r, tie)?;
        let u = pq.direction_at(PathEnd::Start)?;
        let v = pr.direction_at(PathEnd::Start)?;
        u.angle_to(&v)
    }

    /// A random point. Noncompact domains are sampled inside a box of
    /// half-width `extent` (around the removed disks for plane-minus-disks).
    pub fn sample_point(&self, rng: &mut impl Rng, extent: f64) -> Point {
        match &self.kind {
            DomainKind::Euclidean { dim } => Point::Coords((0..*dim).map(|_| rng.gen_range(-extent..extent)).collect()),
            DomainKind::ConvexRegion { boundary } => Point::Coords(boundary.sample(rng)),
            DomainKind::Sphere { radius } => Point::Coords(sphere::sample(*radius, rng)),
            DomainKind::PlaneMinusDisks { disks } => Point::Coords(disks::sample(disks, extent, rng)),
            DomainKind::MetricTree { .. } => Point::Tree(self.tree.as_ref().expect("tree index").sample(rng)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn euclidean_distance_and_angle() {
        let e2 = DomainSpec::euclidean(2);
        let d = e2.distance(&Point::xy(0.0, 0.0), &Point::xy(3.0, 4.0)).unwrap();
        assert_eq!(d, 5.0);
        let o = Point::xy(0.0, 0.0);
        let a = e2
            .angle_at(&o, &Point::xy(1.0, 0.0), &Point::xy(0.0, 1.0), TieBreak::Forbid)
            .unwrap();
        assert!((a - PI / 2.0).abs() < 1e-15);
        let same = e2
            .angle_at(&o, &Point::xy(1.0, 0.0), &Point::xy(1.0, 0.0), TieBreak::Forbid)
            .unwrap();
        assert_eq!(same, 0.0);
    }

    #[test]
    fn euclidean_shortest_path_is_one_line() {
        let e2 = DomainSpec::euclidean(2);
        let path = e2
            .shortest_path(&Point::xy(0.0, 0.0), &Point::xy(1.0, 1.0), TieBreak::Forbid)
            .unwrap();
        assert_eq!(path.pieces.len(), 1);
        assert!((path.length - 2f64.sqrt()).abs() < 1e-15);
        let dir = e2.direction_at(&path, PathEnd::Start).unwrap();
        assert!(
            dir.angle_to(&Direction::Tangent(
                [1.0, 1.0].iter().map(|x| x / 2f64.sqrt()).collect()
            ))
            .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn degenerate_angle_is_an_error() {
        let e2 = DomainSpec::euclidean(2);
        let o = Point::xy(0.0, 0.0);
        let err = e2.angle_at(&o, &o, &Point::xy(1.0, 0.0), TieBreak::Forbid);
        assert!(matches!(err, Err(Error::Degenerate(_))));
    }

    #[test]
    fn wrong_representation_is_rejected() {
        let e2 = DomainSpec::euclidean(2);
        assert!(matches!(
            e2.distance(&Point::on_edge(0, 0.1), &Point::xy(0.0, 0.0)),
            Err(Error::InvalidPoint(_))
        ));
        assert!(e2.validate_point(&Point::Coords(vec![0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn thresholds_and_flags() {
        assert_eq!(DomainSpec::euclidean(3).threshold(), f64::INFINITY);
        let s = DomainSpec::sphere(2.0).unwrap();
        assert!((s.threshold() - 2.0 * PI).abs() < 1e-15);
        assert!(s.is_compact());
        assert!(DomainSpec::unit_disk().is_compact());
        assert!(!DomainSpec::euclidean(2).is_compact());
        let pmd = DomainSpec::plane_minus_disks(vec![Disk::new([0.0, 0.0], 2.0)]).unwrap();
        assert_eq!(pmd.curvature_bound(), 1.0);
        assert!(!pmd.is_compact());
    }

    #[test]
    fn tie_break_alternation() {
        let t = TieBreak::Alternate(0);
        assert_eq!(t.side(), Side::Upper);
        assert_eq!(t.advanced(1).side(), Side::Lower);
        assert_eq!(t.advanced(2).side(), Side::Upper);
        assert_eq!(TieBreak::Upper.advanced(5), TieBreak::Upper);
    }

    #[test]
    fn domain_description_round_trips_through_json() {
        let spec = DomainSpec::plane_minus_disks(vec![Disk::new([0.0, 0.0], 1.0)]).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back: DomainSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(spec, back);
        let bad = r#"{"kind":"sphere","radius":-1.0}"#;
        assert!(serde_json::from_str::<DomainSpec>(bad).is_err());
    }

    #[test]
    fn samples_are_valid_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let domains = vec![
            DomainSpec::euclidean(3),
            DomainSpec::unit_disk(),
            DomainSpec::convex_polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]]).unwrap(),
            DomainSpec::sphere(1.5).unwrap(),
            DomainSpec::plane_minus_disks(vec![Disk::new([0.0, 0.0], 1.0), Disk::new([3.0, 0.0], 1.0)]).unwrap(),
            DomainSpec::random_tree(12, &mut rng),
        ];
        for d in &domains {
            for _ in 0..200 {
                let p = d.sample_point(&mut rng, 5.0);
                d.validate_point(&p).unwrap();
            }
        }
    }
}
