//! Shortest paths in the plane with disjoint open disks removed.
//!
//! Geodesics are built from a tangent-visibility graph: the two endpoints,
//! point-to-circle tangent points, circle-to-circle bitangent points, visible
//! straight segments between them and boundary arcs between consecutive
//! nodes on each circle. Lengths are exact segment and arc lengths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::path::{GeodesicPath, Piece};
use super::vec::{self, segment_point_distance};
use super::{Point, Side, GEOM_TOL, POINT_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Disk {
    pub fn new(center: [f64; 2], radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn point_at_angle(&self, theta: f64) -> [f64; 2] {
        [
            self.center[0] + self.radius * theta.cos(),
            self.center[1] + self.radius * theta.sin(),
        ]
    }

    fn dist_to_center(&self, p: [f64; 2]) -> f64 {
        (p[0] - self.center[0]).hypot(p[1] - self.center[1])
    }

    fn angle_of(&self, p: [f64; 2]) -> f64 {
        (p[1] - self.center[1]).atan2(p[0] - self.center[0])
    }
}

pub(super) fn validate(disks: &[Disk]) -> Result<()> {
    for (i, d) in disks.iter().enumerate() {
        if !(d.radius >= 1.0 && d.radius.is_finite()) || d.center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidDomain(format!(
                "disk {i} has radius {} (must be >= 1)",
                d.radius
            )));
        }
        for (j, e) in disks.iter().enumerate().skip(i + 1) {
            let gap = vec::dist(&d.center, &e.center);
            if gap <= d.radius + e.radius {
                return Err(Error::InvalidDomain(format!(
                    "disks {i} and {j} overlap or touch (center distance {gap})"
                )));
            }
        }
    }
    Ok(())
}

pub(super) fn validate_point(disks: &[Disk], c: &[f64]) -> Result<()> {
    let p = vec::xy(c);
    for (i, d) in disks.iter().enumerate() {
        let r = d.dist_to_center(p);
        if r < d.radius - POINT_TOL * d.radius.max(1.0) {
            return Err(Error::InvalidPoint(format!(
                "point {c:?} lies inside removed disk {i} (distance {r} < radius {})",
                d.radius
            )));
        }
    }
    Ok(())
}

pub(super) fn sample(disks: &[Disk], extent: f64, rng: &mut impl Rng) -> Vec<f64> {
    let (mut lo, mut hi) = ([-extent, -extent], [extent, extent]);
    for d in disks {
        for k in 0..2 {
            lo[k] = lo[k].min(d.center[k] - d.radius - extent);
            hi[k] = hi[k].max(d.center[k] + d.radius + extent);
        }
    }
    loop {
        let p = [rng.gen_range(lo[0]..hi[0]), rng.gen_range(lo[1]..hi[1])];
        if disks.iter().all(|d| d.dist_to_center(p) >= d.radius) {
            return p.to_vec();
        }
    }
}

fn visible(disks: &[Disk], a: [f64; 2], b: [f64; 2]) -> bool {
    disks
        .iter()
        .all(|d| segment_point_distance(a, b, d.center) >= d.radius - GEOM_TOL)
}

#[derive(Debug, Clone, Copy)]
enum EdgeKind {
    Segment,
    /// Counter-clockwise sweep from endpoint `a` to endpoint `b`.
    Arc {
        disk: usize,
        sweep: f64,
    },
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    a: usize,
    b: usize,
    len: f64,
    kind: EdgeKind,
}

#[derive(Default)]
struct Graph {
    nodes: Vec<[f64; 2]>,
    /// Per disk: (angle, node) for nodes on its boundary.
    rims: Vec<Vec<(f64, usize)>>,
    /// Angle of each node on its rim, when it has one.
    node_angle: Vec<Option<(usize, f64)>>,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

const MERGE_ANGLE: f64 = 1e-12;

impl Graph {
    fn add_node(&mut self, p: [f64; 2]) -> usize {
        self.nodes.push(p);
        self.node_angle.push(None);
        self.adj.push(Vec::new());
        self.nodes.len() - 1
    }

    /// Node on the rim of `disk` at `theta`, reusing an existing node at
    /// (numerically) the same angle.
    fn rim_node(&mut self, disks: &[Disk], disk: usize, theta: f64) -> usize {
        let theta = theta.rem_euclid(TAU);
        if let Some(&(_, id)) = self.rims[disk].iter().find(|(t, _)| {
            let diff = (t - theta).rem_euclid(TAU);
            diff.min(TAU - diff) < MERGE_ANGLE
        }) {
            return id;
        }
        let id = self.add_node(disks[disk].point_at_angle(theta));
        self.attach_to_rim(disk, id, theta);
        id
    }

    fn attach_to_rim(&mut self, disk: usize, id: usize, theta: f64) {
        let theta = theta.rem_euclid(TAU);
        self.rims[disk].push((theta, id));
        self.node_angle[id] = Some((disk, theta));
    }

    fn add_edge(&mut self, a: usize, b: usize, len: f64, kind: EdgeKind) {
        if a == b || !(len > 0.0) {
            return;
        }
        let id = self.edges.len();
        self.edges.push(Edge { a, b, len, kind });
        self.adj[a].push(id);
        self.adj[b].push(id);
    }

    fn add_segment(&mut self, disks: &[Disk], a: usize, b: usize) {
        let (pa, pb) = (self.nodes[a], self.nodes[b]);
        if visible(disks, pa, pb) {
            let len = (pb[0] - pa[0]).hypot(pb[1] - pa[1]);
            self.add_edge(a, b, len, EdgeKind::Segment);
        }
    }
}

/// Tangent angles (on the disk rim) seen from an exterior point.
fn tangent_angles(disk: &Disk, p: [f64; 2]) -> Option<[f64; 2]> {
    let d = disk.dist_to_center(p);
    if d <= disk.radius * (1.0 + GEOM_TOL) {
        return None;
    }
    let base = disk.angle_of(p);
    let psi = (disk.radius / d).acos();
    Some([base + psi, base - psi])
}

/// Bitangent lines between two disjoint circles as pairs of rim angles.
fn bitangents(di: &Disk, dj: &Disk) -> Vec<(f64, f64)> {
    let v = [dj.center[0] - di.center[0], dj.center[1] - di.center[1]];
    let d = v[0].hypot(v[1]);
    let (vx, vy) = (v[0] / d, v[1] / d);
    let mut out = Vec::with_capacity(4);
    // Normal n with n.v = s_i r_i - s_j r_j; tangent points c + s r n.
    for (si, sj) in [(1.0, 1.0), (1.0, -1.0)] {
        let h = (si * di.radius - sj * dj.radius) / d;
        if h.abs() >= 1.0 {
            continue;
        }
        let w = (1.0 - h * h).sqrt();
        for sign in [1.0, -1.0] {
            let n = [h * vx - sign * w * vy, h * vy + sign * w * vx];
            let ti = (si * n[1]).atan2(si * n[0]);
            let tj = (sj * n[1]).atan2(sj * n[0]);
            out.push((ti, tj));
        }
    }
    out
}

fn build_graph(disks: &[Disk], p: [f64; 2], q: [f64; 2]) -> Graph {
    let mut g = Graph {
        rims: vec![Vec::new(); disks.len()],
        ..Graph::default()
    };
    let ends = [g.add_node(p), g.add_node(q)];
    for &e in &ends {
        let pt = g.nodes[e];
        for (k, d) in disks.iter().enumerate() {
            if d.dist_to_center(pt) <= d.radius * (1.0 + GEOM_TOL) {
                g.attach_to_rim(k, e, d.angle_of(pt));
            }
        }
    }
    g.add_segment(disks, ends[0], ends[1]);
    for &e in &ends {
        let pt = g.nodes[e];
        for (k, d) in disks.iter().enumerate() {
            if let Some(angles) = tangent_angles(d, pt) {
                for theta in angles {
                    let t = g.rim_node(disks, k, theta);
                    g.add_segment(disks, e, t);
                }
            }
        }
    }
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            for (ti, tj) in bitangents(&disks[i], &disks[j]) {
                let a = g.rim_node(disks, i, ti);
                let b = g.rim_node(disks, j, tj);
                g.add_segment(disks, a, b);
            }
        }
    }
    for (k, disk) in disks.iter().enumerate() {
        let mut rim = g.rims[k].clone();
        rim.sort_by(|x, y| x.0.total_cmp(&y.0));
        let n = rim.len();
        if n < 2 {
            continue;
        }
        for idx in 0..n {
            let (ta, a) = rim[idx];
            let (tb, b) = rim[(idx + 1) % n];
            let sweep = (tb - ta).rem_euclid(TAU);
            g.add_edge(a, b, disk.radius * sweep, EdgeKind::Arc { disk: k, sweep });
        }
    }
    g
}

#[derive(PartialEq)]
struct Entry(f64, usize);
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

fn dijkstra(g: &Graph, src: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.nodes.len()];
    dist[src] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Entry(0.0, src));
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &e in &g.adj[u] {
            let edge = g.edges[e];
            let v = if edge.a == u { edge.b } else { edge.a };
            let nd = d + edge.len;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Entry(nd, v));
            }
        }
    }
    dist
}

const MAX_CANDIDATES: usize = 32;

/// Every edge sequence from node 0 to node 1 that is optimal within `tol`.
fn optimal_routes(g: &Graph, dist: &[f64], tol: f64) -> Vec<Vec<(usize, usize)>> {
    fn walk(
        g: &Graph,
        dist: &[f64],
        tol: f64,
        node: usize,
        on_path: &mut Vec<bool>,
        stack: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if out.len() >= MAX_CANDIDATES {
            return;
        }
        if node == 0 {
            out.push(stack.iter().rev().copied().collect());
            return;
        }
        for &e in &g.adj[node] {
            let edge = g.edges[e];
            let prev = if edge.a == node { edge.b } else { edge.a };
            if on_path[prev] || !(dist[prev] + edge.len <= dist[node] + tol) {
                continue;
            }
            on_path[prev] = true;
            stack.push((e, prev));
            walk(g, dist, tol, prev, on_path, stack, out);
            stack.pop();
            on_path[prev] = false;
        }
    }
    let mut out = Vec::new();
    if dist[1].is_finite() {
        let mut on_path = vec![false; g.nodes.len()];
        on_path[1] = true;
        walk(g, dist, tol, 1, &mut on_path, &mut Vec::new(), &mut out);
    }
    out
}

fn route_to_path(g: &Graph, disks: &[Disk], route: &[(usize, usize)], p: [f64; 2], q: [f64; 2]) -> GeodesicPath {
    let coord = |n: usize| match n {
        0 => p,
        1 => q,
        _ => g.nodes[n],
    };
    let mut pieces: Vec<Piece> = Vec::new();
    for &(e, from) in route {
        let edge = g.edges[e];
        let to = if edge.a == from { edge.b } else { edge.a };
        match edge.kind {
            EdgeKind::Segment => {
                let (a, b) = (coord(from), coord(to));
                if let Some(Piece::Line { from: f0, to: t0 }) = pieces.last_mut() {
                    let d0 = vec::normalize(&vec::sub(t0, f0));
                    let d1 = vec::normalize(&vec::sub(&b, &a));
                    if let (Some(d0), Some(d1)) = (d0, d1) {
                        if vec::unit_angle(&d0, &d1) < MERGE_ANGLE {
                            *t0 = b.to_vec();
                            continue;
                        }
                    }
                }
                pieces.push(Piece::Line {
                    from: a.to_vec(),
                    to: b.to_vec(),
                });
            }
            EdgeKind::Arc { disk, sweep } => {
                let (_, theta_from) = g.node_angle[from].expect("rim node");
                let signed = if edge.a == from { sweep } else { -sweep };
                if let Some(Piece::Arc {
                    center,
                    start_angle,
                    end_angle,
                    ..
                }) = pieces.last_mut()
                {
                    if *center == disks[disk].center && (*end_angle - *start_angle).signum() == signed.signum() {
                        *end_angle += signed;
                        continue;
                    }
                }
                pieces.push(Piece::Arc {
                    center: disks[disk].center,
                    radius: disks[disk].radius,
                    start_angle: theta_from,
                    end_angle: theta_from + signed,
                });
            }
        }
    }
    GeodesicPath::new(Point::Coords(p.to_vec()), pieces)
}

fn same_geometry(a: &GeodesicPath, b: &GeodesicPath) -> bool {
    if (a.length - b.length).abs() > 1e-7 {
        return false;
    }
    (0..=32).all(|k| {
        let f = k as f64 / 32.0;
        let pa = a.point_along(f * a.length).expect("in range");
        let pb = b.point_along(f * b.length).expect("in range");
        vec::dist(pa.coords(), pb.coords()) < 1e-7
    })
}

pub(super) fn candidates(disks: &[Disk], p: [f64; 2], q: [f64; 2], tol: f64) -> Vec<GeodesicPath> {
    if p == q {
        return vec![GeodesicPath::trivial(Point::Coords(p.to_vec()))];
    }
    let g = build_graph(disks, p, q);
    let dist = dijkstra(&g, 0);
    let mut out: Vec<GeodesicPath> = Vec::new();
    for route in optimal_routes(&g, &dist, tol) {
        let path = route_to_path(&g, disks, &route, p, q);
        if !out.iter().any(|c| same_geometry(c, &path)) {
            out.push(path);
        }
    }
    out.sort_by(|a, b| a.length.total_cmp(&b.length));
    out
}

pub(super) fn distance(disks: &[Disk], p: [f64; 2], q: [f64; 2]) -> f64 {
    if p == q {
        return 0.0;
    }
    let g = build_graph(disks, p, q);
    dijkstra(&g, 0)[1]
}

fn describe(path: &GeodesicPath) -> String {
    let side = if path.signed_chord_area2() < 0.0 {
        "left"
    } else {
        "right"
    };
    format!(
        "length {:.12} passing {side} ({} pieces)",
        path.length,
        path.pieces.len()
    )
}

pub(super) fn shortest_path(disks: &[Disk], p: [f64; 2], q: [f64; 2], side: Side) -> Result<GeodesicPath> {
    let mut cands = candidates(disks, p, q, GEOM_TOL);
    match (cands.len(), side) {
        (0, _) => Err(Error::Degenerate("no path between points".into())),
        (1, _) => Ok(cands.pop().unwrap()),
        (_, Side::Forbid) => Err(Error::Ambiguous {
            candidates: cands.iter().map(describe).collect(),
        }),
        (_, Side::Upper) => Ok(cands
            .into_iter()
            .min_by(|a, b| a.signed_chord_area2().total_cmp(&b.signed_chord_area2()))
            .unwrap()),
        (_, Side::Lower) => Ok(cands
            .into_iter()
            .max_by(|a, b| a.signed_chord_area2().total_cmp(&b.signed_chord_area2()))
            .unwrap()),
    }
}
