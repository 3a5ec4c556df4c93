use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::path::{GeodesicPath, Piece};
use super::{Point, TreePoint, POINT_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

/// A finite metric tree with precomputed vertex distances and routing.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTree {
    vertices: usize,
    edges: Vec<TreeEdge>,
    /// `dist[u][v]` between vertices.
    dist: Vec<Vec<f64>>,
    /// `toward[root][v]`: edge leaving `v` on the way to `root`.
    toward: Vec<Vec<Option<usize>>>,
    total_length: f64,
}

impl MetricTree {
    pub fn new(vertices: usize, edges: Vec<TreeEdge>) -> Result<Self> {
        if vertices < 2 {
            return Err(Error::InvalidDomain("a tree needs at least one edge".into()));
        }
        if edges.len() + 1 != vertices {
            return Err(Error::InvalidDomain(format!(
                "{} edges on {vertices} vertices cannot form a tree",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); vertices];
        for (k, e) in edges.iter().enumerate() {
            if e.a >= vertices || e.b >= vertices || e.a == e.b {
                return Err(Error::InvalidDomain(format!(
                    "edge {k} has bad endpoints ({}, {})",
                    e.a, e.b
                )));
            }
            if !(e.length > 0.0 && e.length.is_finite()) {
                return Err(Error::InvalidDomain(format!("edge {k} has length {}", e.length)));
            }
            adj[e.a].push((e.b, k));
            adj[e.b].push((e.a, k));
        }
        let mut dist = vec![vec![f64::INFINITY; vertices]; vertices];
        let mut toward = vec![vec![None; vertices]; vertices];
        for root in 0..vertices {
            let d = &mut dist[root];
            d[root] = 0.0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(w, k) in &adj[u] {
                    if d[w].is_infinite() {
                        d[w] = d[u] + edges[k].length;
                        toward[root][w] = Some(k);
                        queue.push_back(w);
                    }
                }
            }
            if d.iter().any(|x| x.is_infinite()) {
                return Err(Error::InvalidDomain("tree is not connected".into()));
            }
        }
        let total_length = edges.iter().map(|e| e.length).sum();
        Ok(MetricTree {
            vertices,
            edges,
            dist,
            toward,
            total_length,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn vertex_distance(&self, u: usize, v: usize) -> f64 {
        self.dist[u][v]
    }

    /// Canonical location of vertex `v`: on its lowest-numbered incident edge.
    pub fn vertex_point(&self, v: usize) -> TreePoint {
        let (k, e) = self
            .edges
            .iter()
            .enumerate()
            .find(|(_, e)| e.a == v || e.b == v)
            .expect("every vertex of a tree with edges has an incident edge");
        TreePoint {
            edge: k,
            offset: if e.a == v { 0.0 } else { e.length },
        }
    }

    pub(super) fn validate(&self, p: TreePoint) -> Result<()> {
        let Some(e) = self.edges.get(p.edge) else {
            return Err(Error::InvalidPoint(format!(
                "edge {} does not exist ({} edges)",
                p.edge,
                self.edges.len()
            )));
        };
        let slack = POINT_TOL * e.length.max(1.0);
        if !(p.offset >= -slack && p.offset <= e.length + slack) {
            return Err(Error::InvalidPoint(format!(
                "offset {} outside edge {} of length {}",
                p.offset, p.edge, e.length
            )));
        }
        Ok(())
    }

    /// The vertex at `p`, if it sits on an edge endpoint.
    fn at_vertex(&self, p: TreePoint) -> Option<usize> {
        let e = self.edges[p.edge];
        let slack = POINT_TOL * e.length.max(1.0);
        if p.offset <= slack {
            Some(e.a)
        } else if p.offset >= e.length - slack {
            Some(e.b)
        } else {
            None
        }
    }

    pub(super) fn canonical(&self, p: TreePoint) -> TreePoint {
        match self.at_vertex(p) {
            Some(v) => self.vertex_point(v),
            None => p,
        }
    }

    /// Ways out of `p` to a vertex: (vertex, distance, segment on p's edge).
    fn exits(&self, p: TreePoint) -> Vec<(usize, f64, Piece)> {
        let e = self.edges[p.edge];
        if let Some(v) = self.at_vertex(p) {
            return vec![(
                v,
                0.0,
                Piece::TreeSegment {
                    edge: p.edge,
                    from: p.offset,
                    to: p.offset,
                },
            )];
        }
        vec![
            (
                e.a,
                p.offset,
                Piece::TreeSegment {
                    edge: p.edge,
                    from: p.offset,
                    to: 0.0,
                },
            ),
            (
                e.b,
                e.length - p.offset,
                Piece::TreeSegment {
                    edge: p.edge,
                    from: p.offset,
                    to: e.length,
                },
            ),
        ]
    }

    pub(super) fn distance(&self, p: TreePoint, q: TreePoint) -> f64 {
        let (p, q) = (self.canonical(p), self.canonical(q));
        if p.edge == q.edge {
            return (p.offset - q.offset).abs();
        }
        let mut best = f64::INFINITY;
        for (u, du, _) in self.exits(p) {
            for (v, dv, _) in self.exits(q) {
                best = best.min(du + self.dist[u][v] + dv);
            }
        }
        best
    }

    pub(super) fn shortest_path(&self, p: TreePoint, q: TreePoint) -> GeodesicPath {
        let (p, q) = (self.canonical(p), self.canonical(q));
        let start = Point::Tree(p);
        if p.edge == q.edge {
            return GeodesicPath::new(
                start,
                vec![Piece::TreeSegment {
                    edge: p.edge,
                    from: p.offset,
                    to: q.offset,
                }],
            );
        }
        let mut best: Option<(f64, usize, usize, Piece, Piece)> = None;
        for (u, du, head) in self.exits(p) {
            for (v, dv, tail) in self.exits(q) {
                let total = du + self.dist[u][v] + dv;
                if best.as_ref().is_none_or(|b| total < b.0) {
                    best = Some((total, u, v, head.clone(), tail.reversed()));
                }
            }
        }
        let (_, u, v, head, tail) = best.expect("at least one route");
        let mut pieces = vec![head];
        let mut at = u;
        while at != v {
            let k = self.toward[v][at].expect("connected tree");
            let e = self.edges[k];
            let (from, to, next) = if e.a == at {
                (0.0, e.length, e.b)
            } else {
                (e.length, 0.0, e.a)
            };
            pieces.push(Piece::TreeSegment { edge: k, from, to });
            at = next;
        }
        pieces.push(tail);
        GeodesicPath::new(start, pieces)
    }

    pub(super) fn sample(&self, rng: &mut impl Rng) -> TreePoint {
        let mut x = rng.gen_range(0.0..self.total_length);
        for (k, e) in self.edges.iter().enumerate() {
            if x < e.length {
                return TreePoint { edge: k, offset: x };
            }
            x -= e.length;
        }
        let k = self.edges.len() - 1;
        TreePoint {
            edge: k,
            offset: self.edges[k].length,
        }
    }
}
