//! Independent reference computations for distances and model quantities.

mod common;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use catpursuit::curves::{comparison_angle, spherical_length_bound};
use catpursuit::domain::{Disk, TreePoint};
use catpursuit::{DomainSpec, Point};
use common::rng;
use rand::Rng;

type P2 = [f64; 2];

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn len(a: P2) -> f64 {
    a[0].hypot(a[1])
}

/// Regular `n`-gon circumscribed about a disk, counter-clockwise.
fn circumscribed(d: &Disk, n: usize) -> Vec<P2> {
    let r = d.radius / (PI / n as f64).cos();
    (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            [d.center[0] + r * a.cos(), d.center[1] + r * a.sin()]
        })
        .collect()
}

/// Does the open segment pass through the interior of the convex polygon?
fn crosses(poly: &[P2], a: P2, b: P2) -> bool {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let dir = sub(b, a);
    for k in 0..poly.len() {
        let (v, w) = (poly[k], poly[(k + 1) % poly.len()]);
        let e = sub(w, v);
        // Inside is cross(e, x - v) > 0.
        let num = cross(e, sub(a, v));
        let den = cross(e, dir);
        let scale = len(e) * (len(dir) + len(sub(a, v)));
        if den.abs() <= 1e-14 * scale {
            if num <= 1e-12 * scale {
                return false;
            }
            continue;
        }
        let t = -num / den;
        if den > 0.0 {
            lo = lo.max(t);
        } else {
            hi = hi.min(t);
        }
    }
    hi - lo > 1e-9
}

/// Whether every listed point is on the non-strict same side of line `ab`.
fn one_side(a: P2, b: P2, pts: &[P2]) -> bool {
    let dir = sub(b, a);
    let s: Vec<f64> = pts.iter().map(|p| cross(dir, sub(*p, a))).collect();
    let tol = 1e-12 * len(dir);
    s.iter().all(|v| *v >= -tol) || s.iter().all(|v| *v <= tol)
}

#[derive(PartialEq)]
struct Node(f64, usize);

impl Eq for Node {}

impl Ord for Node {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0)
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Shortest path around convex polygons: nodes are the endpoints and the
/// polygon vertices, edges are polygon sides plus unobstructed supporting
/// segments.
fn polygon_oracle(polys: &[Vec<P2>], p: P2, q: P2) -> f64 {
    let mut nodes = vec![p, q];
    let mut owner = vec![None, None];
    let mut first = Vec::new();
    for (i, poly) in polys.iter().enumerate() {
        first.push(nodes.len());
        nodes.extend(poly);
        owner.extend(std::iter::repeat_n(Some(i), poly.len()));
    }
    let neighbours = |k: usize| -> Vec<P2> {
        match owner[k] {
            None => vec![],
            Some(i) => {
                let n = polys[i].len();
                let j = k - first[i];
                vec![polys[i][(j + n - 1) % n], polys[i][(j + 1) % n]]
            }
        }
    };
    let clear = |a: P2, b: P2| polys.iter().all(|poly| !crosses(poly, a, b));
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nodes.len()];
    let link = |u: usize, v: usize, adj: &mut Vec<Vec<(usize, f64)>>| {
        let w = len(sub(nodes[u], nodes[v]));
        adj[u].push((v, w));
        adj[v].push((u, w));
    };
    for (i, poly) in polys.iter().enumerate() {
        for j in 0..poly.len() {
            link(first[i] + j, first[i] + (j + 1) % poly.len(), &mut adj);
        }
    }
    for u in 0..nodes.len() {
        for v in u + 1..nodes.len() {
            if owner[u].is_some() && owner[u] == owner[v] {
                continue;
            }
            let (a, b) = (nodes[u], nodes[v]);
            if one_side(a, b, &neighbours(u)) && one_side(a, b, &neighbours(v)) && clear(a, b) {
                link(u, v, &mut adj);
            }
        }
    }
    let mut dist = vec![f64::INFINITY; nodes.len()];
    let mut heap = BinaryHeap::from([Node(0.0, 0)]);
    dist[0] = 0.0;
    while let Some(Node(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            if d + w < dist[v] {
                dist[v] = d + w;
                heap.push(Node(d + w, v));
            }
        }
    }
    dist[1]
}

#[test]
fn plane_minus_disks_matches_polygon_oracle() {
    let disks = vec![Disk::new([0.0, 0.0], 1.0), Disk::new([4.0, 1.0], 1.5)];
    let spec = DomainSpec::plane_minus_disks(disks.clone()).unwrap();
    let n = 512;
    let polys: Vec<Vec<P2>> = disks.iter().map(|d| circumscribed(d, n)).collect();
    let outside = |x: P2| {
        disks
            .iter()
            .all(|d| len(sub(x, d.center)) > d.radius / (PI / n as f64).cos() + 1e-6)
    };
    let mut r = rng(11);
    let mut checked = 0;
    while checked < 50 {
        let p = spec.sample_point(&mut r, 2.0).into_coords();
        let q = spec.sample_point(&mut r, 2.0).into_coords();
        let (p, q) = ([p[0], p[1]], [q[0], q[1]]);
        if !outside(p) || !outside(q) {
            continue;
        }
        let exact = spec.distance(&Point::xy(p[0], p[1]), &Point::xy(q[0], q[1])).unwrap();
        let oracle = polygon_oracle(&polys, p, q);
        assert!(
            oracle >= exact - 1e-9,
            "{p:?} -> {q:?}: oracle {oracle} below exact {exact}"
        );
        assert!(
            (oracle - exact).abs() <= 1e-3,
            "{p:?} -> {q:?}: oracle {oracle}, exact {exact}"
        );
        checked += 1;
    }
}

#[test]
fn wrap_around_a_unit_disk() {
    let spec = DomainSpec::plane_minus_disks(vec![Disk::new([0.0, 0.0], 1.0)]).unwrap();
    let d = spec.distance(&Point::xy(-2.0, 0.0), &Point::xy(2.0, 0.0)).unwrap();
    // Two tangents of length sqrt(3) and an arc of pi/3.
    assert!((d - (2.0 * 3f64.sqrt() + PI / 3.0)).abs() < 1e-12);
    let poly = polygon_oracle(
        &[circumscribed(&Disk::new([0.0, 0.0], 1.0), 4096)],
        [-2.0, 0.0],
        [2.0, 0.0],
    );
    assert!((poly - d).abs() < 1e-5);
}

#[test]
fn sphere_matches_chord_formula() {
    let radius = 1.5;
    let spec = DomainSpec::sphere(radius).unwrap();
    let mut r = rng(3);
    for _ in 0..1000 {
        let p = spec.sample_point(&mut r, 1.0);
        let q = spec.sample_point(&mut r, 1.0);
        let chord = p
            .coords()
            .iter()
            .zip(q.coords())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let oracle = 2.0 * radius * (chord / (2.0 * radius)).min(1.0).asin();
        assert!((spec.distance(&p, &q).unwrap() - oracle).abs() < 1e-9);
    }
}

#[test]
fn tree_matches_floyd_warshall() {
    let spec = common::tree20();
    let tree = spec.tree().unwrap();
    let n = tree.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in tree.edges() {
        d[e.a][e.b] = e.length;
        d[e.b][e.a] = e.length;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    let oracle = |x: &TreePoint, y: &TreePoint| {
        let (e, f) = (&tree.edges()[x.edge], &tree.edges()[y.edge]);
        if x.edge == y.edge {
            return (x.offset - y.offset).abs();
        }
        let ends_x = [(e.a, x.offset), (e.b, e.length - x.offset)];
        let ends_y = [(f.a, y.offset), (f.b, f.length - y.offset)];
        let mut best = f64::INFINITY;
        for (u, du) in ends_x {
            for (v, dv) in ends_y {
                best = best.min(du + d[u][v] + dv);
            }
        }
        best
    };
    let mut r = rng(4);
    for _ in 0..1000 {
        let x = TreePoint {
            edge: r.gen_range(0..tree.edges().len()),
            offset: 0.0,
        };
        let x = TreePoint {
            offset: r.gen_range(0.0..=tree.edges()[x.edge].length),
            ..x
        };
        let y = spec.sample_point(&mut r, 1.0).as_tree().unwrap();
        let got = spec.distance(&Point::Tree(x), &Point::Tree(y)).unwrap();
        assert!((got - oracle(&x, &y)).abs() < 1e-12, "{x:?} {y:?}");
    }
}

#[test]
fn comparison_angles_of_known_triangles() {
    // 3-4-5 right triangle, angle opposite the hypotenuse.
    assert!((comparison_angle(0.0, 5.0, 3.0, 4.0).unwrap() - PI / 2.0).abs() < 1e-12);
    // Octant triangle on the unit sphere: all sides and angles pi/2.
    let h = PI / 2.0;
    assert!((comparison_angle(1.0, h, h, h).unwrap() - h).abs() < 1e-12);
    // Equilateral flat triangle.
    assert!((comparison_angle(0.0, 1.0, 1.0, 1.0).unwrap() - PI / 3.0).abs() < 1e-12);
    // Sphere of radius 2: octant sides scale with the radius.
    assert!((comparison_angle(0.25, PI, PI, PI).unwrap() - h).abs() < 1e-12);
}

#[test]
fn comparison_angle_matches_spherical_law_of_cosines() {
    let mut r = rng(9);
    for _ in 0..1000 {
        let k = r.gen_range(0.1..4.0);
        let s = 1.0 / f64::sqrt(k);
        let (a, b) = (r.gen_range(0.05..1.4) * s, r.gen_range(0.05..1.4) * s);
        let gamma = r.gen_range(0.01..PI - 0.01);
        let (ka, kb) = (a / s, b / s);
        let c = s
            * (ka.cos() * kb.cos() + ka.sin() * kb.sin() * gamma.cos())
                .clamp(-1.0, 1.0)
                .acos();
        let got = comparison_angle(k, c, a, b).unwrap();
        assert!((got - gamma).abs() < 1e-6, "k {k} a {a} b {b} gamma {gamma} got {got}");
    }
}

#[test]
fn spherical_length_bound_closes_the_triangle() {
    let mut r = rng(10);
    for _ in 0..200 {
        let tau = r.gen_range(0.0..1.5);
        let d = r.gen_range(0.01..PI - tau - 0.01);
        let total = spherical_length_bound(tau, d).unwrap();
        // Two legs of half that length from the north pole, opening angle pi - tau.
        let l = total / 2.0;
        let open = PI - tau;
        let x = [l.sin(), 0.0, l.cos()];
        let y = [l.sin() * open.cos(), l.sin() * open.sin(), l.cos()];
        let chord = x.iter().zip(&y).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
        let sep = 2.0 * (chord / 2.0).asin();
        assert!((sep - d).abs() < 1e-9, "tau {tau} d {d} length {total} sep {sep}");
    }
}
