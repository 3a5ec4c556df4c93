use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::domain::{DomainKind, GeodesicPath, Point, RegionBoundary};
use crate::error::{Error, Result};
use crate::pursuit::PursuitTrace;

pub const CSV_HEADER: &str = "step,t,L,alpha,alpha_tilde,beta,Delta,tauP,tauE,cP,cE,rP,rE";

/// One line of the per-step CSV. Step quantities are empty on the final
/// row and wherever the trace has no value.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub step: usize,
    pub t: f64,
    pub l: f64,
    pub alpha: Option<f64>,
    pub alpha_tilde: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub tau_p: f64,
    pub tau_e: f64,
    pub c_p: f64,
    pub c_e: f64,
    pub r_p: f64,
    pub r_e: f64,
}

fn io(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn num(out: &mut String, v: f64) {
    let _ = write!(out, ",{v:.16e}");
}

fn opt(out: &mut String, v: Option<f64>) {
    match v {
        Some(v) => num(out, v),
        None => out.push(','),
    }
}

pub fn write_csv(trace: &PursuitTrace, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(256 * trace.separation.len());
    out.push_str(CSV_HEADER);
    out.push('\n');
    for k in 0..trace.separation.len() {
        let s = trace.steps.get(k);
        let _ = write!(out, "{k}");
        num(&mut out, trace.time(k));
        num(&mut out, trace.separation[k]);
        opt(&mut out, s.and_then(|s| s.alpha));
        opt(&mut out, s.and_then(|s| s.alpha_tilde));
        opt(&mut out, s.and_then(|s| s.beta));
        opt(&mut out, s.map(|s| s.increment));
        for v in [
            trace.tau_p[k],
            trace.tau_e[k],
            trace.c_p[k],
            trace.c_e[k],
            trace.r_p[k],
            trace.r_e[k],
        ] {
            num(&mut out, v);
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| io(path, e))
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| io(path, e))?;
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::config(
            path.display().to_string(),
            format!("header must be `{CSV_HEADER}`"),
        ));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let bad = |what: &str| Error::config(format!("{}:{}", path.display(), n + 2), what.to_string());
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 13 {
            return Err(bad("expected 13 columns"));
        }
        let req = |i: usize| f[i].parse::<f64>().map_err(|_| bad(&format!("bad number `{}`", f[i])));
        let maybe = |i: usize| -> Result<Option<f64>> {
            if f[i].is_empty() {
                Ok(None)
            } else {
                req(i).map(Some)
            }
        };
        rows.push(CsvRow {
            step: f[0].parse().map_err(|_| bad("bad step index"))?,
            t: req(1)?,
            l: req(2)?,
            alpha: maybe(3)?,
            alpha_tilde: maybe(4)?,
            beta: maybe(5)?,
            delta: maybe(6)?,
            tau_p: req(7)?,
            tau_e: req(8)?,
            c_p: req(9)?,
            c_e: req(10)?,
            r_p: req(11)?,
            r_e: req(12)?,
        });
    }
    Ok(rows)
}

pub fn write_trace_json(trace: &PursuitTrace, path: &Path) -> Result<()> {
    let text = serde_json::to_string(trace).map_err(|e| io(path, e))?;
    std::fs::write(path, text).map_err(|e| io(path, e))
}

/// `run.csv` -> `run.trace.json`.
fn sibling_json(csv: &Path) -> PathBuf {
    let stem = csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    csv.with_file_name(format!("{stem}.trace.json"))
}

/// Load a trace from its CSV and the JSON written next to it, checking that
/// the two agree and recomputing the geodesic segments.
pub fn read_trace(csv: &Path) -> Result<PursuitTrace> {
    let rows = read_csv(csv)?;
    let json_path = sibling_json(csv);
    let text = std::fs::read_to_string(&json_path).map_err(|e| io(&json_path, e))?;
    let mut trace: PursuitTrace = serde_json::from_str(&text).map_err(|e| io(&json_path, e))?;
    let same = rows.len() == trace.separation.len()
        && rows.iter().zip(&trace.separation).all(|(r, l)| r.l == *l)
        && rows.iter().zip(&trace.tau_p).all(|(r, t)| r.tau_p == *t);
    if !same {
        return Err(Error::config(
            csv.display().to_string(),
            format!("does not match {}", json_path.display()),
        ));
    }
    let segments = |points: &[Point]| -> Result<Vec<GeodesicPath>> {
        points
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                trace
                    .domain
                    .shortest_path(&w[0], &w[1], trace.tie_break.advanced(i as u64))
                    .or_else(|_| trace.domain.shortest_path(&w[0], &w[1], crate::domain::TieBreak::Upper))
            })
            .collect()
    };
    trace.pursuer_paths = segments(&trace.pursuer)?;
    trace.evader_paths = segments(&trace.evader)?;
    Ok(trace)
}

fn polyline(points: &[[f64; 2]], max_points: usize) -> String {
    let stride = points.len().div_ceil(max_points.max(1)).max(1);
    let mut out = String::new();
    for (i, p) in points.iter().enumerate() {
        if i % stride == 0 || i + 1 == points.len() {
            let _ = write!(out, "{:.6},{:.6} ", p[0], p[1]);
        }
    }
    out
}

fn curve_points(paths: &[GeodesicPath], fallback: &[Point]) -> Vec<[f64; 2]> {
    let xy = |p: &Point| {
        let c = p.coords();
        [c[0], c[1]]
    };
    if paths.len() + 1 != fallback.len() {
        return fallback.iter().map(xy).collect();
    }
    let mut out = vec![xy(&fallback[0])];
    for path in paths {
        out.extend(path.sample(8.0, 1).iter().skip(1).map(xy));
    }
    out
}

/// SVG drawing of a planar trace: removed disks or region boundary, both
/// trajectories and a marker per step.
pub fn emit_plot(trace: &PursuitTrace, path: &Path) -> Result<()> {
    if !trace.domain.is_planar() {
        return Err(Error::Unsupported("plots need a planar domain".into()));
    }
    let pursuer = curve_points(&trace.pursuer_paths, &trace.pursuer);
    let evader = curve_points(&trace.evader_paths, &trace.evader);
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    let mut grow = |p: [f64; 2], r: f64| {
        for i in 0..2 {
            lo[i] = lo[i].min(p[i] - r);
            hi[i] = hi[i].max(p[i] + r);
        }
    };
    pursuer.iter().chain(&evader).for_each(|p| grow(*p, 0.0));

    let mut shapes = String::new();
    match trace.domain.kind() {
        DomainKind::PlaneMinusDisks { disks } => {
            for d in disks {
                grow(d.center, d.radius);
                let _ = writeln!(
                    shapes,
                    r##"<circle cx="{}" cy="{}" r="{}" fill="#d8d8d8" stroke="#888" vector-effect="non-scaling-stroke"/>"##,
                    d.center[0], d.center[1], d.radius
                );
            }
        }
        DomainKind::ConvexRegion { boundary } => match boundary {
            RegionBoundary::Disk { center, radius } => {
                grow(*center, *radius);
                let _ = writeln!(
                    shapes,
                    r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#888" vector-effect="non-scaling-stroke"/>"##,
                    center[0], center[1], radius
                );
            }
            RegionBoundary::Polygon { vertices } => {
                vertices.iter().for_each(|v| grow(*v, 0.0));
                let _ = writeln!(
                    shapes,
                    r##"<polygon points="{}" fill="none" stroke="#888" vector-effect="non-scaling-stroke"/>"##,
                    polyline(vertices, usize::MAX)
                );
            }
        },
        _ => {}
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let pad = 0.05 * span;
    let (x0, y0) = (lo[0] - pad, lo[1] - pad);
    let (w, h) = (hi[0] - lo[0] + 2.0 * pad, hi[1] - lo[1] + 2.0 * pad);
    let marker = 0.004 * span;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="{:.0}" viewBox="{x0} {} {w} {h}">"#,
        800.0 * h / w,
        -(y0 + h)
    );
    svg.push_str("<g transform=\"scale(1,-1)\">\n");
    svg.push_str(&shapes);
    for (points, marks, color) in [
        (&pursuer, &trace.pursuer, "#c0392b"),
        (&evader, &trace.evader, "#2471a3"),
    ] {
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5" vector-effect="non-scaling-stroke"/>"#,
            polyline(points, 20_000)
        );
        let stride = marks.len().div_ceil(500).max(1);
        for p in marks.iter().step_by(stride) {
            let c = p.coords();
            let _ = writeln!(
                svg,
                r#"<circle cx="{}" cy="{}" r="{marker}" fill="{color}"/>"#,
                c[0], c[1]
            );
        }
    }
    svg.push_str("</g>\n</svg>\n");
    std::fs::write(path, svg).map_err(|e| io(path, e))
}
