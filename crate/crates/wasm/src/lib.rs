//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function takes and returns JSON strings. The logic lives in
//! plain functions so it can be tested natively.

use catpursuit::domain::Disk;
use catpursuit::scenario::{simulate, summarize, ScenarioConfig};
use catpursuit::verify::thue_morse_word;
use catpursuit::{DomainSpec, GeodesicPath, Point, TieBreak};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest run the page will attempt.
pub const MAX_DEMO_STEPS: usize = 50_000;

fn xy(points: &[Point]) -> Vec<[f64; 2]> {
    points.iter().map(|p| [p.coords()[0], p.coords()[1]]).collect()
}

fn polyline(path: &GeodesicPath) -> Vec<[f64; 2]> {
    xy(&path.sample(16.0, 4))
}

fn disks_json(spec: &DomainSpec) -> Value {
    json!(spec
        .disks()
        .iter()
        .map(|d| json!({"center": d.center, "radius": d.radius}))
        .collect::<Vec<_>>())
}

/// Run a planar scenario and return both trajectories with a summary.
pub fn simulate_scenario(scenario: &str) -> Result<String, String> {
    let cfg = ScenarioConfig::from_json(scenario).map_err(|e| e.to_string())?;
    if !cfg.domain.is_planar() {
        return Err("the demo draws planar domains only".into());
    }
    if cfg.steps() > MAX_DEMO_STEPS {
        return Err(format!("at most {MAX_DEMO_STEPS} steps in the browser"));
    }
    let (trace, _) = simulate(&cfg).map_err(|e| e.to_string())?;
    let summary = summarize(&cfg.name, &trace, &cfg.checks);
    Ok(json!({
        "disks": disks_json(&trace.domain),
        "domain": trace.domain,
        "pursuer": xy(&trace.pursuer),
        "evader": xy(&trace.evader),
        "separation": trace.separation,
        "tau_p": trace.tau_p,
        "summary": summary,
    })
    .to_string())
}

/// Shortest path between two points of the plane with the given disks
/// removed. `tie` is `"upper"`, `"lower"` or `"forbid"`.
pub fn disk_geodesic(disks: &str, from: [f64; 2], to: [f64; 2], tie: &str) -> Result<String, String> {
    let disks: Vec<Disk> = serde_json::from_str(disks).map_err(|e| format!("disks: {e}"))?;
    let tie = match tie {
        "upper" => TieBreak::Upper,
        "lower" => TieBreak::Lower,
        "forbid" => TieBreak::Forbid,
        other => return Err(format!("unknown tie-break `{other}`")),
    };
    let spec = DomainSpec::plane_minus_disks(disks).map_err(|e| e.to_string())?;
    let (p, q) = (Point::xy(from[0], from[1]), Point::xy(to[0], to[1]));
    let path = spec.shortest_path(&p, &q, tie).map_err(|e| e.to_string())?;
    let candidates = spec.shortest_path_candidates(&p, &q, 1e-9).map_err(|e| e.to_string())?;
    Ok(json!({
        "length": path.length,
        "points": polyline(&path),
        "pieces": path.pieces.len(),
        "candidates": candidates.len(),
    })
    .to_string())
}

/// Local geodesic winding around two unit disks following the first
/// `letters` letters of the Thue–Morse word.
pub fn thue_morse_winding(letters: usize, gap: f64) -> Result<String, String> {
    if !(1..=512).contains(&letters) {
        return Err("letters must be between 1 and 512".into());
    }
    let spec = DomainSpec::plane_minus_disks(vec![Disk::new([0.0, 0.0], 1.0), Disk::new([gap, 0.0], 1.0)])
        .map_err(|e| e.to_string())?;
    let word = thue_morse_word(letters);
    let path = catpursuit::curves::build_winding_geodesic(&spec, &word).map_err(|e| e.to_string())?;
    Ok(json!({
        "disks": disks_json(&spec),
        "word": word,
        "length": path.length,
        "points": polyline(&path),
    })
    .to_string())
}

#[wasm_bindgen(js_name = simulate)]
pub fn simulate_js(scenario: &str) -> Result<String, JsError> {
    simulate_scenario(scenario).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = diskGeodesic)]
pub fn disk_geodesic_js(disks: &str, x0: f64, y0: f64, x1: f64, y1: f64, tie: &str) -> Result<String, JsError> {
    disk_geodesic(disks, [x0, y0], [x1, y1], tie).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = thueMorseWinding)]
pub fn thue_morse_winding_js(letters: usize, gap: f64) -> Result<String, JsError> {
    thue_morse_winding(letters, gap).map_err(|e| JsError::new(&e))
}
