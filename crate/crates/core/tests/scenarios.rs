use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use catpursuit::scenario::{
    emit_plot, read_csv, read_trace, run_batch, run_scenario, simulate, BatchReport, BatchSpec, Outcome, RunSummary,
    ScenarioConfig, CSV_HEADER,
};
use catpursuit::Error;

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn load(name: &str, out: &Path) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::load(&scenario_dir().join(name)).unwrap();
    cfg.output_dir = Some(out.to_path_buf());
    cfg
}

fn golden(out: &Path) -> BatchReport {
    let mut cfgs = BatchSpec::load(&scenario_dir().join("golden.sweep.json")).unwrap();
    cfgs.iter_mut().for_each(|c| c.output_dir = Some(out.to_path_buf()));
    run_batch(&cfgs).unwrap()
}

#[test]
fn golden_suite() {
    let dir = tempfile::tempdir().unwrap();
    let report = golden(dir.path());
    let rows: HashMap<&str, &RunSummary> = report
        .rows
        .iter()
        .map(|r| {
            (
                r.name.as_str(),
                r.summary
                    .as_ref()
                    .unwrap_or_else(|| panic!("{}: {:?}", r.name, r.error)),
            )
        })
        .collect();
    assert_eq!(rows.len(), 11);
    assert!(report.passed(), "{}", report.table());

    assert!(matches!(rows["compact_disk"].outcome, Outcome::Capture { .. }));
    assert!(matches!(rows["tree_capture"].outcome, Outcome::Capture { .. }));
    for name in [
        "antipodal",
        "orbit",
        "disks_escape",
        "straight_chase",
        "collinear_chase",
        "sphere_chase",
    ] {
        assert!(
            matches!(rows[name].outcome, Outcome::Escape { .. }),
            "{name}: {:?}",
            rows[name].outcome
        );
    }

    let antipodal = rows["antipodal"];
    let slope = antipodal.tau_p / (antipodal.steps - 1) as f64;
    assert!((slope - PI).abs() < 1e-6, "{slope}");

    // Every requested check appears exactly once.
    for row in &report.rows {
        let s = row.summary.as_ref().unwrap();
        let cfg = ScenarioConfig::load(&scenario_dir().join(format!("{}.json", s.name))).unwrap();
        let names: Vec<String> = cfg
            .checks
            .iter()
            .map(|c| serde_json::to_value(c).unwrap().as_str().unwrap().to_owned())
            .collect();
        let got: Vec<&str> = s.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(got, names, "{}", s.name);
    }

    let table = report.table();
    assert_eq!(table.lines().count(), 12);
}

#[test]
fn summary_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["orbit.json", "compact_disk.json", "dyadic_straight.json"] {
        let summary = run_scenario(&load(name, dir.path())).unwrap();
        let text = std::fs::read_to_string(summary.artifacts.summary.as_ref().unwrap()).unwrap();
        let back: RunSummary = serde_json::from_str(&text).unwrap();
        assert_eq!(back, summary, "{name}");
    }
}

#[test]
fn csv_contract_and_trace_reload() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = load("orbit.json", dir.path());
    let (trace, _) = simulate(&cfg).unwrap();
    let summary = run_scenario(&cfg).unwrap();
    let csv = summary.artifacts.csv.unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "step,t,L,alpha,alpha_tilde,beta,Delta,tauP,tauE,cP,cE,rP,rE"
    );
    assert_eq!(CSV_HEADER, text.lines().next().unwrap());
    let rows = read_csv(&csv).unwrap();
    assert_eq!(rows.len(), trace.separation.len());
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row.step, k);
        assert_eq!(row.t, k as f64 * cfg.step_size);
        assert_eq!(row.l, trace.separation[k]);
        assert_eq!(row.tau_p, trace.tau_p[k]);
        assert_eq!(row.c_e, trace.c_e[k]);
        assert_eq!(row.alpha, trace.steps.get(k).and_then(|s| s.alpha));
    }
    assert!(rows.last().unwrap().beta.is_none());
    let back = read_trace(&csv).unwrap();
    assert_eq!(back.pursuer, trace.pursuer);
    assert_eq!(back.separation, trace.separation);
    assert_eq!(back.pursuer_paths.len(), trace.pursuer.len() - 1);
}

#[test]
fn runs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let read = |dir: &Path| std::fs::read(dir.join("compact_disk.csv")).unwrap();
    run_scenario(&load("compact_disk.json", a.path())).unwrap();
    run_scenario(&load("compact_disk.json", b.path())).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn malformed_configs_name_the_field() {
    let text = std::fs::read_to_string(scenario_dir().join("orbit.json")).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value.as_object_mut().unwrap().remove("step_size");
    match ScenarioConfig::from_json(&value.to_string()) {
        Err(Error::Config { message, .. }) => assert!(message.contains("step_size"), "{message}"),
        other => panic!("{other:?}"),
    }

    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["domain"]["disks"][0]["radius"] = serde_json::json!("two");
    match ScenarioConfig::from_json(&value.to_string()) {
        Err(Error::Config { path, .. }) => assert!(path.starts_with("domain"), "{path}"),
        other => panic!("{other:?}"),
    }

    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["step_size"] = serde_json::json!(-1.0);
    assert!(
        matches!(ScenarioConfig::from_json(&value.to_string()), Err(Error::Config { path, .. }) if path == "step_size")
    );

    let random = std::fs::read_to_string(scenario_dir().join("compact_disk.json")).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&random).unwrap();
    value.as_object_mut().unwrap().remove("seed");
    assert!(matches!(ScenarioConfig::from_json(&value.to_string()), Err(Error::Config { path, .. }) if path == "seed"));
}

#[test]
fn batches() {
    assert!(BatchSpec::default().expand(Path::new(".")).is_err());
    assert!(run_batch(&[]).is_err());

    let dir = tempfile::tempdir().unwrap();
    let mut cfgs = BatchSpec::load(&scenario_dir().join("capture_seeds.sweep.json")).unwrap();
    cfgs.iter_mut()
        .for_each(|c| c.output_dir = Some(dir.path().to_path_buf()));
    let report = run_batch(&cfgs).unwrap();
    let names: Vec<&str> = report.rows.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(
        names,
        [
            "compact_disk_seed1",
            "compact_disk_seed2",
            "compact_disk_seed3",
            "compact_disk_seed4",
            "compact_disk_seed5"
        ]
    );
    assert!(report
        .rows
        .iter()
        .all(|r| matches!(r.summary.as_ref().unwrap().outcome, Outcome::Capture { .. })));

    // A run that starts inside capture range fails; the rest continue.
    let mut broken = cfgs[0].clone();
    broken.name = "broken".into();
    broken.pursuer = catpursuit::Point::xy(0.5, 0.0);
    broken.evader =
        serde_json::from_str(r#"{"kind": "prescribed_curve", "curve": {"curve": "stationary", "point": [0.5, 0.0]}}"#)
            .unwrap();
    let report = run_batch(&[broken, cfgs[1].clone()]).unwrap();
    assert!(report.rows[0].error.is_some());
    assert!(report.rows[1].summary.is_some());
    assert!(!report.passed());
}

#[test]
fn dyadic_sweep_table() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_scenario(&load("dyadic_straight.json", dir.path())).unwrap();
    let dyadic = summary.dyadic.unwrap();
    assert_eq!(dyadic.levels.len(), 7);
    assert_eq!(dyadic.sup_gaps.len(), 6);
    assert!(dyadic.sup_gaps.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn plots() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_scenario(&load("orbit.json", dir.path())).unwrap();
    let svg = std::fs::read_to_string(summary.artifacts.svg.unwrap()).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert!(svg.contains(r#"r="2""#));

    let (trace, _) = simulate(&load("sphere_chase.json", dir.path())).unwrap();
    assert!(matches!(
        emit_plot(&trace, &dir.path().join("s.svg")),
        Err(Error::Unsupported(_))
    ));
}
