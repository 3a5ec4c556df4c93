//! Scenario files: a single JSON document describing the domain, both
//! agents, the step size and the checks to run, plus the runners that turn
//! it into artifacts and a summary.

mod artifacts;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::GrowthFit;
use crate::domain::{DomainSpec, Point, TieBreak};
use crate::error::{Error, Result};
use crate::pursuit::{run_dyadic, DyadicReport, EvaderPolicy, Pursuit, PursuitTrace};
use crate::verify::{
    capture_classifier, check_angle_sandwich, check_separation_monotone, check_tc_relation, limit_geodesic_diagnostic,
    sqrt_bound_report, CheckReport, Classification,
};

pub use artifacts::{emit_plot, read_csv, read_trace, write_csv, write_trace_json, CsvRow, CSV_HEADER};

/// Overrides every scenario's output directory.
pub const OUT_DIR_ENV: &str = "CATPURSUIT_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    SeparationMonotone,
    AngleSandwich,
    TcRelation,
    SqrtBound,
    LimitGeodesic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DyadicRange {
    pub m_min: u32,
    pub m_max: u32,
}

impl std::str::FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.into()))
            .map_err(|_| Error::config("checks", format!("unknown check `{s}`")))
    }
}

/// Checks that apply to a finished trace without further configuration.
pub fn applicable_checks(trace: &PursuitTrace) -> Vec<CheckKind> {
    let mut out = vec![CheckKind::SeparationMonotone, CheckKind::AngleSandwich];
    let k = trace.domain.curvature_bound();
    if k <= 0.0 {
        out.push(CheckKind::TcRelation);
    } else if !trace.captured() && trace.separation[0] < trace.domain.threshold() {
        out.push(CheckKind::SqrtBound);
    }
    out
}

fn default_checks() -> Vec<CheckKind> {
    vec![CheckKind::SeparationMonotone, CheckKind::AngleSandwich]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub domain: DomainSpec,
    pub pursuer: Point,
    pub evader: EvaderPolicy,
    pub step_size: f64,
    #[serde(default)]
    pub max_steps: Option<usize>,
    /// Time horizon; sets `max_steps` to `floor(T / D)` when that is absent.
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub tie_break: TieBreak,
    /// Seed for stochastic evaders; overrides the policy's own.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Permit a start at or beyond `pi/sqrt(K)`.
    #[serde(default)]
    pub allow_long_start: bool,
    #[serde(default = "default_checks")]
    pub checks: Vec<CheckKind>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub dyadic: Option<DyadicRange>,
    #[serde(default)]
    pub plot: bool,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(path, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::config("name", "must be a nonempty file stem"));
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::config("step_size", "must be positive and finite"));
        }
        if let Some(t) = self.horizon {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::config("horizon", "must be positive and finite"));
            }
        }
        if self.max_steps.is_none() && self.horizon.is_none() {
            return Err(Error::config("max_steps", "give max_steps or horizon"));
        }
        if self.evader.is_stochastic() && self.seed.is_none() {
            return Err(Error::config("seed", "required for a stochastic evader"));
        }
        if let Some(r) = self.dyadic {
            if r.m_min > r.m_max {
                return Err(Error::config("dyadic", "m_min exceeds m_max"));
            }
            if !matches!(self.evader, EvaderPolicy::PrescribedCurve { .. }) {
                return Err(Error::config("dyadic", "needs a prescribed_curve evader"));
            }
            if self.horizon.is_none() {
                return Err(Error::config("horizon", "required for a dyadic sweep"));
            }
        }
        self.domain
            .validate_point(&self.pursuer)
            .map_err(|e| Error::config("pursuer", e.to_string()))?;
        self.evader
            .check_domain(&self.domain)
            .map_err(|e| Error::config("evader", e.to_string()))
    }

    pub fn steps(&self) -> usize {
        self.max_steps
            .unwrap_or_else(|| (self.horizon.unwrap() / self.step_size + 1e-9).floor() as usize)
    }

    fn policy(&self) -> EvaderPolicy {
        match (&self.evader, self.seed) {
            (EvaderPolicy::RandomWalk { start, extent, .. }, Some(seed)) => EvaderPolicy::RandomWalk {
                seed,
                start: start.clone(),
                extent: *extent,
            },
            (p, _) => p.clone(),
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .or_else(|| self.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Capture {
        step: usize,
    },
    Escape {
        l_n: f64,
        tail_slope: f64,
        settled: bool,
    },
    /// Too few steps to classify.
    Undetermined {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Fits {
    pub tau_p: Option<GrowthFit>,
    pub tau_e: Option<GrowthFit>,
    pub c_p: Option<GrowthFit>,
    pub c_e: Option<GrowthFit>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Artifacts {
    pub csv: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub outcome: Outcome,
    pub steps: usize,
    pub step_size: f64,
    pub l0: f64,
    pub l_n: f64,
    pub capture_step: Option<usize>,
    pub tau_p: f64,
    pub tau_e: f64,
    /// Constant and `B` of the square-root bound, when it applies.
    pub sqrt_constant: Option<f64>,
    pub b_stat: Option<f64>,
    pub fits: Fits,
    pub checks: Vec<CheckReport>,
    pub dyadic: Option<DyadicReport>,
    pub artifacts: Artifacts,
    /// Every requested check passed.
    pub passed: bool,
}

fn failed_check(name: &str, err: Error) -> CheckReport {
    CheckReport {
        name: name.into(),
        passed: false,
        worst: 0.0,
        tolerance: 0.0,
        index: None,
        context: serde_json::Value::Null,
        error: Some(err.to_string()),
    }
}

/// Run the requested checks over a trace.
pub fn run_checks(trace: &PursuitTrace, checks: &[CheckKind]) -> Vec<CheckReport> {
    checks
        .iter()
        .map(|kind| match kind {
            CheckKind::SeparationMonotone => check_separation_monotone(trace),
            CheckKind::AngleSandwich => {
                check_angle_sandwich(trace).unwrap_or_else(|e| failed_check("angle_sandwich", e))
            }
            CheckKind::TcRelation => check_tc_relation(trace).unwrap_or_else(|e| failed_check("tc_relation", e)),
            CheckKind::SqrtBound => match sqrt_bound_report(trace) {
                Ok(r) => CheckReport {
                    name: "sqrt_bound".into(),
                    passed: r.passed,
                    worst: (-r.min_margin).max(r.step_worst).max(0.0),
                    tolerance: crate::verify::ANGLE_TOL,
                    index: r.step_index,
                    context: serde_json::json!({
                        "B": r.b, "C": r.c, "min_margin": r.min_margin, "step_worst": r.step_worst,
                        "B_continuous": r.b_continuous, "C_continuous": r.c_continuous,
                        "B_degenerate": r.b_degenerate,
                    }),
                    error: None,
                },
                Err(e) => failed_check("sqrt_bound", e),
            },
            CheckKind::LimitGeodesic => {
                let len = trace.steps.len() as f64 * trace.step_size;
                match limit_geodesic_diagnostic(trace, &[len / 20.0], 10) {
                    Ok(d) => CheckReport {
                        name: "limit_geodesic".into(),
                        passed: d.passed,
                        worst: d.series[0].final_value,
                        tolerance: 1e-3,
                        index: None,
                        context: serde_json::to_value(&d.series).unwrap_or_default(),
                        error: None,
                    },
                    Err(e) => failed_check("limit_geodesic", e),
                }
            }
        })
        .collect()
}

/// Summary of a finished trace without writing anything.
pub fn summarize(name: &str, trace: &PursuitTrace, checks: &[CheckKind]) -> RunSummary {
    let (outcome, fits) = match capture_classifier(trace) {
        Ok(Classification::Capture { step }) => (Outcome::Capture { step }, Fits::default()),
        Ok(Classification::Escape {
            l_n,
            tail_slope,
            settled,
            tau_p_fit,
            tau_e_fit,
            c_p_fit,
            c_e_fit,
        }) => (
            Outcome::Escape {
                l_n,
                tail_slope,
                settled,
            },
            Fits {
                tau_p: tau_p_fit,
                tau_e: tau_e_fit,
                c_p: c_p_fit,
                c_e: c_e_fit,
            },
        ),
        Err(e) => (Outcome::Undetermined { reason: e.to_string() }, Fits::default()),
    };
    let bound = sqrt_bound_report(trace).ok();
    let checks = run_checks(trace, checks);
    RunSummary {
        name: name.into(),
        outcome,
        steps: trace.steps.len(),
        step_size: trace.step_size,
        l0: trace.separation[0],
        l_n: *trace.separation.last().unwrap(),
        capture_step: trace.capture_step,
        tau_p: *trace.tau_p.last().unwrap(),
        tau_e: *trace.tau_e.last().unwrap(),
        sqrt_constant: bound.as_ref().map(|b| b.c),
        b_stat: bound.as_ref().map(|b| b.b),
        fits,
        passed: checks.iter().all(|c| c.passed),
        checks,
        dyadic: None,
        artifacts: Artifacts::default(),
    }
}

/// Execute a scenario in memory.
pub fn simulate(cfg: &ScenarioConfig) -> Result<(PursuitTrace, Option<DyadicReport>)> {
    cfg.validate()?;
    if let (Some(range), EvaderPolicy::PrescribedCurve { curve }) = (cfg.dyadic, &cfg.evader) {
        let mut report = run_dyadic(
            &cfg.domain,
            &cfg.pursuer,
            curve,
            range.m_min,
            range.m_max,
            cfg.horizon.unwrap(),
        )?;
        let finest = report.traces.pop().expect("at least one level");
        return Ok((finest, Some(report)));
    }
    let trace = Pursuit::new(&cfg.domain, cfg.pursuer.clone(), cfg.policy(), cfg.step_size)
        .max_steps(cfg.steps())
        .tie_break(cfg.tie_break)
        .allow_long_start(cfg.allow_long_start)
        .run()?;
    Ok((trace, None))
}

/// Execute a scenario and write its artifacts.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunSummary> {
    let (trace, dyadic) = simulate(cfg)?;
    let mut summary = summarize(&cfg.name, &trace, &cfg.checks);
    // The level traces are not part of the serialized summary.
    summary.dyadic = dyadic.map(|mut d| {
        d.traces.clear();
        d
    });
    let dir = cfg.output_dir();
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let csv = dir.join(format!("{}.csv", cfg.name));
    write_csv(&trace, &csv)?;
    let trace_json = dir.join(format!("{}.trace.json", cfg.name));
    write_trace_json(&trace, &trace_json)?;
    let summary_path = dir.join(format!("{}.summary.json", cfg.name));
    summary.artifacts = Artifacts {
        csv: Some(csv),
        trace: Some(trace_json),
        summary: Some(summary_path.clone()),
        svg: None,
    };
    if cfg.plot && trace.domain.is_planar() {
        let svg = dir.join(format!("{}.svg", cfg.name));
        emit_plot(&trace, &svg)?;
        summary.artifacts.svg = Some(svg);
    }
    let text = serde_json::to_string_pretty(&summary).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(&summary_path, text).map_err(|e| Error::Io(format!("{}: {e}", summary_path.display())))?;
    Ok(summary)
}

/// A sweep file: explicit scenarios (inline or by path relative to the
/// sweep file) plus copies of `base` for each listed seed or step size.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchSpec {
    #[serde(default)]
    pub scenarios: Vec<ScenarioRef>,
    #[serde(default)]
    pub base: Option<ScenarioConfig>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub step_sizes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScenarioRef {
    Path(PathBuf),
    Inline(Box<ScenarioConfig>),
}

impl BatchSpec {
    pub fn load(path: &Path) -> Result<Vec<ScenarioConfig>> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        let spec: BatchSpec = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::config(e.path().to_string(), e.into_inner().to_string()))?;
        spec.expand(path.parent().unwrap_or(Path::new(".")))
    }

    pub fn expand(&self, base_dir: &Path) -> Result<Vec<ScenarioConfig>> {
        let mut out = Vec::new();
        for (i, s) in self.scenarios.iter().enumerate() {
            out.push(match s {
                ScenarioRef::Path(p) => ScenarioConfig::load(&base_dir.join(p))
                    .map_err(|e| Error::config(format!("scenarios[{i}]"), e.to_string()))?,
                ScenarioRef::Inline(c) => (**c).clone(),
            });
        }
        if let Some(base) = &self.base {
            for &seed in &self.seeds {
                let mut c = base.clone();
                c.seed = Some(seed);
                c.name = format!("{}_seed{seed}", base.name);
                out.push(c);
            }
            for (i, &d) in self.step_sizes.iter().enumerate() {
                let mut c = base.clone();
                c.step_size = d;
                c.name = format!("{}_d{i}", base.name);
                out.push(c);
            }
            if self.seeds.is_empty() && self.step_sizes.is_empty() {
                out.push(base.clone());
            }
        }
        if out.is_empty() {
            return Err(Error::config("batch", "the sweep is empty"));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchRow {
    pub name: String,
    pub summary: Option<RunSummary>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub rows: Vec<BatchRow>,
}

impl BatchReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.summary.as_ref().is_some_and(|s| s.passed))
    }

    /// Plain-text aggregate table.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<28} {:<10} {:>8} {:>12} {:>12} {:>12} {:>6}\n",
            "name", "outcome", "steps", "L0", "LN", "tauP", "pass"
        );
        for row in &self.rows {
            match (&row.summary, &row.error) {
                (Some(s), _) => {
                    let outcome = match &s.outcome {
                        Outcome::Capture { .. } => "capture",
                        Outcome::Escape { .. } => "escape",
                        Outcome::Undetermined { .. } => "unknown",
                    };
                    out += &format!(
                        "{:<28} {:<10} {:>8} {:>12.6} {:>12.6} {:>12.6} {:>6}\n",
                        s.name, outcome, s.steps, s.l0, s.l_n, s.tau_p, s.passed
                    );
                }
                (None, err) => {
                    out += &format!("{:<28} error: {}\n", row.name, err.as_deref().unwrap_or("unknown"));
                }
            }
        }
        out
    }
}

/// Run scenarios concurrently; results keep the input order and failures
/// are recorded per run.
pub fn run_batch(configs: &[ScenarioConfig]) -> Result<BatchReport> {
    if configs.is_empty() {
        return Err(Error::config("batch", "the sweep is empty"));
    }
    let rows = configs
        .par_iter()
        .map(|cfg| match run_scenario(cfg) {
            Ok(s) => BatchRow {
                name: cfg.name.clone(),
                summary: Some(s),
                error: None,
            },
            Err(e) => BatchRow {
                name: cfg.name.clone(),
                summary: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    Ok(BatchReport { rows })
}
