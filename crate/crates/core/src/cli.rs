//! Command implementations behind the `fuzzcalc` binary.
//!
//! Each command returns a [`RunReport`] plus the CSV it produced; writing
//! files and choosing the process exit code is left to the caller.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::calculus::{self, gs_derivative_with_slack, CalculusError, DerivativeKind, FuzzyFunction};
use crate::fivp::{
    self, check_solution, decay_rhs, solve_decay_analytic, solve_ivp_numeric, solve_ivp_numeric_at,
    DecayProblem, SolverConfig, SolverError, DEFAULT_STEP,
};
use crate::format::{band_csv, fmt_sig9};
use crate::number::{AlphaGrid, FuzzyError, FuzzyNumberDoc, DEFAULT_LEVELS, DEFAULT_SLACK};

/// Environment variable overriding the validity slack.
pub const TOLERANCE_ENV: &str = "FUZZCALC_TOL";

/// Largest accepted analytic-vs-numeric deviation.
pub const DEVIATION_TOL: f64 = 1e-6;

/// Number of time samples used by `reproduce`.
pub const REPRODUCE_POINTS: usize = 101;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("numeric blow-up: {0}")]
    BlowUp(SolverError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => ExitStatus::ConfigError.code(),
            CliError::BlowUp(_) => ExitStatus::BlowUp.code(),
        }
    }
}

impl From<FuzzyError> for CliError {
    fn from(e: FuzzyError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<CalculusError> for CliError {
    fn from(e: CalculusError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::BlowUp { .. } => CliError::BlowUp(e),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitStatus {
    Success,
    CheckFailed,
    ConfigError,
    BlowUp,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::CheckFailed => 1,
            ExitStatus::ConfigError => 2,
            ExitStatus::BlowUp => 3,
        }
    }
}

/// Flags shared by every verb.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub step: Option<f64>,
    pub alpha_levels: Option<usize>,
    pub t_points: Option<Vec<f64>>,
    /// Validity slack; defaults to [`DEFAULT_SLACK`].
    pub slack: Option<f64>,
}

impl Overrides {
    fn slack(&self) -> f64 {
        self.slack.unwrap_or(DEFAULT_SLACK)
    }
}

/// Reads [`TOLERANCE_ENV`], if set.
pub fn slack_from_env() -> Result<Option<f64>, CliError> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(raw) => match raw.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => Ok(Some(v)),
            _ => Err(CliError::Config(format!("{TOLERANCE_ENV}={raw:?} is not a nonnegative number"))),
        },
        Err(_) => Ok(None),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: ExitStatus,
    pub summary: Vec<String>,
    pub details: serde_json::Value,
}

impl RunReport {
    fn new(command: &str, passed: bool, summary: Vec<String>, details: serde_json::Value) -> Self {
        Self {
            command: command.to_string(),
            status: if passed {
                ExitStatus::Success
            } else {
                ExitStatus::CheckFailed
            },
            summary,
            details,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == ExitStatus::Success
    }

    pub fn exit_code(&self) -> i32 {
        self.status.code()
    }
}

/// A finished command: report plus the primary CSV payload.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: RunReport,
    pub csv: String,
}

pub fn read_config(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let last = (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { end } else { start + (end - start) * i as f64 / last })
                .collect()
        }
    }
}

fn grid_for(levels: Option<usize>, config: Option<usize>) -> Result<AlphaGrid, CliError> {
    Ok(AlphaGrid::uniform(levels.or(config).unwrap_or(DEFAULT_LEVELS))?)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeriveConfig {
    pub function: String,
    #[serde(default)]
    pub parameter: Option<FuzzyNumberDoc>,
    #[serde(default)]
    pub t_span: Option<[f64; 2]>,
    #[serde(default)]
    pub t_points: Option<usize>,
    #[serde(default)]
    pub alpha_levels: Option<usize>,
}

/// Classifies a built-in family over a `t` mesh.
///
/// CSV columns: `t,alpha,d_lower,d_upper,kind`, where `d_lower`/`d_upper`
/// are the min/max-ordered endpoint derivatives.
pub fn cmd_derive(config: &str, ov: &Overrides) -> Result<Outcome, CliError> {
    let cfg: DeriveConfig = parse(config)?;
    let grid = grid_for(ov.alpha_levels, cfg.alpha_levels)?;
    let param = cfg
        .parameter
        .as_ref()
        .ok_or_else(|| CliError::Config("missing \"parameter\" fuzzy number".into()))?
        .to_number_with_slack(grid.len(), ov.slack())?
        .resample(&grid);
    let (f, default_span): (FuzzyFunction, [f64; 2]) = match cfg.function.as_str() {
        "exp_decay" => (calculus::exp_decay(&param)?, [0.0, 2.0]),
        "sinusoid" => (calculus::sinusoid(&param)?, [0.0, PI]),
        "constant" => (calculus::constant(&param)?, [0.0, 1.0]),
        other => return Err(CliError::Config(format!("unknown function family {other:?}"))),
    };
    let [t0, t1] = cfg.t_span.unwrap_or(default_span);
    let times = match &ov.t_points {
        Some(list) => list.clone(),
        None => linspace(t0, t1, cfg.t_points.unwrap_or(21)),
    };

    let mut csv = String::from("t,alpha,d_lower,d_upper,kind\n");
    let mut counts = std::collections::BTreeMap::<&'static str, usize>::new();
    let mut kinds = Vec::with_capacity(times.len());
    for &t in &times {
        let result = gs_derivative_with_slack(&f, t, ov.slack())?;
        *counts.entry(result.kind.as_str()).or_default() += 1;
        kinds.push(json!({"t": t, "kind": result.kind}));
        let (lo, hi) = match &result.rates {
            Some(r) => r.min_max(),
            None => (vec![f64::NAN; grid.len()], vec![f64::NAN; grid.len()]),
        };
        for (j, &alpha) in grid.levels().iter().enumerate() {
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                fmt_sig9(t),
                fmt_sig9(alpha),
                fmt_sig9(lo[j]),
                fmt_sig9(hi[j]),
                result.kind
            );
        }
    }

    let failures = counts.get(DerivativeKind::GsInvalid.as_str()).copied().unwrap_or(0)
        + counts
            .get(DerivativeKind::EndpointsNondifferentiable.as_str())
            .copied()
            .unwrap_or(0);
    let mut summary = vec![format!("{} on {} t points", cfg.function, times.len())];
    summary.extend(counts.iter().map(|(k, n)| format!("{k}: {n}")));
    let details = json!({
        "function": cfg.function,
        "counts": counts,
        "classification": kinds,
    });
    Ok(Outcome {
        report: RunReport::new("derive", failures == 0, summary, details),
        csv,
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub problem: String,
    pub initial: FuzzyNumberDoc,
    pub t_span: [f64; 2],
    #[serde(default)]
    pub step: Option<f64>,
    #[serde(default)]
    pub alpha_levels: Option<usize>,
    #[serde(default)]
    pub label: Option<String>,
}

/// Solves a decay problem numerically, cross-checks it against the closed
/// form and validates the numeric band. The CSV holds the numeric band at
/// every step, or at `--t-points` when given.
pub fn cmd_solve(config: &str, ov: &Overrides) -> Result<Outcome, CliError> {
    let cfg: SolveConfig = parse(config)?;
    if cfg.problem != "decay" {
        return Err(CliError::Config(format!("unknown problem {:?}", cfg.problem)));
    }
    let grid = grid_for(ov.alpha_levels, cfg.alpha_levels)?;
    let initial = cfg
        .initial
        .to_number_with_slack(grid.len(), ov.slack())?
        .resample(&grid);
    let [t0, t1] = cfg.t_span;
    if t0 != 0.0 {
        return Err(CliError::Config(format!("t_span must start at 0, got {t0}")));
    }
    let problem = DecayProblem::new(initial, t1, cfg.label.clone().unwrap_or_else(|| "decay".into()))?;
    let solver = SolverConfig::new(ov.step.or(cfg.step).unwrap_or(DEFAULT_STEP), grid)?;
    let sys = decay_rhs();

    let dense = solve_ivp_numeric(&sys, &problem, &solver)?;
    let exact = solve_decay_analytic(&problem, &dense.times);
    let deviation = exact.max_deviation(&dense)?;
    let numeric_check = check_solution(&dense, &sys, ov.slack());
    let analytic_check = check_solution(&exact, &sys, ov.slack());

    let exported = match &ov.t_points {
        Some(times) => solve_ivp_numeric_at(&sys, &problem, &solver, times)?,
        None => dense.clone(),
    };

    let passed = numeric_check.report.is_valid()
        && analytic_check.report.is_valid()
        && deviation <= DEVIATION_TOL;
    let summary = vec![
        format!("problem {} on [{}, {}], step {}, {} alpha levels", problem.label(), t0, t1, solver.step, solver.grid.len()),
        format!("max |numeric - analytic| = {deviation:e} (tolerance {DEVIATION_TOL:e})"),
        format!("numeric band: {} (max residual {:e})", numeric_check.report, numeric_check.max_residual),
        format!("analytic band: {} (max residual {:e})", analytic_check.report, analytic_check.max_residual),
    ];
    let details = json!({
        "label": problem.label(),
        "step": solver.step,
        "alpha_levels": solver.grid.len(),
        "max_deviation": deviation,
        "deviation_tolerance": DEVIATION_TOL,
        "numeric_check": numeric_check,
        "analytic_check": analytic_check,
    });
    Ok(Outcome {
        report: RunReport::new("solve", passed, summary, details),
        csv: band_csv(&exported),
    })
}

/// Checks a fuzzy-number document. No CSV is produced.
pub fn cmd_validate(document: &str, ov: &Overrides) -> Result<Outcome, CliError> {
    let doc: FuzzyNumberDoc = parse(document)?;
    let levels = ov.alpha_levels.unwrap_or(DEFAULT_LEVELS);
    let report = match doc.report(levels, ov.slack()) {
        Ok(report) => report,
        Err(FuzzyError::ShapeOrdering(params)) => {
            let summary = vec![format!("invalid: shape parameters {params:?} are out of order")];
            let details = json!({"valid": false, "shape_parameters": params});
            return Ok(Outcome {
                report: RunReport::new("validate", false, summary, details),
                csv: String::new(),
            });
        }
        Err(e) => return Err(e.into()),
    };
    let mut summary = vec![if report.is_valid() {
        "valid fuzzy number".to_string()
    } else {
        format!("invalid: {} violation(s)", report.violations().len())
    }];
    summary.extend(report.violations().iter().map(|v| format!("  {v}")));
    Ok(Outcome {
        report: RunReport::new("validate", report.is_valid(), summary, json!(report)),
        csv: String::new(),
    })
}

/// Reproduces a worked decay example (`"4.1"`, `"4.2"`) as a full band, or
/// the α = 0.5 curves of the isotope example (`"fig-4.1"`) as plot data.
pub fn cmd_reproduce(id: &str, ov: &Overrides) -> Result<Outcome, CliError> {
    let (example, figure) = match id {
        "4.1" | "4.2" => (id, false),
        "fig-4.1" => ("4.1", true),
        other => {
            return Err(CliError::Config(format!(
                "unknown example {other:?} (expected 4.1, 4.2 or fig-4.1)"
            )))
        }
    };
    let solver = SolverConfig::new(ov.step.unwrap_or(DEFAULT_STEP), grid_for(ov.alpha_levels, None)?)?;
    let run = fivp::solve_example_with_slack(example, &solver, ov.slack())?;
    let times = match &ov.t_points {
        Some(list) => list.clone(),
        None => linspace(0.0, 1.0, REPRODUCE_POINTS),
    };
    if times.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(CliError::Config("reproduce times must lie in [0, 1]".into()));
    }
    let band = solve_decay_analytic(&run.problem, &times);
    let sys = decay_rhs();
    let band_check = check_solution(&band, &sys, ov.slack());

    let passed = band_check.report.is_valid()
        && run.numeric_check.report.is_valid()
        && run.max_deviation <= DEVIATION_TOL;
    let summary = vec![
        format!("example {example}: initial {}", run.problem.initial()),
        format!("max |numeric - analytic| = {:e} (tolerance {DEVIATION_TOL:e})", run.max_deviation),
        format!("band: {} (max residual {:e})", band_check.report, band_check.max_residual),
        format!("numeric band: {}", run.numeric_check.report),
    ];
    let details = json!({
        "example": id,
        "max_deviation": run.max_deviation,
        "band_check": band_check,
        "numeric_check": run.numeric_check,
    });

    let csv = if figure {
        let mut out = String::from("t_y1,y1,t_y2,y2\n");
        for (i, &t) in band.times.iter().enumerate() {
            let level = band.level_at(i, 0.5)?;
            let _ = writeln!(out, "{0},{1},{0},{2}", fmt_sig9(t), fmt_sig9(level.lo), fmt_sig9(level.hi));
        }
        out
    } else {
        band_csv(&band)
    };
    Ok(Outcome {
        report: RunReport::new("reproduce", passed, summary, details),
        csv,
    })
}

/// Writes the CSV to `out` (or stdout) and the JSON report next to it as
/// `<out>.json`.
pub fn emit(outcome: &Outcome, out: Option<&Path>) -> Result<(), CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    match out {
        Some(path) => {
            if !outcome.csv.is_empty() {
                fs::write(path, &outcome.csv).map_err(io(path))?;
            }
            let sidecar = sidecar_path(path);
            let json = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
            fs::write(&sidecar, json + "\n").map_err(io(&sidecar))?;
            for line in &outcome.report.summary {
                println!("{line}");
            }
        }
        None => {
            print!("{}", outcome.csv);
            for line in &outcome.report.summary {
                eprintln!("{line}");
            }
        }
    }
    Ok(())
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".json");
    PathBuf::from(name)
}
