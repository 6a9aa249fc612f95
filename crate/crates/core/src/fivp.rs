//! Fuzzy initial value problem `y' = −y`, `y(0) = c`.
//!
//! Under the gS derivative the problem splits into the endpoint-coupled
//! crisp system
//!
//! ```text
//! y1'(t, α) = −y2(t, α)
//! y2'(t, α) = −y1(t, α)
//! ```
//!
//! with `y1(0, α) = c1(α)`, `y2(0, α) = c2(α)`. Its closed form is
//!
//! ```text
//! y1(t, α) = ½(c1 − c2)·eᵗ + ½(c1 + c2)·e⁻ᵗ
//! y2(t, α) = ½(c1 + c2)·e⁻ᵗ − ½(c1 − c2)·eᵗ
//! ```
//!
//! This module evaluates the closed form, integrates the coupled system with
//! classical RK4 per α level, and checks that a stored band is a valid
//! solution.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::number::{
    check_nested, validate_with_slack, AlphaGrid, Condition, FuzzyError, FuzzyNumber, Interval,
    ValidityReport, Violation, DEFAULT_SLACK,
};

/// Default RK4 step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Residual tolerance for solutions that carry exact derivatives,
/// relative to `max(1, max |y|)`.
pub const ANALYTIC_RESIDUAL_TOL: f64 = 1e-12;

/// Residual tolerance for finite differences over stored steps,
/// relative to `max(1, max |y|)`.
pub const NUMERIC_RESIDUAL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("time span [{0}, {1}] must start at 0 and not run backwards")]
    BadSpan(f64, f64),
    #[error("step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("state became non-finite at t = {t}, alpha = {alpha}")]
    BlowUp { t: f64, alpha: f64 },
    #[error("unknown example {0:?} (expected \"4.1\" or \"4.2\")")]
    UnknownExample(String),
    #[error("output times must be sorted and lie inside [{0}, {1}]")]
    BadTimes(f64, f64),
    #[error("solutions are sampled on different times or alpha grids")]
    ShapeMismatch,
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

/// `y' = −y` with fuzzy initial value `c` on `[0, t_end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayProblem {
    initial: FuzzyNumber,
    t_span: (f64, f64),
    label: String,
}

impl DecayProblem {
    pub fn new(initial: FuzzyNumber, t_end: f64, label: impl Into<String>) -> Result<Self, SolverError> {
        if !t_end.is_finite() || t_end < 0.0 {
            return Err(SolverError::BadSpan(0.0, t_end));
        }
        Ok(Self {
            initial,
            t_span: (0.0, t_end),
            label: label.into(),
        })
    }

    /// Radioactive decay with initial mass around 200 mg, `c = (195, 200, 205)`.
    pub fn isotope(grid: AlphaGrid) -> Self {
        let c = FuzzyNumber::triangular(195.0, 200.0, 205.0, grid).expect("ordered triangle");
        Self::new(c, 1.0, "4.1").expect("valid span")
    }

    /// Dissolved oxygen with initial amount `D0 = (90, 100, 120)`.
    pub fn oxygen(grid: AlphaGrid) -> Self {
        let c = FuzzyNumber::triangular(90.0, 100.0, 120.0, grid).expect("ordered triangle");
        Self::new(c, 1.0, "4.2").expect("valid span")
    }

    pub fn example(name: &str, grid: AlphaGrid) -> Result<Self, SolverError> {
        match name {
            "4.1" => Ok(Self::isotope(grid)),
            "4.2" => Ok(Self::oxygen(grid)),
            other => Err(SolverError::UnknownExample(other.to_string())),
        }
    }

    pub fn initial(&self) -> &FuzzyNumber {
        &self.initial
    }

    pub fn t_span(&self) -> (f64, f64) {
        self.t_span
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same problem with the initial value re-sampled onto `grid`.
    pub fn on_grid(&self, grid: &AlphaGrid) -> Self {
        Self {
            initial: self.initial.resample(grid),
            ..self.clone()
        }
    }
}

type Rhs = dyn Fn(f64, f64, f64, f64) -> (f64, f64) + Send + Sync;

/// Right-hand side `(t, y1, y2, α) -> (y1', y2')` of an endpoint system.
#[derive(Clone)]
pub struct EndpointSystem {
    rhs: Arc<Rhs>,
}

impl fmt::Debug for EndpointSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("EndpointSystem")
    }
}

impl EndpointSystem {
    pub fn new<F>(rhs: F) -> Self
    where
        F: Fn(f64, f64, f64, f64) -> (f64, f64) + Send + Sync + 'static,
    {
        Self { rhs: Arc::new(rhs) }
    }

    pub fn eval(&self, t: f64, y1: f64, y2: f64, alpha: f64) -> (f64, f64) {
        (self.rhs)(t, y1, y2, alpha)
    }
}

/// `(y1', y2') = (−y2, −y1)`.
pub fn decay_rhs() -> EndpointSystem {
    EndpointSystem::new(|_, y1, y2, _| (-y2, -y1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Rk4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub step: f64,
    pub method: Method,
    pub grid: AlphaGrid,
}

impl SolverConfig {
    pub fn new(step: f64, grid: AlphaGrid) -> Result<Self, SolverError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(SolverError::BadStep(step));
        }
        Ok(Self {
            step,
            method: Method::Rk4,
            grid,
        })
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            step: DEFAULT_STEP,
            method: Method::Rk4,
            grid: AlphaGrid::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Analytic,
    Numeric,
}

/// Solution band over `times × grid`. Row `i` of `lower`/`upper` holds the
/// endpoints at `times[i]` for every α level.
/// Per-time, per-level `(lower, upper)` endpoint values.
pub type EndpointBand = (Vec<Vec<f64>>, Vec<Vec<f64>>);

#[derive(Debug, Clone, PartialEq)]
pub struct IvpSolution {
    pub times: Vec<f64>,
    pub grid: AlphaGrid,
    pub lower: Vec<Vec<f64>>,
    pub upper: Vec<Vec<f64>>,
    pub provenance: Provenance,
    /// Fuzzy-number validity of each stored time step.
    pub validity: Vec<ValidityReport>,
    /// Exact `t`-derivatives of the endpoints, when known.
    pub rates: Option<EndpointBand>,
}

impl IvpSolution {
    /// Assembles a band and records per-step validity.
    pub fn from_band(
        times: Vec<f64>,
        grid: AlphaGrid,
        lower: Vec<Vec<f64>>,
        upper: Vec<Vec<f64>>,
        provenance: Provenance,
        slack: f64,
    ) -> Result<Self, SolverError> {
        if lower.len() != times.len() || upper.len() != times.len() {
            return Err(SolverError::ShapeMismatch);
        }
        let validity = times
            .iter()
            .zip(lower.iter().zip(&upper))
            .map(|(&t, (lo, hi))| Ok(validate_with_slack(lo, hi, &grid, slack)?.tag_time(t)))
            .collect::<Result<Vec<_>, FuzzyError>>()?;
        Ok(Self {
            times,
            grid,
            lower,
            upper,
            provenance,
            validity,
            rates: None,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn level(&self, step: usize, level: usize) -> Interval {
        Interval::new(self.lower[step][level], self.upper[step][level])
    }

    /// Level set at stored time `step`, interpolated in α.
    pub fn level_at(&self, step: usize, alpha: f64) -> Result<Interval, FuzzyError> {
        self.value(step).level_set(alpha)
    }

    /// `y(times[step])` as a fuzzy number; not re-validated.
    pub fn value(&self, step: usize) -> FuzzyNumber {
        FuzzyNumber::from_parts(
            self.grid.clone(),
            self.lower[step].clone(),
            self.upper[step].clone(),
        )
    }

    pub fn all_steps_valid(&self) -> bool {
        self.validity.iter().all(ValidityReport::is_valid)
    }

    /// Largest absolute endpoint difference against another band on the same samples.
    pub fn max_deviation(&self, other: &IvpSolution) -> Result<f64, SolverError> {
        if self.times != other.times || self.grid != other.grid {
            return Err(SolverError::ShapeMismatch);
        }
        let rows = |a: &[Vec<f64>], b: &[Vec<f64>]| {
            a.iter()
                .zip(b)
                .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
                .fold(0.0, f64::max)
        };
        Ok(rows(&self.lower, &other.lower).max(rows(&self.upper, &other.upper)))
    }

    /// Largest `|y|` in the band.
    pub fn scale(&self) -> f64 {
        self.lower
            .iter()
            .chain(&self.upper)
            .flatten()
            .fold(0.0, |m: f64, v| m.max(v.abs()))
    }
}

/// Closed-form solution evaluated at `times` on the initial value's grid.
pub fn solve_decay_analytic(p: &DecayProblem, times: &[f64]) -> IvpSolution {
    let c = p.initial();
    let mut lower = Vec::with_capacity(times.len());
    let mut upper = Vec::with_capacity(times.len());
    let mut lower_rate = Vec::with_capacity(times.len());
    let mut upper_rate = Vec::with_capacity(times.len());
    for &t in times {
        let (grow, decay) = (t.exp(), (-t).exp());
        let mut row = (vec![], vec![], vec![], vec![]);
        for (&c1, &c2) in c.lower().iter().zip(c.upper()) {
            let spread = 0.5 * (c1 - c2) * grow;
            let mean = 0.5 * (c1 + c2) * decay;
            row.0.push(spread + mean);
            row.1.push(mean - spread);
            row.2.push(spread - mean);
            row.3.push(-mean - spread);
        }
        lower.push(row.0);
        upper.push(row.1);
        lower_rate.push(row.2);
        upper_rate.push(row.3);
    }
    let mut sol = IvpSolution::from_band(
        times.to_vec(),
        c.grid().clone(),
        lower,
        upper,
        Provenance::Analytic,
        DEFAULT_SLACK,
    )
    .expect("rows match the time list");
    sol.rates = Some((lower_rate, upper_rate));
    sol
}

fn rk4_step(sys: &EndpointSystem, t: f64, y: (f64, f64), h: f64, alpha: f64) -> (f64, f64) {
    let f = |t: f64, y1: f64, y2: f64| sys.eval(t, y1, y2, alpha);
    let half = 0.5 * h;
    let k1 = f(t, y.0, y.1);
    let k2 = f(t + half, y.0 + half * k1.0, y.1 + half * k1.1);
    let k3 = f(t + half, y.0 + half * k2.0, y.1 + half * k2.1);
    let k4 = f(t + h, y.0 + h * k3.0, y.1 + h * k3.1);
    (
        y.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        y.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    )
}

/// Uniform step grid over the span with spacing at most `step`.
pub fn step_times(t_span: (f64, f64), step: f64) -> Vec<f64> {
    let (t0, t1) = t_span;
    let span = t1 - t0;
    if span <= 0.0 {
        return vec![t0];
    }
    let n = ((span / step) - 1e-9).ceil().max(1.0) as usize;
    let dt = span / n as f64;
    let mut times: Vec<f64> = (0..n).map(|i| t0 + i as f64 * dt).collect();
    times.push(t1);
    times
}

/// Integrates the endpoint system with RK4, storing every step.
pub fn solve_ivp_numeric(
    sys: &EndpointSystem,
    p: &DecayProblem,
    cfg: &SolverConfig,
) -> Result<IvpSolution, SolverError> {
    if !(cfg.step.is_finite() && cfg.step > 0.0) {
        return Err(SolverError::BadStep(cfg.step));
    }
    let times = step_times(p.t_span(), cfg.step);
    integrate(sys, p, cfg, &times)
}

/// Integrates the endpoint system with RK4 and stores the state at `times`
/// only. Each gap between output times is covered with steps no longer
/// than `cfg.step`.
pub fn solve_ivp_numeric_at(
    sys: &EndpointSystem,
    p: &DecayProblem,
    cfg: &SolverConfig,
    times: &[f64],
) -> Result<IvpSolution, SolverError> {
    if !(cfg.step.is_finite() && cfg.step > 0.0) {
        return Err(SolverError::BadStep(cfg.step));
    }
    let (t0, t1) = p.t_span();
    let sorted = times.windows(2).all(|w| w[0] <= w[1]);
    if !sorted || times.iter().any(|&t| !(t0..=t1).contains(&t)) {
        return Err(SolverError::BadTimes(t0, t1));
    }
    integrate(sys, p, cfg, times)
}

fn integrate(
    sys: &EndpointSystem,
    p: &DecayProblem,
    cfg: &SolverConfig,
    times: &[f64],
) -> Result<IvpSolution, SolverError> {
    let c = p.initial().resample(&cfg.grid);
    let t0 = p.t_span().0;
    let alphas = cfg.grid.levels();

    // Levels are independent; collecting keeps them in α order.
    let columns: Vec<Result<Vec<(f64, f64)>, SolverError>> = (0..alphas.len())
        .into_par_iter()
        .map(|j| {
            let alpha = alphas[j];
            let mut t = t0;
            let mut y = (c.lower()[j], c.upper()[j]);
            let mut out = Vec::with_capacity(times.len());
            for &target in times {
                let gap = target - t;
                if gap > 0.0 {
                    let n = ((gap / cfg.step) - 1e-9).ceil().max(1.0) as usize;
                    let h = gap / n as f64;
                    for i in 0..n {
                        let ti = t + i as f64 * h;
                        y = rk4_step(sys, ti, y, h, alpha);
                        if !y.0.is_finite() || !y.1.is_finite() {
                            return Err(SolverError::BlowUp { t: ti + h, alpha });
                        }
                    }
                    t = target;
                }
                out.push(y);
            }
            Ok(out)
        })
        .collect();

    let mut lower = vec![Vec::with_capacity(alphas.len()); times.len()];
    let mut upper = vec![Vec::with_capacity(alphas.len()); times.len()];
    for column in columns {
        for (i, (y1, y2)) in column?.into_iter().enumerate() {
            lower[i].push(y1);
            upper[i].push(y2);
        }
    }
    IvpSolution::from_band(
        times.to_vec(),
        cfg.grid.clone(),
        lower,
        upper,
        Provenance::Numeric,
        DEFAULT_SLACK,
    )
}

/// Detailed outcome of [`check_solution`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionCheck {
    pub report: ValidityReport,
    /// Largest `|y_i' − rhs_i|` over the band.
    pub max_residual: f64,
    /// Largest distance between the min/max derivative levels and the
    /// reordered right-hand-side levels.
    pub max_gs_mismatch: f64,
    /// Tolerance the residual checks used.
    pub residual_tolerance: f64,
}

/// Checks a stored band against the endpoint system:
///
/// 1. each `y(t)` is a fuzzy number on the grid;
/// 2. levels are nested across α;
/// 3. endpoint derivatives satisfy the system (exact rates when stored,
///    otherwise finite differences over the stored times);
/// 4. the min/max reordering of `(y1', y2')` is a fuzzy number whose levels
///    match the reordered right-hand side (`(−1)·y(t)` for decay).
pub fn validate_solution(sol: &IvpSolution, sys: &EndpointSystem) -> ValidityReport {
    check_solution(sol, sys, DEFAULT_SLACK).report
}

// `!(e <= tol)` also flags NaN residuals.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn check_solution(sol: &IvpSolution, sys: &EndpointSystem, slack: f64) -> SolutionCheck {
    let alphas = sol.grid.levels();
    let mut violations = Vec::new();

    for (i, &t) in sol.times.iter().enumerate() {
        match validate_with_slack(&sol.lower[i], &sol.upper[i], &sol.grid, slack) {
            Ok(r) => violations.extend(r.tag_time(t).violations().iter().cloned()),
            Err(_) => violations.push(Violation::new(Condition::NonFinite, 0.0, f64::INFINITY).at_time(t)),
        }
        let nested = check_nested(&sol.lower[i], &sol.upper[i], &sol.grid, slack);
        violations.extend(nested.tag_time(t).violations().iter().cloned());
    }

    let scale = sol.scale().max(1.0);
    let (rates, tol) = match &sol.rates {
        Some((lo, hi)) => (Some((lo.clone(), hi.clone())), ANALYTIC_RESIDUAL_TOL * scale),
        None => (
            finite_difference_rates(&sol.times, &sol.lower, &sol.upper),
            NUMERIC_RESIDUAL_TOL * scale,
        ),
    };

    let mut max_residual = 0.0_f64;
    let mut max_gs_mismatch = 0.0_f64;
    if let Some((d_lower, d_upper)) = rates {
        for (i, &t) in sol.times.iter().enumerate() {
            let (d1, d2) = (&d_lower[i], &d_upper[i]);
            let mut gs_lo = Vec::with_capacity(alphas.len());
            let mut gs_hi = Vec::with_capacity(alphas.len());
            for (j, &alpha) in alphas.iter().enumerate() {
                let (r1, r2) = sys.eval(t, sol.lower[i][j], sol.upper[i][j], alpha);
                let (e1, e2) = ((d1[j] - r1).abs(), (d2[j] - r2).abs());
                max_residual = max_residual.max(e1).max(e2);
                if !(e1 <= tol) {
                    violations.push(Violation::new(Condition::ResidualLower, alpha, e1).at_time(t));
                }
                if !(e2 <= tol) {
                    violations.push(Violation::new(Condition::ResidualUpper, alpha, e2).at_time(t));
                }

                let (lo, hi) = (d1[j].min(d2[j]), d1[j].max(d2[j]));
                let mismatch = (lo - r1.min(r2)).abs().max((hi - r1.max(r2)).abs());
                max_gs_mismatch = max_gs_mismatch.max(mismatch);
                if !(mismatch <= tol) {
                    violations.push(Violation::new(Condition::GsMismatch, alpha, mismatch).at_time(t));
                }
                gs_lo.push(lo);
                gs_hi.push(hi);
            }
            if let Ok(r) = validate_with_slack(&gs_lo, &gs_hi, &sol.grid, slack) {
                violations.extend(r.violations().iter().map(|v| Violation {
                    condition: Condition::GsDerivative,
                    ..v.clone()
                }.at_time(t)));
            }
        }
    }

    SolutionCheck {
        report: ValidityReport::from_violations(violations),
        max_residual,
        max_gs_mismatch,
        residual_tolerance: tol,
    }
}

/// Second-order differences over possibly non-uniform samples: three-point
/// central stencils inside, one-sided three-point stencils at the ends.
/// Needs at least two samples.
fn finite_difference_rates(
    times: &[f64],
    lower: &[Vec<f64>],
    upper: &[Vec<f64>],
) -> Option<EndpointBand> {
    let n = times.len();
    if n < 2 {
        return None;
    }
    let derive = |rows: &[Vec<f64>]| -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| {
                if n == 2 {
                    let h = times[1] - times[0];
                    return rows[1].iter().zip(&rows[0]).map(|(b, a)| (b - a) / h).collect();
                }
                // Stencil nodes and the evaluation point.
                let k = i.clamp(1, n - 2);
                let (x0, x1, x2) = (times[k - 1], times[k], times[k + 1]);
                let x = times[i];
                // Derivatives of the Lagrange basis at x.
                let w0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
                let w1 = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
                let w2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
                (0..rows[i].len())
                    .map(|j| w0 * rows[k - 1][j] + w1 * rows[k][j] + w2 * rows[k + 1][j])
                    .collect()
            })
            .collect()
    };
    Some((derive(lower), derive(upper)))
}

/// Analytic and numeric runs of a named example plus their comparison.
#[derive(Debug, Clone)]
pub struct ExampleRun {
    pub problem: DecayProblem,
    /// Closed form sampled at the numeric step times.
    pub analytic: IvpSolution,
    pub numeric: IvpSolution,
    pub max_deviation: f64,
    pub analytic_check: SolutionCheck,
    pub numeric_check: SolutionCheck,
}

/// Runs example `"4.1"` or `"4.2"` over `t ∈ [0, 1]` both ways.
pub fn solve_example(name: &str, cfg: &SolverConfig) -> Result<ExampleRun, SolverError> {
    solve_example_with_slack(name, cfg, DEFAULT_SLACK)
}

pub fn solve_example_with_slack(
    name: &str,
    cfg: &SolverConfig,
    slack: f64,
) -> Result<ExampleRun, SolverError> {
    let problem = DecayProblem::example(name, cfg.grid.clone())?;
    let sys = decay_rhs();
    let numeric = solve_ivp_numeric(&sys, &problem, cfg)?;
    let analytic = solve_decay_analytic(&problem, &numeric.times);
    let max_deviation = analytic.max_deviation(&numeric)?;
    let analytic_check = check_solution(&analytic, &sys, slack);
    let numeric_check = check_solution(&numeric, &sys, slack);
    Ok(ExampleRun {
        problem,
        analytic,
        numeric,
        max_deviation,
        analytic_check,
        numeric_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{classify, DerivativeKind, Domain, FuzzyFunction};

    fn isotope() -> DecayProblem {
        DecayProblem::isotope(AlphaGrid::default())
    }

    // Independent oracle: the closed-form endpoints written out per level from the
    // triangle parameters.
    fn oracle(l: f64, m: f64, r: f64, t: f64, alpha: f64) -> (f64, f64) {
        let c1 = l + alpha * (m - l);
        let c2 = r - alpha * (r - m);
        let y1 = 0.5 * (c1 - c2) * t.exp() + 0.5 * (c1 + c2) * (-t).exp();
        let y2 = 0.5 * (c1 + c2) * (-t).exp() - 0.5 * (c1 - c2) * t.exp();
        (y1, y2)
    }

    #[test]
    fn analytic_initial_condition() {
        let p = isotope();
        let sol = solve_decay_analytic(&p, &[0.0]);
        assert_eq!(sol.value(0), *p.initial());
    }

    #[test]
    fn analytic_matches_frozen_values() {
        let sol = solve_decay_analytic(&isotope(), &[1.0]);
        let core = sol.level(0, 10);
        assert!((core.lo - 73.57589).abs() < 1e-5 && (core.hi - 73.57589).abs() < 1e-5);
        let support = sol.level(0, 0);
        assert!((support.lo - 59.98448).abs() < 1e-5);
        assert!((support.hi - 87.16730).abs() < 1e-5);

        let oxygen = solve_decay_analytic(&DecayProblem::oxygen(AlphaGrid::default()), &[0.5]);
        let support = oxygen.level(0, 0);
        assert!((support.lo - 38.954900209324585).abs() < 1e-9);
        assert!((support.hi - 88.41653833032842).abs() < 1e-9);

        for (j, &alpha) in sol.grid.levels().iter().enumerate() {
            let (y1, y2) = oracle(195.0, 200.0, 205.0, 1.0, alpha);
            assert!((sol.level(0, j).lo - y1).abs() < 1e-12);
            assert!((sol.level(0, j).hi - y2).abs() < 1e-12);
        }
    }

    #[test]
    fn decay_rhs_examples() {
        let sys = decay_rhs();
        assert_eq!(sys.eval(0.3, 1.0, 2.0, 0.5), (-2.0, -1.0));
        assert_eq!(sys.eval(0.0, 0.0, 0.0, 0.0), (-0.0, -0.0));
        assert_eq!(sys.eval(9.0, 7.0, 7.0, 1.0), (-7.0, -7.0));
    }

    #[test]
    fn numeric_matches_analytic() {
        let p = isotope();
        let sol = solve_ivp_numeric(&decay_rhs(), &p, &SolverConfig::default()).unwrap();
        assert_eq!(sol.len(), 1001);
        assert_eq!(*sol.times.last().unwrap(), 1.0);
        let exact = solve_decay_analytic(&p, &sol.times);
        assert!(sol.max_deviation(&exact).unwrap() <= 1e-6);
        assert!(sol.all_steps_valid());
    }

    #[test]
    fn crisp_initial_value_decays_classically() {
        let p = DecayProblem::new(FuzzyNumber::crisp(200.0, AlphaGrid::default()), 1.0, "crisp")
            .unwrap();
        let sol = solve_ivp_numeric(&decay_rhs(), &p, &SolverConfig::default()).unwrap();
        let last = sol.len() - 1;
        for j in 0..sol.grid.len() {
            let l = sol.level(last, j);
            assert!((l.lo - 200.0 * (-1.0f64).exp()).abs() <= 1e-9);
            assert!((l.hi - 200.0 * (-1.0f64).exp()).abs() <= 1e-9);
        }
    }

    #[test]
    fn empty_span_returns_initial_condition() {
        let c = FuzzyNumber::triangular(195.0, 200.0, 205.0, AlphaGrid::default()).unwrap();
        let p = DecayProblem::new(c.clone(), 0.0, "empty").unwrap();
        let sol = solve_ivp_numeric(&decay_rhs(), &p, &SolverConfig::default()).unwrap();
        assert_eq!(sol.times, vec![0.0]);
        assert_eq!(sol.value(0), c);
        assert!(validate_solution(&sol, &decay_rhs()).is_valid());
    }

    #[test]
    fn config_and_span_errors() {
        assert_eq!(SolverConfig::new(0.0, AlphaGrid::default()), Err(SolverError::BadStep(0.0)));
        assert!(DecayProblem::new(FuzzyNumber::crisp(1.0, AlphaGrid::default()), -1.0, "x").is_err());
        assert!(matches!(
            DecayProblem::example("4.3", AlphaGrid::default()),
            Err(SolverError::UnknownExample(_))
        ));
        let p = isotope();
        assert!(matches!(
            solve_ivp_numeric_at(&decay_rhs(), &p, &SolverConfig::default(), &[0.5, 0.2]),
            Err(SolverError::BadTimes(..))
        ));
    }

    #[test]
    fn blow_up_reports_time_and_level() {
        let sys = EndpointSystem::new(|_, y1, y2, _| (y1 * y1 * 1e10, y2 * y2 * 1e10));
        let err = solve_ivp_numeric(&sys, &isotope(), &SolverConfig::default()).unwrap_err();
        match err {
            SolverError::BlowUp { t, alpha } => {
                assert!(t > 0.0 && t <= 1.0);
                assert_eq!(alpha, 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sampled_integration_matches_dense() {
        let p = isotope();
        let cfg = SolverConfig::default();
        let times = [0.0, 0.25, 0.5, 1.0];
        let sampled = solve_ivp_numeric_at(&decay_rhs(), &p, &cfg, &times).unwrap();
        let exact = solve_decay_analytic(&p, &times);
        assert!(sampled.max_deviation(&exact).unwrap() < 1e-9);
    }

    #[test]
    fn analytic_solutions_pass_all_checks() {
        let times: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        for p in [isotope(), DecayProblem::oxygen(AlphaGrid::default())] {
            let sol = solve_decay_analytic(&p, &times);
            let check = check_solution(&sol, &decay_rhs(), DEFAULT_SLACK);
            assert!(check.report.is_valid(), "{}: {}", p.label(), check.report);
            assert!(check.max_residual <= 1e-12, "{}", check.max_residual);
        }
    }

    #[test]
    fn numeric_solution_passes_all_checks() {
        let sol = solve_ivp_numeric(&decay_rhs(), &isotope(), &SolverConfig::default()).unwrap();
        let report = validate_solution(&sol, &decay_rhs());
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn corrupted_solution_is_caught() {
        let times: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let mut sol = solve_decay_analytic(&isotope(), &times);
        let (lo, hi) = (sol.lower[4].clone(), sol.upper[4].clone());
        sol.lower[4] = hi;
        sol.upper[4] = lo;
        let report = validate_solution(&sol, &decay_rhs());
        assert!(!report.is_valid());
        let ordering: Vec<_> = report
            .violations()
            .iter()
            .filter(|v| v.condition == Condition::Ordering)
            .collect();
        assert!(!ordering.is_empty());
        assert!(ordering.iter().all(|v| v.t == Some(times[4])));
    }

    #[test]
    fn negative_values_are_allowed() {
        // The oxygen example dips below zero at α = 0 for larger t.
        let p = DecayProblem::new(
            FuzzyNumber::triangular(90.0, 100.0, 120.0, AlphaGrid::default()).unwrap(),
            3.0,
            "long",
        )
        .unwrap();
        let sol = solve_decay_analytic(&p, &[3.0]);
        assert!(sol.level(0, 0).lo < 0.0);
        assert!(validate_solution(&sol, &decay_rhs()).is_valid());
    }

    #[test]
    fn support_width_grows_like_exp() {
        let times: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let sol = solve_decay_analytic(&isotope(), &times);
        for (i, &t) in times.iter().enumerate() {
            let w = sol.level(i, 0).width();
            assert!((w - 10.0 * t.exp()).abs() <= 1e-12 * w);
        }
    }

    #[test]
    fn closed_form_endpoints_keep_seikkala_order() {
        // The Seikkala candidate [y1', y2'] = [−y2, −y1] is itself a fuzzy
        // number, so the closed form is S-differentiable as well.
        let grid = AlphaGrid::default();
        let c = FuzzyNumber::triangular(195.0, 200.0, 205.0, grid.clone()).unwrap();
        let (lo, hi) = (c.clone(), c);
        let y = FuzzyFunction::new(
            Domain::new(0.0, 1.0).unwrap(),
            grid,
            move |t, a| {
                let l = lo.level_set(a).unwrap();
                0.5 * (l.lo - l.hi) * t.exp() + 0.5 * (l.lo + l.hi) * (-t).exp()
            },
            move |t, a| {
                let l = hi.level_set(a).unwrap();
                0.5 * (l.lo + l.hi) * (-t).exp() - 0.5 * (l.lo - l.hi) * t.exp()
            },
        )
        .unwrap();
        for t in [0.1, 0.5, 0.9] {
            assert_eq!(classify(&y, t).unwrap(), DerivativeKind::SDifferentiable);
        }
    }
}
