//! Fuzzy-valued functions of a real variable and their Seikkala and
//! generalized Seikkala (gS) derivatives.
//!
//! A [`FuzzyFunction`] is given by its level endpoints `y1(t, α)` and
//! `y2(t, α)`. Both derivative notions differentiate the endpoints in `t`:
//!
//! * the Seikkala derivative keeps the endpoint order, `[y1', y2']`;
//! * the gS derivative reorders pointwise, `[min(y1', y2'), max(y1', y2')]`.
//!
//! Either candidate must then pass the fuzzy-number check on the α grid.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::number::{
    validate_with_slack, AlphaGrid, FuzzyError, FuzzyNumber, ValidityReport, DEFAULT_SLACK,
};

/// Base finite-difference step, scaled by `max(1, |t|)`.
pub const FD_STEP: f64 = 1e-5;

/// Relative agreement required between one-sided difference quotients.
pub const FD_AGREEMENT: f64 = 1e-4;

/// Endpoint evaluator `(t, α) -> value`.
pub type LevelFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalculusError {
    #[error("t = {t} lies outside the domain {domain}")]
    OutsideDomain { t: f64, domain: Domain },
    #[error("evaluator returned a non-finite value at t = {t}, alpha = {alpha}")]
    NonFinite { t: f64, alpha: f64 },
    #[error("{endpoint} endpoint is not differentiable at t = {t}, alpha = {alpha}")]
    NotDifferentiable {
        t: f64,
        alpha: f64,
        endpoint: Endpoint,
    },
    #[error("functions are defined on different domains ({0} and {1})")]
    DomainMismatch(Domain, Domain),
    #[error("functions use different alpha grids")]
    GridMismatch,
    #[error("domain [{0}, {1}] is empty or malformed")]
    BadDomain(f64, f64),
    #[error("built-in families need a nonnegative support, got lower endpoint {0}")]
    NegativeSupport(f64),
    #[error("value at t = {t} is not a fuzzy number: {report}")]
    InvalidValue { t: f64, report: ValidityReport },
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

/// Closed real interval of admissible `t`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    pub start: f64,
    pub end: f64,
}

impl Domain {
    pub fn new(start: f64, end: f64) -> Result<Self, CalculusError> {
        if start.is_nan() || end.is_nan() || start > end {
            return Err(CalculusError::BadDomain(start, end));
        }
        Ok(Self { start, end })
    }

    pub fn real_line() -> Self {
        Self {
            start: f64::NEG_INFINITY,
            end: f64::INFINITY,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t <= self.end
    }

    /// A few finite points used to probe evaluators at construction.
    fn probe_points(&self) -> Vec<f64> {
        match (self.start.is_finite(), self.end.is_finite()) {
            (true, true) => vec![self.start, 0.5 * (self.start + self.end), self.end],
            (true, false) => vec![self.start, self.start + 1.0],
            (false, true) => vec![self.end - 1.0, self.end],
            (false, false) => vec![-1.0, 0.0, 1.0],
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Lower,
    Upper,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::Lower => "lower",
            Endpoint::Upper => "upper",
        })
    }
}

/// A fuzzy-number-valued function `t -> [y1(t, α), y2(t, α)]`.
#[derive(Clone)]
pub struct FuzzyFunction {
    domain: Domain,
    grid: AlphaGrid,
    lower: LevelFn,
    upper: LevelFn,
    rates: Option<(LevelFn, LevelFn)>,
}

impl fmt::Debug for FuzzyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FuzzyFunction")
            .field("domain", &self.domain)
            .field("levels", &self.grid.len())
            .field("analytic_rates", &self.rates.is_some())
            .finish()
    }
}

impl FuzzyFunction {
    /// Wraps endpoint evaluators. Evaluators are probed at a few points of
    /// the domain on every grid level and rejected if they return NaN or ±∞.
    /// Fuzzy-number validity of values is checked where they are used.
    pub fn new<L, U>(domain: Domain, grid: AlphaGrid, lower: L, upper: U) -> Result<Self, CalculusError>
    where
        L: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        U: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        let f = Self {
            domain,
            grid,
            lower: Arc::new(lower),
            upper: Arc::new(upper),
            rates: None,
        };
        f.probe(&f.lower, &f.upper)?;
        Ok(f)
    }

    /// Attaches analytic `t`-derivatives of both endpoints.
    pub fn with_rates<L, U>(mut self, lower_rate: L, upper_rate: U) -> Result<Self, CalculusError>
    where
        L: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        U: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        let rates: (LevelFn, LevelFn) = (Arc::new(lower_rate), Arc::new(upper_rate));
        self.probe(&rates.0, &rates.1)?;
        self.rates = Some(rates);
        Ok(self)
    }

    fn probe(&self, lower: &LevelFn, upper: &LevelFn) -> Result<(), CalculusError> {
        for t in self.domain.probe_points() {
            for &alpha in self.grid.levels() {
                if !lower(t, alpha).is_finite() || !upper(t, alpha).is_finite() {
                    return Err(CalculusError::NonFinite { t, alpha });
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn grid(&self) -> &AlphaGrid {
        &self.grid
    }

    pub fn has_analytic_rates(&self) -> bool {
        self.rates.is_some()
    }

    pub fn eval(&self, t: f64, alpha: f64, which: Endpoint) -> f64 {
        match which {
            Endpoint::Lower => (self.lower)(t, alpha),
            Endpoint::Upper => (self.upper)(t, alpha),
        }
    }

    fn check_domain(&self, t: f64) -> Result<(), CalculusError> {
        if self.domain.contains(t) {
            Ok(())
        } else {
            Err(CalculusError::OutsideDomain {
                t,
                domain: self.domain,
            })
        }
    }

    /// Endpoint grids at `t` without the validity check.
    pub fn endpoints_at(&self, t: f64) -> Result<(Vec<f64>, Vec<f64>), CalculusError> {
        self.check_domain(t)?;
        let mut lower = Vec::with_capacity(self.grid.len());
        let mut upper = Vec::with_capacity(self.grid.len());
        for &alpha in self.grid.levels() {
            let (lo, hi) = ((self.lower)(t, alpha), (self.upper)(t, alpha));
            if !lo.is_finite() || !hi.is_finite() {
                return Err(CalculusError::NonFinite { t, alpha });
            }
            lower.push(lo);
            upper.push(hi);
        }
        Ok((lower, upper))
    }

    /// The fuzzy number `y(t)`; fails if the endpoint grids are not valid.
    pub fn value_at(&self, t: f64) -> Result<FuzzyNumber, CalculusError> {
        let (lower, upper) = self.endpoints_at(t)?;
        FuzzyNumber::new(self.grid.clone(), lower, upper).map_err(|e| match e {
            FuzzyError::Invalid(report) => CalculusError::InvalidValue { t, report },
            other => other.into(),
        })
    }
}

/// `t ↦ a·exp(−t)` on the whole real line.
pub fn exp_decay(a: &FuzzyNumber) -> Result<FuzzyFunction, CalculusError> {
    require_nonnegative(a)?;
    let (lo, hi) = (a.clone(), a.clone());
    let (dlo, dhi) = (a.clone(), a.clone());
    FuzzyFunction::new(
        Domain::real_line(),
        a.grid().clone(),
        move |t, alpha| level(&lo, alpha).0 * (-t).exp(),
        move |t, alpha| level(&hi, alpha).1 * (-t).exp(),
    )?
    .with_rates(
        move |t, alpha| -level(&dlo, alpha).0 * (-t).exp(),
        move |t, alpha| -level(&dhi, alpha).1 * (-t).exp(),
    )
}

/// `t ↦ a·sin(t)` on `[0, π]`.
pub fn sinusoid(a: &FuzzyNumber) -> Result<FuzzyFunction, CalculusError> {
    require_nonnegative(a)?;
    let (lo, hi) = (a.clone(), a.clone());
    let (dlo, dhi) = (a.clone(), a.clone());
    FuzzyFunction::new(
        Domain::new(0.0, std::f64::consts::PI)?,
        a.grid().clone(),
        move |t, alpha| level(&lo, alpha).0 * t.sin(),
        move |t, alpha| level(&hi, alpha).1 * t.sin(),
    )?
    .with_rates(
        move |t, alpha| level(&dlo, alpha).0 * t.cos(),
        move |t, alpha| level(&dhi, alpha).1 * t.cos(),
    )
}

/// `t ↦ a` on the whole real line.
pub fn constant(a: &FuzzyNumber) -> Result<FuzzyFunction, CalculusError> {
    let (lo, hi) = (a.clone(), a.clone());
    FuzzyFunction::new(
        Domain::real_line(),
        a.grid().clone(),
        move |_, alpha| level(&lo, alpha).0,
        move |_, alpha| level(&hi, alpha).1,
    )?
    .with_rates(|_, _| 0.0, |_, _| 0.0)
}

fn level(a: &FuzzyNumber, alpha: f64) -> (f64, f64) {
    match a.level_set(alpha) {
        Ok(l) => (l.lo, l.hi),
        Err(_) => (f64::NAN, f64::NAN),
    }
}

fn require_nonnegative(a: &FuzzyNumber) -> Result<(), CalculusError> {
    let lo = a.support().lo;
    if lo < 0.0 {
        return Err(CalculusError::NegativeSupport(lo));
    }
    Ok(())
}

/// Levelwise sum `f + g`.
pub fn add_functions(f: &FuzzyFunction, g: &FuzzyFunction) -> Result<FuzzyFunction, CalculusError> {
    if f.domain != g.domain {
        return Err(CalculusError::DomainMismatch(f.domain, g.domain));
    }
    if f.grid != g.grid {
        return Err(CalculusError::GridMismatch);
    }
    let sum = |a: &LevelFn, b: &LevelFn| -> LevelFn {
        let (a, b) = (a.clone(), b.clone());
        Arc::new(move |t, alpha| a(t, alpha) + b(t, alpha))
    };
    let rates = match (&f.rates, &g.rates) {
        (Some(fr), Some(gr)) => Some((sum(&fr.0, &gr.0), sum(&fr.1, &gr.1))),
        _ => None,
    };
    Ok(FuzzyFunction {
        domain: f.domain,
        grid: f.grid.clone(),
        lower: sum(&f.lower, &g.lower),
        upper: sum(&f.upper, &g.upper),
        rates,
    })
}

/// Scalar multiple `λ·f`; for `λ < 0` the endpoint evaluators swap roles.
pub fn scale_function(lambda: f64, f: &FuzzyFunction) -> FuzzyFunction {
    let times = |a: &LevelFn| -> LevelFn {
        let a = a.clone();
        Arc::new(move |t, alpha| lambda * a(t, alpha))
    };
    let pair = |lo: &LevelFn, hi: &LevelFn| {
        if lambda >= 0.0 {
            (times(lo), times(hi))
        } else {
            (times(hi), times(lo))
        }
    };
    let (lower, upper) = pair(&f.lower, &f.upper);
    FuzzyFunction {
        domain: f.domain,
        grid: f.grid.clone(),
        lower,
        upper,
        rates: f.rates.as_ref().map(|(lo, hi)| pair(lo, hi)),
    }
}

/// `∂y_i/∂t` at `(t, α)`.
///
/// Uses the analytic rate when one is attached. Otherwise a central
/// difference with step `FD_STEP·max(1, |t|)`, or a one-sided difference
/// when the stencil would leave the domain. The derivative is taken to
/// exist when the one-sided quotients at steps `h`, `h/2`, `h/4` are finite
/// and their limits agree within [`FD_AGREEMENT`] relative. Limits are
/// estimated by Richardson extrapolation `2q(s/2) - q(s)`, which removes the
/// `O(s)` curvature term so smooth but strongly curved endpoints pass.
pub fn endpoint_derivative(
    f: &FuzzyFunction,
    t: f64,
    alpha: f64,
    which: Endpoint,
) -> Result<f64, CalculusError> {
    f.check_domain(t)?;
    if let Some((lo, hi)) = &f.rates {
        let d = match which {
            Endpoint::Lower => lo(t, alpha),
            Endpoint::Upper => hi(t, alpha),
        };
        return if d.is_finite() {
            Ok(d)
        } else {
            Err(CalculusError::NonFinite { t, alpha })
        };
    }

    let eval = |x: f64| -> Result<f64, CalculusError> {
        let v = f.eval(x, alpha, which);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(CalculusError::NonFinite { t: x, alpha })
        }
    };
    let not_differentiable = CalculusError::NotDifferentiable {
        t,
        alpha,
        endpoint: which,
    };

    let h = FD_STEP * t.abs().max(1.0);
    let backward_ok = f.domain.contains(t - h);
    let forward_ok = f.domain.contains(t + h);
    let centre = eval(t)?;
    let steps = [h, h / 2.0, h / 4.0];
    let agree = |a: f64, b: f64| (a - b).abs() <= FD_AGREEMENT * 1f64.max(a.abs()).max(b.abs());
    let all_finite = |q: &[f64]| q.iter().all(|x| x.is_finite());
    let limit = |q: &[f64; 3]| 2.0 * q[2] - q[1];

    match (backward_ok, forward_ok) {
        (true, true) => {
            let mut fwd = [0.0; 3];
            let mut bwd = [0.0; 3];
            for (k, &s) in steps.iter().enumerate() {
                fwd[k] = (eval(t + s)? - centre) / s;
                bwd[k] = (centre - eval(t - s)?) / s;
            }
            if !all_finite(&fwd) || !all_finite(&bwd) || !agree(limit(&fwd), limit(&bwd)) {
                return Err(not_differentiable);
            }
            Ok((eval(t + h)? - eval(t - h)?) / (2.0 * h))
        }
        (false, true) | (true, false) => {
            let sign = if forward_ok { 1.0 } else { -1.0 };
            let mut q = [0.0; 3];
            for (k, &s) in steps.iter().enumerate() {
                q[k] = (eval(t + sign * s)? - centre) / (sign * s);
            }
            // Successive limit estimates must settle; a kink or jump keeps them apart.
            if !all_finite(&q) || !agree(2.0 * q[1] - q[0], limit(&q)) {
                return Err(not_differentiable);
            }
            Ok(q[0])
        }
        (false, false) => Err(not_differentiable),
    }
}

/// Outcome class of a derivative computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DerivativeKind {
    /// `[y1', y2']` is a fuzzy number (hence so is the min/max form).
    SDifferentiable,
    /// Only the reordered `[min, max]` levels form a fuzzy number.
    GsOnly,
    /// Some endpoint derivative does not exist at `t`.
    EndpointsNondifferentiable,
    /// Endpoint derivatives exist but even the min/max levels are not a fuzzy number.
    GsInvalid,
}

impl DerivativeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DerivativeKind::SDifferentiable => "S_DIFFERENTIABLE",
            DerivativeKind::GsOnly => "GS_ONLY",
            DerivativeKind::EndpointsNondifferentiable => "ENDPOINTS_NONDIFFERENTIABLE",
            DerivativeKind::GsInvalid => "GS_INVALID",
        }
    }

    /// True when a gS derivative exists.
    pub fn has_value(&self) -> bool {
        matches!(self, DerivativeKind::SDifferentiable | DerivativeKind::GsOnly)
    }
}

impl fmt::Display for DerivativeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Raw endpoint derivatives `y1'(t, α)`, `y2'(t, α)` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointRates {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl EndpointRates {
    /// Pointwise `[min, max]` reordering.
    pub fn min_max(&self) -> (Vec<f64>, Vec<f64>) {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&a, &b)| (a.min(b), a.max(b)))
            .unzip()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeResult {
    pub kind: DerivativeKind,
    /// Present iff `kind.has_value()`.
    pub value: Option<FuzzyNumber>,
    /// Report for the candidate levels this operation checked.
    pub diagnostics: ValidityReport,
    /// Endpoint derivatives, when they exist.
    pub rates: Option<EndpointRates>,
}

impl DerivativeResult {
    fn nondifferentiable() -> Self {
        Self {
            kind: DerivativeKind::EndpointsNondifferentiable,
            value: None,
            diagnostics: ValidityReport::ok(),
            rates: None,
        }
    }
}

/// Endpoint derivatives on every grid level, or `None` if one does not exist.
pub fn endpoint_rates(f: &FuzzyFunction, t: f64) -> Result<Option<EndpointRates>, CalculusError> {
    let n = f.grid.len();
    let mut rates = EndpointRates {
        lower: Vec::with_capacity(n),
        upper: Vec::with_capacity(n),
    };
    for &alpha in f.grid.levels() {
        for (which, out) in [
            (Endpoint::Lower, &mut rates.lower),
            (Endpoint::Upper, &mut rates.upper),
        ] {
            match endpoint_derivative(f, t, alpha, which) {
                Ok(d) => out.push(d),
                Err(CalculusError::NotDifferentiable { .. }) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Some(rates))
}

/// Seikkala derivative: the levels `[y1'(t, α), y2'(t, α)]` in their
/// original order must form a fuzzy number.
///
/// When they do not, `kind` reports what the gS fallback yields (`GsOnly`
/// with its value, or `GsInvalid`) while `diagnostics` keeps the
/// violations of the Seikkala candidate.
pub fn seikkala_derivative(f: &FuzzyFunction, t: f64) -> Result<DerivativeResult, CalculusError> {
    seikkala_derivative_with_slack(f, t, DEFAULT_SLACK)
}

pub fn seikkala_derivative_with_slack(
    f: &FuzzyFunction,
    t: f64,
    slack: f64,
) -> Result<DerivativeResult, CalculusError> {
    f.check_domain(t)?;
    let Some(rates) = endpoint_rates(f, t)? else {
        return Ok(DerivativeResult::nondifferentiable());
    };
    let report = validate_with_slack(&rates.lower, &rates.upper, &f.grid, slack)?;
    if report.is_valid() {
        let value = FuzzyNumber::from_parts(f.grid.clone(), rates.lower.clone(), rates.upper.clone());
        return Ok(DerivativeResult {
            kind: DerivativeKind::SDifferentiable,
            value: Some(value),
            diagnostics: report,
            rates: Some(rates),
        });
    }
    let (lo, hi) = rates.min_max();
    let gs_valid = validate_with_slack(&lo, &hi, &f.grid, slack)?.is_valid();
    let (kind, value) = if gs_valid {
        let value = FuzzyNumber::from_parts(f.grid.clone(), lo, hi);
        (DerivativeKind::GsOnly, Some(value))
    } else {
        (DerivativeKind::GsInvalid, None)
    };
    Ok(DerivativeResult {
        kind,
        value,
        diagnostics: report,
        rates: Some(rates),
    })
}

/// Generalized Seikkala derivative: the levels
/// `[min(y1', y2'), max(y1', y2')]` must form a fuzzy number.
///
/// `kind` is `SDifferentiable` when the un-reordered levels already pass
/// the fuzzy-number check, `GsOnly` when only the reordered ones do and
/// `GsInvalid` when neither does.
pub fn gs_derivative(f: &FuzzyFunction, t: f64) -> Result<DerivativeResult, CalculusError> {
    gs_derivative_with_slack(f, t, DEFAULT_SLACK)
}

pub fn gs_derivative_with_slack(
    f: &FuzzyFunction,
    t: f64,
    slack: f64,
) -> Result<DerivativeResult, CalculusError> {
    f.check_domain(t)?;
    let Some(rates) = endpoint_rates(f, t)? else {
        return Ok(DerivativeResult::nondifferentiable());
    };
    let (lo, hi) = rates.min_max();
    let report = validate_with_slack(&lo, &hi, &f.grid, slack)?;
    if !report.is_valid() {
        return Ok(DerivativeResult {
            kind: DerivativeKind::GsInvalid,
            value: None,
            diagnostics: report,
            rates: Some(rates),
        });
    }
    let seikkala = validate_with_slack(&rates.lower, &rates.upper, &f.grid, slack)?;
    let kind = if seikkala.is_valid() {
        DerivativeKind::SDifferentiable
    } else {
        DerivativeKind::GsOnly
    };
    Ok(DerivativeResult {
        kind,
        value: Some(FuzzyNumber::from_parts(f.grid.clone(), lo, hi)),
        diagnostics: report,
        rates: Some(rates),
    })
}

/// Strongest applicable derivative class at `t`.
pub fn classify(f: &FuzzyFunction, t: f64) -> Result<DerivativeKind, CalculusError> {
    Ok(gs_derivative(f, t)?.kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::Interval;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, LN_2, PI};

    fn tri(l: f64, m: f64, r: f64) -> FuzzyNumber {
        FuzzyNumber::triangular(l, m, r, AlphaGrid::default()).unwrap()
    }

    fn assert_levels(value: &FuzzyNumber, expect: impl Fn(f64) -> (f64, f64), tol: f64) {
        for (alpha, level) in value.levels() {
            let (lo, hi) = expect(alpha);
            assert!(
                (level.lo - lo).abs() <= tol && (level.hi - hi).abs() <= tol,
                "alpha {alpha}: got {level}, want [{lo}, {hi}]"
            );
        }
    }

    fn square() -> FuzzyFunction {
        FuzzyFunction::new(Domain::real_line(), AlphaGrid::default(), |t, _| t * t, |t, _| t * t)
            .unwrap()
    }

    #[test]
    fn constant_and_crisp_functions() {
        let a = tri(1.0, 2.0, 3.0);
        let c = constant(&a).unwrap();
        for t in [-3.0, 0.0, 7.5] {
            assert_eq!(c.value_at(t).unwrap(), a);
        }
        let sq = square();
        let v = sq.value_at(3.0).unwrap();
        assert!(v.is_crisp());
        assert_eq!(v.core(), Interval::point(9.0));
    }

    #[test]
    fn non_finite_evaluators_rejected() {
        let err = FuzzyFunction::new(
            Domain::real_line(),
            AlphaGrid::default(),
            |t, _| 1.0 / t,
            |_, _| 1.0,
        )
        .unwrap_err();
        assert!(matches!(err, CalculusError::NonFinite { .. }));
    }

    #[test]
    fn exp_decay_values() {
        let g = exp_decay(&tri(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(g.value_at(0.0).unwrap().support(), Interval::new(1.0, 3.0));
        let core = g.value_at(LN_2).unwrap().core();
        assert!((core.lo - 1.0).abs() < 1e-15 && (core.hi - 1.0).abs() < 1e-15);

        let a = tri(195.0, 200.0, 205.0);
        assert_eq!(exp_decay(&a).unwrap().value_at(0.0).unwrap(), a);
        assert_eq!(
            exp_decay(&tri(-1.0, 0.0, 1.0)).unwrap_err(),
            CalculusError::NegativeSupport(-1.0)
        );
    }

    #[test]
    fn sinusoid_values() {
        let h = sinusoid(&tri(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(h.value_at(FRAC_PI_2).unwrap().support(), Interval::new(1.0, 3.0));
        assert!(h.value_at(0.0).unwrap().levels().all(|(_, l)| l == Interval::point(0.0)));
        let core = h.value_at(FRAC_PI_6).unwrap().core();
        assert!((core.lo - 1.0).abs() < 1e-15 && (core.hi - 1.0).abs() < 1e-15);
        assert!(matches!(
            h.value_at(4.0),
            Err(CalculusError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn endpoint_derivative_examples() {
        let g = exp_decay(&tri(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(endpoint_derivative(&g, 0.0, 1.0, Endpoint::Lower).unwrap(), -2.0);

        let c = constant(&tri(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(endpoint_derivative(&c, 4.2, 0.3, Endpoint::Upper).unwrap(), 0.0);

        let h = sinusoid(&tri(1.0, 2.0, 3.0)).unwrap();
        for alpha in [0.0, 0.5, 1.0] {
            let d = endpoint_derivative(&h, FRAC_PI_2, alpha, Endpoint::Lower).unwrap();
            assert!(d.abs() < 1e-15);
        }
    }

    #[test]
    fn finite_differences_detect_kinks_and_boundaries() {
        let grid = AlphaGrid::default();
        let kink = FuzzyFunction::new(Domain::real_line(), grid.clone(), |t, _| -t.abs(), |t, _| t.abs())
            .unwrap();
        assert_eq!(
            endpoint_derivative(&kink, 0.0, 0.5, Endpoint::Upper),
            Err(CalculusError::NotDifferentiable {
                t: 0.0,
                alpha: 0.5,
                endpoint: Endpoint::Upper
            })
        );
        assert_eq!(
            gs_derivative(&kink, 0.0).unwrap().kind,
            DerivativeKind::EndpointsNondifferentiable
        );
        assert!(gs_derivative(&kink, 0.0).unwrap().value.is_none());
        // Away from the kink the endpoints are smooth.
        assert!((endpoint_derivative(&kink, 2.0, 0.5, Endpoint::Upper).unwrap() - 1.0).abs() < 1e-9);

        let jump = FuzzyFunction::new(
            Domain::real_line(),
            grid.clone(),
            |t, _| if t < 1.0 { 0.0 } else { 1.0 },
            |_, _| 2.0,
        )
        .unwrap();
        assert!(endpoint_derivative(&jump, 1.0, 0.0, Endpoint::Lower).is_err());

        // One-sided at the boundary of a closed domain.
        let bounded = FuzzyFunction::new(
            Domain::new(0.0, 1.0).unwrap(),
            grid,
            |t, _| t * t,
            |t, _| t * t + 1.0,
        )
        .unwrap();
        let d0 = endpoint_derivative(&bounded, 0.0, 0.0, Endpoint::Lower).unwrap();
        let d1 = endpoint_derivative(&bounded, 1.0, 0.0, Endpoint::Upper).unwrap();
        assert!(d0.abs() < 1e-4);
        assert!((d1 - 2.0).abs() < 1e-4);
        assert!(matches!(
            endpoint_derivative(&bounded, 1.5, 0.0, Endpoint::Upper),
            Err(CalculusError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn crisp_square_has_classical_derivative() {
        let sq = square();
        let s = seikkala_derivative(&sq, 3.0).unwrap();
        assert_eq!(s.kind, DerivativeKind::SDifferentiable);
        let gs = gs_derivative(&sq, 3.0).unwrap();
        assert_eq!(gs.kind, DerivativeKind::SDifferentiable);
        let v = gs.value.unwrap();
        assert!(v.levels().all(|(_, l)| (l.lo - 6.0).abs() < 1e-8 && l.lo == l.hi));
    }

    #[test]
    fn exp_decay_is_not_seikkala_differentiable() {
        let a = tri(1.0, 2.0, 3.0);
        let g = exp_decay(&a).unwrap();
        for t in [0.0, 0.7, 2.0] {
            let s = seikkala_derivative(&g, t).unwrap();
            assert_eq!(s.kind, DerivativeKind::GsOnly);
            assert!(s.diagnostics.count(crate::number::Condition::MonotoneLower) > 0);

            let gs = gs_derivative(&g, t).unwrap();
            assert_eq!(gs.kind, DerivativeKind::GsOnly);
            let e = (-t).exp();
            let value = gs.value.unwrap();
            assert_levels(
                &value,
                |alpha| {
                    let l = a.level_set(alpha).unwrap();
                    (-l.hi * e, -l.lo * e)
                },
                1e-14,
            );
            // Derivative is −a·exp(−t) as a fuzzy number.
            assert!(value.distance(&a.scale(-e)).unwrap() < 1e-14);
        }
    }

    #[test]
    fn sinusoid_switches_past_half_pi() {
        let a = tri(1.0, 2.0, 3.0);
        let h = sinusoid(&a).unwrap();
        let t = 3.0 * PI / 4.0;
        let s = seikkala_derivative(&h, t).unwrap();
        assert!(!s.diagnostics.is_valid());
        let gs = gs_derivative(&h, t).unwrap();
        assert_eq!(gs.kind, DerivativeKind::GsOnly);
        assert_levels(
            &gs.value.unwrap(),
            |alpha| {
                let l = a.level_set(alpha).unwrap();
                (l.hi * t.cos(), l.lo * t.cos())
            },
            1e-14,
        );

        assert_eq!(classify(&h, FRAC_PI_4).unwrap(), DerivativeKind::SDifferentiable);
        // At the switch both endpoint derivatives vanish.
        assert_eq!(classify(&h, FRAC_PI_2).unwrap(), DerivativeKind::SDifferentiable);
    }

    #[test]
    fn sinusoid_classification_by_brute_force() {
        // Oracle: check the level-set conditions directly on a[i]·cos t.
        let a = tri(1.0, 2.0, 3.0);
        let h = sinusoid(&a).unwrap();
        let t = FRAC_PI_4;
        let (c, lo, hi) = (t.cos(), a.lower(), a.upper());
        let mut ok = true;
        for i in 0..lo.len() {
            ok &= lo[i] * c <= hi[i] * c;
            if i > 0 {
                ok &= lo[i] * c >= lo[i - 1] * c && hi[i] * c <= hi[i - 1] * c;
            }
        }
        assert!(ok);
        assert_eq!(classify(&h, t).unwrap(), DerivativeKind::SDifferentiable);
    }

    #[test]
    fn constant_function_has_zero_derivative() {
        let c = constant(&tri(1.0, 2.0, 3.0)).unwrap();
        let gs = gs_derivative(&c, 1.0).unwrap();
        assert_eq!(gs.kind, DerivativeKind::SDifferentiable);
        assert!(gs.value.unwrap().levels().all(|(_, l)| l == Interval::point(0.0)));
    }

    #[test]
    fn gs_invalid_is_reported() {
        // y1' and y2' both increase in α: no reordering yields a fuzzy number.
        let f = FuzzyFunction::new(
            Domain::real_line(),
            AlphaGrid::default(),
            |t, alpha| alpha * t,
            |t, alpha| 5.0 + 2.0 * alpha * t,
        )
        .unwrap();
        let gs = gs_derivative(&f, 1.0).unwrap();
        assert_eq!(gs.kind, DerivativeKind::GsInvalid);
        assert!(gs.value.is_none());
        assert!(!gs.diagnostics.is_valid());
        assert_eq!(seikkala_derivative(&f, 1.0).unwrap().kind, DerivativeKind::GsInvalid);
    }

    #[test]
    fn combinations() {
        let a = tri(1.0, 2.0, 3.0);
        let b = tri(0.5, 1.0, 4.0);
        let f = exp_decay(&a).unwrap();
        let zero = constant(&FuzzyNumber::crisp(0.0, AlphaGrid::default())).unwrap();
        let sum = add_functions(&f, &zero).unwrap();
        for t in [-1.0, 0.0, 2.5] {
            assert_eq!(sum.value_at(t).unwrap(), f.value_at(t).unwrap());
        }

        let neg = scale_function(-1.0, &f);
        assert_eq!(neg.value_at(0.0).unwrap(), a.neg());

        let fg = add_functions(&f, &exp_decay(&b).unwrap()).unwrap();
        assert_eq!(fg.value_at(0.0).unwrap(), a.add(&b).unwrap());

        let h = sinusoid(&a).unwrap();
        assert!(matches!(
            add_functions(&f, &h),
            Err(CalculusError::DomainMismatch(..))
        ));
    }

    #[test]
    fn mixed_orientation_sum_can_fail_gs() {
        // a·exp(−t) restricted to [0, π] plus b·sin t: the first reverses
        // endpoint order, the second keeps it, and the sum's endpoint
        // derivatives both increase in α.
        let a = tri(0.0, 1.0, 100.0);
        let b = tri(0.0, 10.0, 11.0);
        let (la, ua) = (a.clone(), a.clone());
        let f = FuzzyFunction::new(
            Domain::new(0.0, PI).unwrap(),
            a.grid().clone(),
            move |t, alpha| la.level_set(alpha).unwrap().lo * (-t).exp(),
            move |t, alpha| ua.level_set(alpha).unwrap().hi * (-t).exp(),
        )
        .unwrap();
        let g = sinusoid(&b).unwrap();
        let t = FRAC_PI_4;
        assert_eq!(classify(&f, t).unwrap(), DerivativeKind::GsOnly);
        assert_eq!(classify(&g, t).unwrap(), DerivativeKind::SDifferentiable);
        let sum = add_functions(&f, &g).unwrap();
        assert_eq!(classify(&sum, t).unwrap(), DerivativeKind::GsInvalid);
    }
}
