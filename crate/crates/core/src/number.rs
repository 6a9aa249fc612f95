//! Fuzzy numbers stored as endpoint grids over a finite set of α levels.
//!
//! A fuzzy number is represented by its pair of level-endpoint functions
//! `(a1(α), a2(α))`, sampled on an [`AlphaGrid`]. Between grid levels both
//! endpoints are interpolated linearly, which is exact for triangular and
//! trapezoidal numbers.
//!
//! Validity is checked on the grid only: `a1` nondecreasing, `a2`
//! nonincreasing and `a1 <= a2` at every level, each with an absolute
//! slack ([`DEFAULT_SLACK`]). Left/right continuity in α cannot be decided
//! from samples and is not checked.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack for monotonicity and ordering checks.
pub const DEFAULT_SLACK: f64 = 1e-9;

/// Number of α levels in the default uniform grid (0, 0.1, ..., 1).
pub const DEFAULT_LEVELS: usize = 11;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("alpha grid needs at least 2 levels, got {0}")]
    GridTooShort(usize),
    #[error("alpha grid must increase strictly from 0 to 1")]
    GridShape,
    #[error("alpha {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("shape parameters {0:?} are not in nondecreasing order")]
    ShapeOrdering(Vec<f64>),
    #[error("endpoint lists have {lower} and {upper} entries for {levels} alpha levels")]
    LengthMismatch {
        levels: usize,
        lower: usize,
        upper: usize,
    },
    #[error("operands are defined on different alpha grids")]
    GridMismatch,
    #[error("not a fuzzy number: {0}")]
    Invalid(ValidityReport),
}

/// Strictly increasing α levels, starting at 0 and ending at 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaGrid {
    levels: Vec<f64>,
}

impl AlphaGrid {
    /// `count` equally spaced levels; 0 and 1 are hit exactly.
    pub fn uniform(count: usize) -> Result<Self, FuzzyError> {
        if count < 2 {
            return Err(FuzzyError::GridTooShort(count));
        }
        let last = (count - 1) as f64;
        let levels = (0..count).map(|i| i as f64 / last).collect();
        Ok(Self { levels })
    }

    pub fn from_levels(levels: Vec<f64>) -> Result<Self, FuzzyError> {
        if levels.len() < 2 {
            return Err(FuzzyError::GridTooShort(levels.len()));
        }
        let increasing = levels.windows(2).all(|w| w[0] < w[1]);
        if levels[0] != 0.0 || levels[levels.len() - 1] != 1.0 || !increasing {
            return Err(FuzzyError::GridShape);
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Index `i` of the bracket `[levels[i], levels[i + 1]]` containing `alpha`,
    /// plus the interpolation weight of the upper end.
    fn bracket(&self, alpha: f64) -> Result<(usize, f64), FuzzyError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(FuzzyError::AlphaOutOfRange(alpha));
        }
        let n = self.levels.len();
        let upper = self.levels.partition_point(|&a| a <= alpha).clamp(1, n - 1);
        let i = upper - 1;
        let (a0, a1) = (self.levels[i], self.levels[i + 1]);
        Ok((i, (alpha - a0) / (a1 - a0)))
    }
}

impl Default for AlphaGrid {
    fn default() -> Self {
        Self::uniform(DEFAULT_LEVELS).expect("default grid has more than one level")
    }
}

/// A closed real interval; one α-level set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Which representation condition a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `a1` decreases between two consecutive levels.
    MonotoneLower,
    /// `a2` increases between two consecutive levels.
    MonotoneUpper,
    /// `a1 > a2` at a level.
    Ordering,
    /// An endpoint is NaN or infinite.
    NonFinite,
    /// A higher level is not contained in a lower one.
    Nested,
    /// Lower endpoint derivative disagrees with the right-hand side.
    ResidualLower,
    /// Upper endpoint derivative disagrees with the right-hand side.
    ResidualUpper,
    /// Min/max derivative levels do not form a fuzzy number.
    GsDerivative,
    /// Min/max derivative levels differ from the right-hand side levels.
    GsMismatch,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Condition::MonotoneLower => "monotone_lower",
            Condition::MonotoneUpper => "monotone_upper",
            Condition::Ordering => "ordering",
            Condition::NonFinite => "non_finite",
            Condition::Nested => "nested",
            Condition::ResidualLower => "residual_lower",
            Condition::ResidualUpper => "residual_upper",
            Condition::GsDerivative => "gs_derivative",
            Condition::GsMismatch => "gs_mismatch",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    pub alpha: f64,
    /// Time of the offending sample when checking a solution band.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub magnitude: f64,
}

impl Violation {
    pub fn new(condition: Condition, alpha: f64, magnitude: f64) -> Self {
        Self {
            condition,
            alpha,
            t: None,
            magnitude,
        }
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.t {
            Some(t) => write!(
                f,
                "{} at t={} alpha={} (magnitude {:e})",
                self.condition, t, self.alpha, self.magnitude
            ),
            None => write!(
                f,
                "{} at alpha={} (magnitude {:e})",
                self.condition, self.alpha, self.magnitude
            ),
        }
    }
}

/// Outcome of a validity check. `valid` holds iff there are no violations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    valid: bool,
    violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            valid: violations.is_empty(),
            violations,
        }
    }

    pub fn ok() -> Self {
        Self::from_violations(Vec::new())
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn count(&self, condition: Condition) -> usize {
        self.violations
            .iter()
            .filter(|v| v.condition == condition)
            .count()
    }

    pub fn merge(&mut self, other: ValidityReport) {
        self.violations.extend(other.violations);
        self.valid = self.violations.is_empty();
    }

    pub fn tag_time(mut self, t: f64) -> Self {
        for v in &mut self.violations {
            v.t = Some(t);
        }
        self
    }
}

impl Default for ValidityReport {
    fn default() -> Self {
        Self::ok()
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.violations.first() {
            None => f.write_str("valid"),
            Some(first) => write!(
                f,
                "{} violation(s), first: {}",
                self.violations.len(),
                first
            ),
        }
    }
}

/// Checks the discretized representation conditions with [`DEFAULT_SLACK`].
pub fn validate(
    lower: &[f64],
    upper: &[f64],
    grid: &AlphaGrid,
) -> Result<ValidityReport, FuzzyError> {
    validate_with_slack(lower, upper, grid, DEFAULT_SLACK)
}

pub fn validate_with_slack(
    lower: &[f64],
    upper: &[f64],
    grid: &AlphaGrid,
    slack: f64,
) -> Result<ValidityReport, FuzzyError> {
    let n = grid.len();
    if lower.len() != n || upper.len() != n {
        return Err(FuzzyError::LengthMismatch {
            levels: n,
            lower: lower.len(),
            upper: upper.len(),
        });
    }
    let alphas = grid.levels();
    let mut violations = Vec::new();
    for i in 0..n {
        let (lo, hi) = (lower[i], upper[i]);
        if !lo.is_finite() || !hi.is_finite() {
            violations.push(Violation::new(Condition::NonFinite, alphas[i], f64::INFINITY));
            continue;
        }
        if i > 0 && lower[i - 1].is_finite() && lo < lower[i - 1] - slack {
            violations.push(Violation::new(
                Condition::MonotoneLower,
                alphas[i],
                lower[i - 1] - lo,
            ));
        }
        if i > 0 && upper[i - 1].is_finite() && hi > upper[i - 1] + slack {
            violations.push(Violation::new(
                Condition::MonotoneUpper,
                alphas[i],
                hi - upper[i - 1],
            ));
        }
        if lo > hi + slack {
            violations.push(Violation::new(Condition::Ordering, alphas[i], lo - hi));
        }
    }
    Ok(ValidityReport::from_violations(violations))
}

/// Pairwise containment check: the level at `alphas[j]` must lie inside the
/// level at `alphas[i]` for every `i < j`.
pub fn check_nested(
    lower: &[f64],
    upper: &[f64],
    grid: &AlphaGrid,
    slack: f64,
) -> ValidityReport {
    let alphas = grid.levels();
    let mut violations = Vec::new();
    for j in 1..lower.len() {
        let mut worst = 0.0_f64;
        for i in 0..j {
            let excess = (lower[i] - lower[j]).max(upper[j] - upper[i]);
            worst = worst.max(excess);
        }
        if worst > slack {
            violations.push(Violation::new(Condition::Nested, alphas[j], worst));
        }
    }
    ValidityReport::from_violations(violations)
}

/// A fuzzy number as endpoint grids `a1(α)`, `a2(α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyNumber {
    grid: AlphaGrid,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl FuzzyNumber {
    /// Builds a fuzzy number, rejecting endpoint grids that fail [`validate`].
    pub fn new(grid: AlphaGrid, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, FuzzyError> {
        Self::with_slack(grid, lower, upper, DEFAULT_SLACK)
    }

    pub fn with_slack(
        grid: AlphaGrid,
        lower: Vec<f64>,
        upper: Vec<f64>,
        slack: f64,
    ) -> Result<Self, FuzzyError> {
        let report = validate_with_slack(&lower, &upper, &grid, slack)?;
        if !report.is_valid() {
            return Err(FuzzyError::Invalid(report));
        }
        Ok(Self { grid, lower, upper })
    }

    /// Skips validation; callers guarantee the representation conditions.
    pub(crate) fn from_parts(grid: AlphaGrid, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len(), lower.len());
        debug_assert_eq!(grid.len(), upper.len());
        Self { grid, lower, upper }
    }

    pub fn crisp(value: f64, grid: AlphaGrid) -> Self {
        let n = grid.len();
        Self::from_parts(grid, vec![value; n], vec![value; n])
    }

    /// Triangular number `(l, m, r)`: support `[l, r]`, core `{m}`.
    pub fn triangular(l: f64, m: f64, r: f64, grid: AlphaGrid) -> Result<Self, FuzzyError> {
        Self::trapezoidal(l, m, m, r, grid)
    }

    /// Trapezoidal number `(l, m1, m2, r)`: support `[l, r]`, core `[m1, m2]`.
    pub fn trapezoidal(
        l: f64,
        m1: f64,
        m2: f64,
        r: f64,
        grid: AlphaGrid,
    ) -> Result<Self, FuzzyError> {
        let params = [l, m1, m2, r];
        if params.iter().any(|p| !p.is_finite()) || !(l <= m1 && m1 <= m2 && m2 <= r) {
            return Err(FuzzyError::ShapeOrdering(params.to_vec()));
        }
        // (1 - α)·x + α·y reproduces both ends exactly at α = 0 and α = 1.
        let lower = grid.levels().iter().map(|&a| (1.0 - a) * l + a * m1).collect();
        let upper = grid.levels().iter().map(|&a| (1.0 - a) * r + a * m2).collect();
        Ok(Self::from_parts(grid, lower, upper))
    }

    pub fn grid(&self) -> &AlphaGrid {
        &self.grid
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Stored level at grid index `i`.
    pub fn level(&self, i: usize) -> Interval {
        Interval::new(self.lower[i], self.upper[i])
    }

    /// `(α, level set)` for every grid level.
    pub fn levels(&self) -> impl Iterator<Item = (f64, Interval)> + '_ {
        self.grid
            .levels()
            .iter()
            .enumerate()
            .map(move |(i, &a)| (a, self.level(i)))
    }

    /// Level set at an arbitrary α, interpolating linearly between grid levels.
    pub fn level_set(&self, alpha: f64) -> Result<Interval, FuzzyError> {
        let (i, w) = self.grid.bracket(alpha)?;
        if w == 0.0 {
            return Ok(self.level(i));
        }
        if w == 1.0 {
            return Ok(self.level(i + 1));
        }
        let lerp = |v: &[f64]| (1.0 - w) * v[i] + w * v[i + 1];
        Ok(Interval::new(lerp(&self.lower), lerp(&self.upper)))
    }

    pub fn support(&self) -> Interval {
        self.level(0)
    }

    pub fn core(&self) -> Interval {
        self.level(self.grid.len() - 1)
    }

    pub fn is_crisp(&self) -> bool {
        self.lower.iter().zip(&self.upper).all(|(l, u)| l == u)
            && self.lower.windows(2).all(|w| w[0] == w[1])
    }

    /// Levelwise sum: `(a + b)_α = [a1 + b1, a2 + b2]`.
    pub fn add(&self, other: &FuzzyNumber) -> Result<FuzzyNumber, FuzzyError> {
        if self.grid != other.grid {
            return Err(FuzzyError::GridMismatch);
        }
        let lower = self.lower.iter().zip(&other.lower).map(|(a, b)| a + b).collect();
        let upper = self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(self.grid.clone(), lower, upper))
    }

    /// Scalar multiple; a negative factor swaps the endpoint roles.
    pub fn scale(&self, lambda: f64) -> FuzzyNumber {
        let times = |v: &[f64]| v.iter().map(|x| lambda * x).collect::<Vec<_>>();
        let (lower, upper) = if lambda >= 0.0 {
            (times(&self.lower), times(&self.upper))
        } else {
            (times(&self.upper), times(&self.lower))
        };
        Self::from_parts(self.grid.clone(), lower, upper)
    }

    pub fn neg(&self) -> FuzzyNumber {
        self.scale(-1.0)
    }

    /// Membership grade of `x`: the largest α whose level set contains `x`,
    /// interpolated linearly between adjacent grid levels.
    pub fn membership(&self, x: f64) -> f64 {
        // Levels are nested, so the levels containing x form a prefix.
        let n = self.grid.len();
        let inside = (0..n)
            .take_while(|&i| self.lower[i] <= x && x <= self.upper[i])
            .count();
        if inside == 0 {
            return 0.0;
        }
        let k = inside - 1;
        if k == n - 1 {
            return 1.0;
        }
        let alphas = self.grid.levels();
        let span = alphas[k + 1] - alphas[k];
        let frac = if x < self.lower[k + 1] {
            (x - self.lower[k]) / (self.lower[k + 1] - self.lower[k])
        } else {
            (self.upper[k] - x) / (self.upper[k] - self.upper[k + 1])
        };
        alphas[k] + frac.clamp(0.0, 1.0) * span
    }

    /// Supremum over grid levels of the Hausdorff distance between level sets.
    pub fn distance(&self, other: &FuzzyNumber) -> Result<f64, FuzzyError> {
        if self.grid != other.grid {
            return Err(FuzzyError::GridMismatch);
        }
        let d = self
            .lower
            .iter()
            .zip(&other.lower)
            .chain(self.upper.iter().zip(&other.upper))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        Ok(d)
    }

    /// Re-samples onto another grid by interpolating the stored endpoints.
    pub fn resample(&self, grid: &AlphaGrid) -> FuzzyNumber {
        if grid == &self.grid {
            return self.clone();
        }
        let (lower, upper) = grid
            .levels()
            .iter()
            .map(|&a| {
                let level = self.level_set(a).expect("grid levels lie in [0, 1]");
                (level.lo, level.hi)
            })
            .unzip();
        Self::from_parts(grid.clone(), lower, upper)
    }
}

impl fmt::Display for FuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fuzzy(support {}, core {})", self.support(), self.core())
    }
}

/// JSON forms of a fuzzy number.
///
/// Either the explicit grid form `{"grid": [...], "lower": [...], "upper": [...]}`
/// or one of the shorthands `{"triangular": [l, m, r]}` and
/// `{"trapezoidal": [l, m1, m2, r]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FuzzyNumberDoc {
    Triangular {
        triangular: [f64; 3],
    },
    Trapezoidal {
        trapezoidal: [f64; 4],
    },
    Grid {
        grid: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
}

impl FuzzyNumberDoc {
    /// Builds the number. Shorthand forms use a uniform grid with
    /// `levels` levels; the grid form keeps its own grid.
    pub fn to_number(&self, levels: usize) -> Result<FuzzyNumber, FuzzyError> {
        self.to_number_with_slack(levels, DEFAULT_SLACK)
    }

    pub fn to_number_with_slack(
        &self,
        levels: usize,
        slack: f64,
    ) -> Result<FuzzyNumber, FuzzyError> {
        match self {
            Self::Triangular { triangular: [l, m, r] } => {
                FuzzyNumber::triangular(*l, *m, *r, AlphaGrid::uniform(levels)?)
            }
            Self::Trapezoidal {
                trapezoidal: [l, m1, m2, r],
            } => FuzzyNumber::trapezoidal(*l, *m1, *m2, *r, AlphaGrid::uniform(levels)?),
            Self::Grid { grid, lower, upper } => FuzzyNumber::with_slack(
                AlphaGrid::from_levels(grid.clone())?,
                lower.clone(),
                upper.clone(),
                slack,
            ),
        }
    }

    /// Validity report for the document without rejecting invalid grids.
    /// Shorthand shape errors and malformed grids are returned as errors.
    pub fn report(&self, levels: usize, slack: f64) -> Result<ValidityReport, FuzzyError> {
        match self {
            Self::Grid { grid, lower, upper } => {
                let grid = AlphaGrid::from_levels(grid.clone())?;
                validate_with_slack(lower, upper, &grid, slack)
            }
            _ => {
                let number = self.to_number_with_slack(levels, slack)?;
                validate_with_slack(number.lower(), number.upper(), number.grid(), slack)
            }
        }
    }
}

impl From<&FuzzyNumber> for FuzzyNumberDoc {
    fn from(a: &FuzzyNumber) -> Self {
        Self::Grid {
            grid: a.grid.levels().to_vec(),
            lower: a.lower.clone(),
            upper: a.upper.clone(),
        }
    }
}
