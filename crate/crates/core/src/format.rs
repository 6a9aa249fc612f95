//! Locale-independent number formatting and band CSV files.

use std::fmt::Write as _;

use thiserror::Error;

use crate::fivp::{IvpSolution, Provenance};
use crate::number::{AlphaGrid, FuzzyError};

pub const BAND_HEADER: &str = "t,alpha,y1,y2";

/// 9 significant digits, trailing zeros dropped. Lowercase scientific
/// notation for `|x| < 1e-3` or `|x| >= 1e7`, fixed otherwise.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    // Round first so the exponent reflects the printed mantissa.
    let sci = format!("{x:.8e}");
    let (mantissa, exponent) = sci.split_once('e').expect("exponent present");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if !(-3..7).contains(&exponent) {
        return format!("{}e{}", trim_zeros(mantissa), exponent);
    }
    let decimals = (8 - exponent).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Band CSV with header `t,alpha,y1,y2`, rows ordered by `(t, alpha)`.
pub fn band_csv(sol: &IvpSolution) -> String {
    let mut out = String::with_capacity(sol.len() * sol.grid.len() * 40);
    out.push_str(BAND_HEADER);
    out.push('\n');
    for (i, &t) in sol.times.iter().enumerate() {
        for (j, &alpha) in sol.grid.levels().iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_sig9(t),
                fmt_sig9(alpha),
                fmt_sig9(sol.lower[i][j]),
                fmt_sig9(sol.upper[i][j])
            );
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CsvError {
    #[error("expected header {expected:?}, found {found:?}")]
    Header { expected: String, found: String },
    #[error("line {line}: {message}")]
    Row { line: usize, message: String },
    #[error("rows do not form a complete (t, alpha) grid")]
    Ragged,
    #[error(transparent)]
    Grid(#[from] FuzzyError),
}

/// Parses a band CSV written by [`band_csv`].
pub fn parse_band_csv(text: &str, slack: f64) -> Result<IvpSolution, CsvError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let header = lines.next().map(|(_, l)| l.trim()).unwrap_or_default();
    if header != BAND_HEADER {
        return Err(CsvError::Header {
            expected: BAND_HEADER.into(),
            found: header.into(),
        });
    }

    let mut times: Vec<f64> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut lower: Vec<Vec<f64>> = Vec::new();
    let mut upper: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in lines {
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CsvError::Row {
                line: idx + 1,
                message: e.to_string(),
            })?;
        let [t, alpha, y1, y2] = fields[..] else {
            return Err(CsvError::Row {
                line: idx + 1,
                message: format!("expected 4 fields, found {}", fields.len()),
            });
        };
        if times.last() != Some(&t) {
            times.push(t);
            lower.push(Vec::new());
            upper.push(Vec::new());
        }
        let row = times.len() - 1;
        if row == 0 {
            alphas.push(alpha);
        } else if alphas.get(lower[row].len()) != Some(&alpha) {
            return Err(CsvError::Ragged);
        }
        lower[row].push(y1);
        upper[row].push(y2);
    }
    if times.is_empty() || lower.iter().any(|r| r.len() != alphas.len()) {
        return Err(CsvError::Ragged);
    }
    let grid = AlphaGrid::from_levels(alphas)?;
    IvpSolution::from_band(times, grid, lower, upper, Provenance::Numeric, slack).map_err(|_| CsvError::Ragged)
}
