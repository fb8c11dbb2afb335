//! How far a finite run is from matching the quantum correlation exactly.
//!
//! Setting `(2m − n)/n = −cos Δ` forces `m/n = sin²(Δ/2)`. Since `m` is an
//! integer, the target `n·sin²(Δ/2)` generally is not attainable; the
//! distance to the nearest integer is the quantization gap reported here.

use std::fmt;

use crate::angle::fold_difference;
use crate::error::{Error, Result};
use crate::quantum::required_plus_fraction;

/// `|n·x − round(n·x)|` at or below this counts as exactly attainable.
pub const EXACTNESS_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RationalityReport {
    /// `|Δ|` reduced to `[0, π]`, radians.
    pub delta: f64,
    pub n: u64,
    /// `sin²(Δ/2)`.
    pub target_fraction: f64,
    /// `n·x`.
    pub real_count: f64,
    pub nearest_m: u64,
    pub gap: f64,
    /// `gap / nearest_m`; absent when `nearest_m = 0`.
    pub relative_error: Option<f64>,
    /// `sqrt(n·x·(1 − x))`.
    pub binomial_sigma: f64,
    pub exact: bool,
}

/// Nearest integer to a nonnegative real, ties to even.
pub fn nearest_integer(real: f64) -> u64 {
    real.round_ties_even() as u64
}

pub fn rationality_report(delta: f64, n: u64) -> Result<RationalityReport> {
    if n == 0 {
        return Err(Error::ZeroPairs);
    }
    if !delta.is_finite() {
        return Err(Error::NonFiniteAngle(delta));
    }
    let delta = fold_difference(delta);
    let x = required_plus_fraction(delta);
    let real_count = n as f64 * x;
    let nearest_m = nearest_integer(real_count).min(n);
    let gap = (real_count - nearest_m as f64).abs();
    let relative_error = (nearest_m >= 1).then(|| gap / nearest_m as f64);
    let binomial_sigma = (n as f64 * x * (1.0 - x)).max(0.0).sqrt();
    Ok(RationalityReport {
        delta,
        n,
        target_fraction: x,
        real_count,
        nearest_m,
        gap,
        relative_error,
        binomial_sigma,
        exact: gap <= EXACTNESS_TOL,
    })
}

/// `Some(m)` when `n·sin²(Δ/2)` is an integer `m` within [`EXACTNESS_TOL`].
pub fn exact_representability(delta: f64, n: u64) -> Result<Option<u64>> {
    let report = rationality_report(delta, n)?;
    Ok(report.exact.then_some(report.nearest_m))
}

/// One report per `(Δ, n)`, Δ-major.
pub fn sweep_reports(deltas: &[f64], ns: &[u64]) -> Result<Vec<RationalityReport>> {
    if deltas.is_empty() {
        return Err(Error::EmptyGrid("delta"));
    }
    if ns.is_empty() {
        return Err(Error::EmptyGrid("n"));
    }
    deltas
        .iter()
        .flat_map(|&d| ns.iter().map(move |&n| rationality_report(d, n)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignificanceLabel {
    BelowNoise,
    Comparable,
    AboveNoise,
    Degenerate,
}

impl SignificanceLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SignificanceLabel::BelowNoise => "below-noise",
            SignificanceLabel::Comparable => "comparable",
            SignificanceLabel::AboveNoise => "above-noise",
            SignificanceLabel::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for SignificanceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The quantization gap measured in units of binomial sampling noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Significance {
    pub ratio: Option<f64>,
    pub label: SignificanceLabel,
}

pub fn significance_compare(report: &RationalityReport) -> Significance {
    if report.binomial_sigma == 0.0 {
        return Significance { ratio: None, label: SignificanceLabel::Degenerate };
    }
    let ratio = report.gap / report.binomial_sigma;
    let label = if ratio < 1.0 {
        SignificanceLabel::BelowNoise
    } else if ratio < 3.0 {
        SignificanceLabel::Comparable
    } else {
        SignificanceLabel::AboveNoise
    };
    Significance { ratio: Some(ratio), label }
}
