//! Finite-sample correlation estimates.
//!
//! A run of `n` pairs with `m` positive products has correlation exactly
//! `(2m − n)/n`. The fraction is kept unreduced: its denominator is the
//! number of pairs.

use num_integer::Integer;

use crate::runner::{Counts, TrialBatch};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationEstimate {
    /// `2m − n`.
    pub numerator: i64,
    /// `n`.
    pub denominator: u64,
    pub real_value: f64,
    /// Plug-in `sqrt((1 − Ĉ²)/n)`; zero when `|Ĉ| = 1`.
    pub std_error: f64,
}

impl CorrelationEstimate {
    pub fn from_counts(counts: &Counts) -> CorrelationEstimate {
        let n = counts.n();
        assert!(n >= 1, "correlation of an empty tally");
        let numerator = 2 * counts.m() as i64 - n as i64;
        let real_value = numerator as f64 / n as f64;
        let std_error = ((1.0 - real_value * real_value).max(0.0) / n as f64).sqrt();
        CorrelationEstimate {
            numerator,
            denominator: n,
            real_value,
            std_error,
        }
    }

    /// Positive-product count `m = (numerator + n)/2`.
    pub fn plus_count(&self) -> u64 {
        ((self.numerator + self.denominator as i64) / 2) as u64
    }

    /// The same fraction in lowest terms.
    pub fn reduced(&self) -> (i64, u64) {
        let g = self.numerator.unsigned_abs().gcd(&self.denominator);
        (self.numerator / g as i64, self.denominator / g)
    }
}

pub fn correlation_from_counts(batch: &TrialBatch) -> CorrelationEstimate {
    CorrelationEstimate::from_counts(&batch.counts)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshEstimate {
    pub s_value: f64,
    /// `C(a,b), C(a,b′), C(a′,b), C(a′,b′)`.
    pub components: [CorrelationEstimate; 4],
}

impl ChshEstimate {
    /// Standard errors of the four components added in quadrature.
    pub fn combined_sigma(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.std_error * c.std_error)
            .sum::<f64>()
            .sqrt()
    }
}

/// `S = |C(a,b) − C(a,b′)| + |C(a′,b) + C(a′,b′)|`.
pub fn chsh_value(
    e1: CorrelationEstimate,
    e2: CorrelationEstimate,
    e3: CorrelationEstimate,
    e4: CorrelationEstimate,
) -> ChshEstimate {
    let s_value = chsh_combination([e1.real_value, e2.real_value, e3.real_value, e4.real_value]);
    ChshEstimate {
        s_value,
        components: [e1, e2, e3, e4],
    }
}

pub fn chsh_from_batches(batches: &[TrialBatch; 4]) -> ChshEstimate {
    let [e1, e2, e3, e4] = batches.map(|b| correlation_from_counts(&b));
    chsh_value(e1, e2, e3, e4)
}

/// The CHSH combination over raw correlation values.
pub fn chsh_combination(c: [f64; 4]) -> f64 {
    (c[0] - c[1]).abs() + (c[2] + c[3]).abs()
}
