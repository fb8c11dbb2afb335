//! Closed-form singlet-state predictions.
//!
//! For analyzers at `θ_A`, `θ_B` with `Δ = θ_A − θ_B` the singlet correlation
//! is `−cos Δ`. Both marginals are unbiased, which pins the joint
//! distribution to
//!
//! ```text
//! P(++) = P(−−) = sin²(Δ/2) / 2
//! P(+−) = P(−+) = cos²(Δ/2) / 2
//! ```
//!
//! and the fraction of pairs whose product is `+1` to `sin²(Δ/2)`.

use crate::angle::DetectorSettings;

/// Quantum correlation `−cos(θ_A − θ_B)`.
pub fn qm_correlation(settings: &DetectorSettings) -> f64 {
    -settings.delta().cos()
}

/// Probabilities of the four joint outcomes `(r_A, r_B)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointDistribution {
    pub p_pp: f64,
    pub p_pm: f64,
    pub p_mp: f64,
    pub p_mm: f64,
}

impl JointDistribution {
    /// `E[r_A r_B] = P(++) − P(+−) − P(−+) + P(−−)`.
    pub fn expectation(&self) -> f64 {
        self.p_pp - self.p_pm - self.p_mp + self.p_mm
    }

    pub fn total(&self) -> f64 {
        self.p_pp + self.p_pm + self.p_mp + self.p_mm
    }

    pub fn marginal_a_plus(&self) -> f64 {
        self.p_pp + self.p_pm
    }

    pub fn marginal_b_plus(&self) -> f64 {
        self.p_pp + self.p_mp
    }

    /// Cumulative thresholds in the order `++, +−, −+` (the `−−` cell takes
    /// the remainder).
    pub(crate) fn cumulative(&self) -> [f64; 3] {
        let c0 = self.p_pp;
        let c1 = c0 + self.p_pm;
        let c2 = c1 + self.p_mp;
        [c0, c1, c2]
    }
}

pub fn joint_distribution(settings: &DetectorSettings) -> JointDistribution {
    let half = settings.delta() / 2.0;
    let same = 0.5 * half.sin().powi(2);
    let opposite = 0.5 * half.cos().powi(2);
    JointDistribution {
        p_pp: same,
        p_pm: opposite,
        p_mp: opposite,
        p_mm: same,
    }
}

/// Fraction `sin²(Δ/2)` of pairs that must show product `+1` for a finite
/// run to match the quantum correlation. `delta` is in radians.
pub fn required_plus_fraction(delta: f64) -> f64 {
    (delta / 2.0).sin().powi(2)
}
