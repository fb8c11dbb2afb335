//! Outcome-generating models for a single particle pair.
//!
//! All three models share [`sample_pair`]. The two nonlocal kinds let both
//! outcomes depend on the pair of settings; the local kind computes each side
//! from its own angle and a shared hidden phase only (see [`LocalLinear`]).

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::angle::{Angle, DetectorSettings};
use crate::error::{Error, Result};
use crate::quantum::{joint_distribution, qm_correlation};

/// A dichotomic measurement result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    #[inline]
    pub fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    #[inline]
    pub fn flipped(self) -> Outcome {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }

    /// Sign of `x`, with `sign(0) = +1`.
    #[inline]
    pub fn sign_of(x: f64) -> Outcome {
        if x >= 0.0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }
}

/// Outcomes recorded at detectors A and B for one pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairResult {
    pub r_a: Outcome,
    pub r_b: Outcome,
}

impl PairResult {
    #[inline]
    pub fn product(&self) -> i8 {
        self.r_a.value() * self.r_b.value()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// Draws from the singlet joint distribution.
    QuantumSinglet,
    /// `r_a` uniform, `r_b = −r_a` with probability `cos²(Δ/2)`.
    NonlocalSingletStochastic,
    /// Shared uniform phase `λ`, `r_a = sign cos(θ_A − λ)`,
    /// `r_b = −sign cos(θ_B − λ)`.
    LocalLinearDeterministic,
}

/// Which model to run. Locality is a property of the kind, not a free flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModelSpec {
    pub kind: ModelKind,
}

impl ModelSpec {
    pub const QUANTUM: ModelSpec = ModelSpec::new(ModelKind::QuantumSinglet);
    pub const NONLOCAL_STOCHASTIC: ModelSpec = ModelSpec::new(ModelKind::NonlocalSingletStochastic);
    pub const LOCAL_LINEAR: ModelSpec = ModelSpec::new(ModelKind::LocalLinearDeterministic);

    pub const fn new(kind: ModelKind) -> Self {
        ModelSpec { kind }
    }

    /// True when each side's outcome reads only its own analyzer angle.
    pub fn is_local(&self) -> bool {
        matches!(self.kind, ModelKind::LocalLinearDeterministic)
    }

    /// Config name: `quantum`, `nonlocal-stochastic` or `local-linear`.
    pub fn name(&self) -> &'static str {
        match self.kind {
            ModelKind::QuantumSinglet => "quantum",
            ModelKind::NonlocalSingletStochastic => "nonlocal-stochastic",
            ModelKind::LocalLinearDeterministic => "local-linear",
        }
    }

    pub fn all() -> [ModelSpec; 3] {
        [Self::QUANTUM, Self::NONLOCAL_STOCHASTIC, Self::LOCAL_LINEAR]
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelSpec::all()
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Uniform double in `[0, 1)` built from the top 53 bits of one `u64` draw.
///
/// Spelled out here rather than delegated so the mapping from generator
/// output to samples is fixed independently of any distribution crate.
#[inline]
pub fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The deterministic local model, split so that each side's response only
/// has access to its own angle and the hidden phase.
pub struct LocalLinear;

impl LocalLinear {
    #[inline]
    pub fn outcome_a(theta_a: Angle, lambda: f64) -> Outcome {
        Outcome::sign_of((theta_a.radians() - lambda).cos())
    }

    #[inline]
    pub fn outcome_b(theta_b: Angle, lambda: f64) -> Outcome {
        Outcome::sign_of((theta_b.radians() - lambda).cos()).flipped()
    }

    pub fn respond(settings: &DetectorSettings, lambda: f64) -> PairResult {
        PairResult {
            r_a: Self::outcome_a(settings.theta_a, lambda),
            r_b: Self::outcome_b(settings.theta_b, lambda),
        }
    }
}

/// Generates one pair of outcomes. Each model consumes a fixed number of
/// `u64` draws per pair: quantum 1, nonlocal 2, local 1.
pub fn sample_pair<R: RngCore + ?Sized>(
    model: &ModelSpec,
    settings: &DetectorSettings,
    rng: &mut R,
) -> PairResult {
    match model.kind {
        ModelKind::QuantumSinglet => {
            let [c0, c1, c2] = joint_distribution(settings).cumulative();
            let u = unit_f64(rng);
            let (r_a, r_b) = if u < c0 {
                (Outcome::Plus, Outcome::Plus)
            } else if u < c1 {
                (Outcome::Plus, Outcome::Minus)
            } else if u < c2 {
                (Outcome::Minus, Outcome::Plus)
            } else {
                (Outcome::Minus, Outcome::Minus)
            };
            PairResult { r_a, r_b }
        }
        ModelKind::NonlocalSingletStochastic => {
            let r_a = if unit_f64(rng) < 0.5 { Outcome::Plus } else { Outcome::Minus };
            let p_anti = (settings.delta() / 2.0).cos().powi(2);
            let r_b = if unit_f64(rng) < p_anti { r_a.flipped() } else { r_a };
            PairResult { r_a, r_b }
        }
        ModelKind::LocalLinearDeterministic => {
            let lambda = unit_f64(rng) * TAU;
            LocalLinear::respond(settings, lambda)
        }
    }
}

/// Analytic mean of `r_A r_B` under `model` at `settings`.
pub fn expected_correlation(model: &ModelSpec, settings: &DetectorSettings) -> f64 {
    match model.kind {
        ModelKind::QuantumSinglet | ModelKind::NonlocalSingletStochastic => qm_correlation(settings),
        ModelKind::LocalLinearDeterministic => -1.0 + 2.0 * settings.delta().abs() / PI,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha20Rng;
    use rand_core::SeedableRng;

    fn settings(a: f64, b: f64) -> DetectorSettings {
        DetectorSettings::from_degrees(a, b).unwrap()
    }

    /// Midpoint rule over λ of the sign product, independent of
    /// `expected_correlation`.
    fn local_quadrature(delta_deg: f64, steps: usize) -> f64 {
        let d = delta_deg.to_radians();
        let mut total = 0i64;
        for k in 0..steps {
            let lambda = (k as f64 + 0.5) * TAU / steps as f64;
            let a = if (0.0 - lambda).cos() >= 0.0 { 1 } else { -1 };
            let b = if (d - lambda).cos() >= 0.0 { -1 } else { 1 };
            total += a * b;
        }
        total as f64 / steps as f64
    }

    #[test]
    fn names_round_trip() {
        for m in ModelSpec::all() {
            assert_eq!(m.name().parse::<ModelSpec>().unwrap(), m);
        }
        assert!(matches!("hidden".parse::<ModelSpec>(), Err(Error::UnknownModel(_))));
        assert!(ModelSpec::LOCAL_LINEAR.is_local());
        assert!(!ModelSpec::QUANTUM.is_local());
        assert!(!ModelSpec::NONLOCAL_STOCHASTIC.is_local());
    }

    #[test]
    fn certain_outcomes() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let p = sample_pair(&ModelSpec::QUANTUM, &settings(30.0, 30.0), &mut rng);
            assert_eq!(p.r_a, p.r_b.flipped());
            let p = sample_pair(&ModelSpec::NONLOCAL_STOCHASTIC, &settings(180.0, 0.0), &mut rng);
            assert_eq!(p.r_a, p.r_b);
            let p = sample_pair(&ModelSpec::LOCAL_LINEAR, &settings(71.0, 71.0), &mut rng);
            assert_eq!(p.r_a, p.r_b.flipped());
        }
    }

    #[test]
    fn local_expectation_matches_quadrature() {
        for deg in [0.0, 30.0, 45.0, 60.0, 90.0, 135.0, 180.0] {
            let got = expected_correlation(&ModelSpec::LOCAL_LINEAR, &settings(deg, 0.0));
            let oracle = local_quadrature(deg, 360_000);
            assert!((got - oracle).abs() < 1e-4, "{deg}: {got} vs {oracle}");
        }
        assert_eq!(expected_correlation(&ModelSpec::LOCAL_LINEAR, &settings(0.0, 0.0)), -1.0);
        let e = expected_correlation(&ModelSpec::NONLOCAL_STOCHASTIC, &settings(60.0, 0.0));
        assert!((e + 0.5).abs() < 1e-15);
    }

    #[test]
    fn local_sides_ignore_the_far_angle() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let a = Angle::from_degrees(20.0).unwrap();
        let b = Angle::from_degrees(-65.0).unwrap();
        for _ in 0..1000 {
            let lambda = unit_f64(&mut rng) * TAU;
            let other = Angle::from_radians(unit_f64(&mut rng) * TAU).unwrap();
            let base = LocalLinear::respond(&DetectorSettings::new(a, b), lambda);
            assert_eq!(LocalLinear::respond(&DetectorSettings::new(a, other), lambda).r_a, base.r_a);
            assert_eq!(LocalLinear::respond(&DetectorSettings::new(other, b), lambda).r_b, base.r_b);
        }
    }

    #[test]
    fn sign_zero_is_plus() {
        assert_eq!(Outcome::sign_of(0.0), Outcome::Plus);
        assert_eq!(Outcome::sign_of(-0.0), Outcome::Plus);
        assert_eq!(Outcome::sign_of(-1e-300), Outcome::Minus);
    }

    #[test]
    fn unit_interval() {
        struct Max;
        impl RngCore for Max {
            fn next_u32(&mut self) -> u32 {
                u32::MAX
            }
            fn next_u64(&mut self) -> u64 {
                u64::MAX
            }
            fn fill_bytes(&mut self, dst: &mut [u8]) {
                dst.fill(0xff)
            }
        }
        assert!(unit_f64(&mut Max) < 1.0);
    }
}
