//! Analyzer orientations in the azimuthal plane.

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::error::{Error, Result};

/// An azimuthal analyzer angle, stored in radians and reduced to `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub fn from_radians(radians: f64) -> Result<Self> {
        if !radians.is_finite() {
            return Err(Error::NonFiniteAngle(radians));
        }
        let mut r = radians.rem_euclid(TAU);
        // rem_euclid of a tiny negative value rounds up to exactly TAU.
        if r >= TAU {
            r = 0.0;
        }
        Ok(Angle(r))
    }

    pub fn from_degrees(degrees: f64) -> Result<Self> {
        if !degrees.is_finite() {
            return Err(Error::NonFiniteAngle(degrees));
        }
        Self::from_radians(degrees.to_radians())
    }

    pub const fn zero() -> Self {
        Angle(0.0)
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    /// Signed difference `self − other`, reduced to `[−π, π]`.
    pub fn difference(self, other: Angle) -> f64 {
        reduce_difference(self.0 - other.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.degrees())
    }
}

/// Reduces an arbitrary finite angle difference (radians) to `[−π, π]`.
///
/// Values already in range are returned untouched so that `π` and `−π`
/// both survive (they describe the same physical configuration).
pub fn reduce_difference(delta: f64) -> f64 {
    if (-PI..=PI).contains(&delta) {
        return delta;
    }
    ((delta + PI).rem_euclid(TAU) - PI).clamp(-PI, PI)
}

/// Folds a difference onto its magnitude in `[0, π]`.
///
/// Every quantity in this crate depends on Δ only through `cos Δ` or `|Δ|`,
/// so this is the canonical key for Δ, −Δ and Δ + 2πk.
pub fn fold_difference(delta: f64) -> f64 {
    reduce_difference(delta).abs()
}

/// The analyzer orientations `(θ_A, θ_B)` of one experimental specification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectorSettings {
    pub theta_a: Angle,
    pub theta_b: Angle,
}

impl DetectorSettings {
    pub fn new(theta_a: Angle, theta_b: Angle) -> Self {
        DetectorSettings { theta_a, theta_b }
    }

    pub fn from_degrees(theta_a: f64, theta_b: f64) -> Result<Self> {
        Ok(DetectorSettings {
            theta_a: Angle::from_degrees(theta_a)?,
            theta_b: Angle::from_degrees(theta_b)?,
        })
    }

    /// `θ_A − θ_B` reduced to `[−π, π]`.
    pub fn delta(&self) -> f64 {
        self.theta_a.difference(self.theta_b)
    }
}

/// Two settings per side, giving four experimental specifications.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SettingsQuad {
    pub theta_a_prime: Angle,
    pub theta_a_double: Angle,
    pub theta_b_prime: Angle,
    pub theta_b_double: Angle,
}

impl SettingsQuad {
    /// Builds a quad from degrees in the order `a, a′, b, b′`.
    pub fn from_degrees(a: f64, a2: f64, b: f64, b2: f64) -> Result<Self> {
        Ok(SettingsQuad {
            theta_a_prime: Angle::from_degrees(a)?,
            theta_a_double: Angle::from_degrees(a2)?,
            theta_b_prime: Angle::from_degrees(b)?,
            theta_b_double: Angle::from_degrees(b2)?,
        })
    }

    /// The four settings pairs `(a,b), (a,b′), (a′,b), (a′,b′)`, in the order
    /// the CHSH combination expects them.
    pub fn pairs(&self) -> [DetectorSettings; 4] {
        [
            DetectorSettings::new(self.theta_a_prime, self.theta_b_prime),
            DetectorSettings::new(self.theta_a_prime, self.theta_b_double),
            DetectorSettings::new(self.theta_a_double, self.theta_b_prime),
            DetectorSettings::new(self.theta_a_double, self.theta_b_double),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_range() {
        assert_eq!(Angle::from_degrees(360.0).unwrap().radians(), 0.0);
        assert_eq!(Angle::from_degrees(-1e-300).unwrap().radians(), 0.0);
        let a = Angle::from_degrees(-90.0).unwrap();
        assert!((a.degrees() - 270.0).abs() < 1e-12);
        for deg in [-1000.0, -360.0, -0.5, 0.0, 359.999, 720.0, 1e6] {
            let r = Angle::from_degrees(deg).unwrap().radians();
            assert!((0.0..TAU).contains(&r), "{deg} -> {r}");
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Angle::from_degrees(f64::NAN).is_err());
        assert!(Angle::from_radians(f64::INFINITY).is_err());
        assert!(DetectorSettings::from_degrees(0.0, f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn difference_is_reduced() {
        let s = DetectorSettings::from_degrees(350.0, 10.0).unwrap();
        assert!((s.delta().to_degrees() + 20.0).abs() < 1e-9);
        let s = DetectorSettings::from_degrees(180.0, 0.0).unwrap();
        assert_eq!(s.delta(), PI);
        assert_eq!(reduce_difference(3.0 * PI).abs(), PI);
        assert!((fold_difference(-0.3) - 0.3).abs() < 1e-15);
        assert!((fold_difference(0.3 + TAU) - 0.3).abs() < 1e-14);
    }

    #[test]
    fn quad_pair_order() {
        let q = SettingsQuad::from_degrees(0.0, 90.0, 45.0, 135.0).unwrap();
        let deg: Vec<(f64, f64)> = q
            .pairs()
            .iter()
            .map(|p| (p.theta_a.degrees().round(), p.theta_b.degrees().round()))
            .collect();
        assert_eq!(deg, vec![(0.0, 45.0), (0.0, 135.0), (90.0, 45.0), (90.0, 135.0)]);
    }
}
