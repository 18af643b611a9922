//! Stribeck + Coulomb + viscous joint friction.
//!
//! The friction torque at joint rate w is
//!
//! ```text
//! T(w) = sqrt(2e) (T_brk - T_C) exp(-(w/w_St)^2) (w/w_St)
//!      + T_C tanh(w/w_Coul)
//!      + f w
//! ```
//!
//! with the Stribeck threshold `w_St = w_brk * sqrt(2)` and the Coulomb
//! threshold `w_Coul = w_brk / 10`. The Stribeck term peaks at exactly
//! `w = w_brk` with value `T_brk - T_C`, so the total breakaway torque near
//! zero velocity is `T_brk` as the name promises.

use thiserror::Error;

use crate::{JointVector, NUM_JOINTS};

#[derive(Debug, Error, PartialEq)]
pub enum FrictionError {
    #[error("breakaway torque {brk} must be at least the Coulomb torque {coulomb}")]
    BreakawayBelowCoulomb { brk: f64, coulomb: f64 },
    #[error("Coulomb torque must be non-negative, got {0}")]
    NegativeCoulomb(f64),
    #[error("breakaway velocity must be positive, got {0}")]
    NonPositiveBreakawayVelocity(f64),
    #[error("viscous coefficient must be non-negative, got {0}")]
    NegativeViscous(f64),
    #[error("peak torque must be non-negative, got {0}")]
    NegativePeakTorque(f64),
}

/// Per-joint friction parameters. The velocity thresholds are always derived
/// from the breakaway velocity, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionParams {
    coulomb: f64,
    breakaway: f64,
    breakaway_velocity: f64,
    viscous: f64,
}

impl FrictionParams {
    pub fn new(
        coulomb: f64,
        breakaway: f64,
        breakaway_velocity: f64,
        viscous: f64,
    ) -> Result<Self, FrictionError> {
        if !(coulomb >= 0.0) {
            return Err(FrictionError::NegativeCoulomb(coulomb));
        }
        if !(breakaway >= coulomb) {
            return Err(FrictionError::BreakawayBelowCoulomb {
                brk: breakaway,
                coulomb,
            });
        }
        if !(breakaway_velocity > 0.0) {
            return Err(FrictionError::NonPositiveBreakawayVelocity(
                breakaway_velocity,
            ));
        }
        if !(viscous >= 0.0) {
            return Err(FrictionError::NegativeViscous(viscous));
        }
        Ok(Self {
            coulomb,
            breakaway,
            breakaway_velocity,
            viscous,
        })
    }

    /// Peak-torque rule: Coulomb torque 10% and breakaway torque 15% of the
    /// peak drive torque the joint sees.
    pub fn from_peak_torque(
        peak_torque: f64,
        breakaway_velocity: f64,
        viscous: f64,
    ) -> Result<Self, FrictionError> {
        if !(peak_torque >= 0.0) {
            return Err(FrictionError::NegativePeakTorque(peak_torque));
        }
        Self::new(
            0.1 * peak_torque,
            0.15 * peak_torque,
            breakaway_velocity,
            viscous,
        )
    }

    pub fn coulomb(&self) -> f64 {
        self.coulomb
    }

    pub fn breakaway(&self) -> f64 {
        self.breakaway
    }

    pub fn breakaway_velocity(&self) -> f64 {
        self.breakaway_velocity
    }

    pub fn viscous(&self) -> f64 {
        self.viscous
    }

    /// Stribeck velocity threshold, w_brk * sqrt(2).
    pub fn stribeck_velocity(&self) -> f64 {
        self.breakaway_velocity * std::f64::consts::SQRT_2
    }

    /// Coulomb velocity threshold, w_brk / 10.
    pub fn coulomb_velocity(&self) -> f64 {
        self.breakaway_velocity / 10.0
    }

    /// Slope of the torque curve at w = 0 (for stiffness estimates):
    /// the Stribeck term contributes sqrt(2e)(T_brk-T_C)/w_St, the tanh term
    /// T_C/w_Coul, plus the viscous coefficient.
    pub fn zero_velocity_slope(&self) -> f64 {
        let stribeck = (2.0 * std::f64::consts::E).sqrt() * (self.breakaway - self.coulomb)
            / self.stribeck_velocity();
        let coulomb = if self.coulomb > 0.0 {
            self.coulomb / self.coulomb_velocity()
        } else {
            0.0
        };
        stribeck + coulomb + self.viscous
    }
}

/// Friction torque at joint rate `omega`. Odd in `omega` and zero at rest.
pub fn friction_torque(params: &FrictionParams, omega: f64) -> f64 {
    let x = omega / params.stribeck_velocity();
    let stribeck =
        (2.0 * std::f64::consts::E).sqrt() * (params.breakaway - params.coulomb) * (-x * x).exp() * x;
    let coulomb = params.coulomb * (omega / params.coulomb_velocity()).tanh();
    stribeck + coulomb + params.viscous * omega
}

/// Stack [`friction_torque`] across all joints.
pub fn friction_torques(params: &[FrictionParams; NUM_JOINTS], omega: &JointVector) -> JointVector {
    JointVector::from_fn(|i, _| friction_torque(&params[i], omega[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    /// The illustration parameter set: peak torque 100 N·m, breakaway
    /// velocity 0.01 rad/s, viscous coefficient 5.
    fn curve_params() -> FrictionParams {
        FrictionParams::from_peak_torque(100.0, 0.01, 5.0).unwrap()
    }

    #[test]
    fn peak_rule_and_thresholds() {
        let p = curve_params();
        assert_eq!(p.coulomb(), 10.0);
        assert_eq!(p.breakaway(), 15.0);
        assert_relative_eq!(p.stribeck_velocity(), 0.014142135623730951, max_relative = 1e-15);
        assert_relative_eq!(p.coulomb_velocity(), 0.001, max_relative = 1e-15);
    }

    #[test]
    fn zero_velocity_zero_torque() {
        assert_eq!(friction_torque(&curve_params(), 0.0), 0.0);
    }

    #[test]
    fn breakaway_point_value() {
        let p = curve_params();
        // At w_brk the Stribeck term alone is T_brk - T_C = 5 exactly
        // (x e^{-x^2} peaks at x = 1/sqrt(2), scaled by sqrt(2e)).
        let stribeck_only = FrictionParams::new(0.0, 5.0, 0.01, 0.0).unwrap();
        assert_relative_eq!(
            friction_torque(&stribeck_only, p.breakaway_velocity()),
            5.0,
            max_relative = 1e-12
        );
        // Full curve: ~15.05 N·m (tanh(10) short of 1 plus the viscous bit).
        assert_abs_diff_eq!(
            friction_torque(&p, p.breakaway_velocity()),
            15.05,
            epsilon = 1e-3
        );
    }

    #[test]
    fn numeric_maximum_of_stribeck_term_sits_at_breakaway() {
        let p = FrictionParams::new(0.0, 5.0, 0.01, 0.0).unwrap();
        let mut best_w = 0.0;
        let mut best = f64::NEG_INFINITY;
        let mut w = 1e-5;
        while w < 0.05 {
            let t = friction_torque(&p, w);
            if t > best {
                best = t;
                best_w = w;
            }
            w += 1e-6;
        }
        assert_relative_eq!(best_w, p.breakaway_velocity(), max_relative = 1e-3);
        assert_relative_eq!(best, p.breakaway() - p.coulomb(), max_relative = 1e-9);
    }

    #[test]
    fn high_velocity_asymptote() {
        let p = curve_params();
        // Stribeck term has decayed below anything representable; the tanh is
        // saturated, leaving T_C + f w.
        assert_abs_diff_eq!(friction_torque(&p, 100.0), 510.0, epsilon = 1e-9);
        for w in [0.1, 0.5, 1.0, 10.0] {
            // From 10x the breakaway velocity on, the curve is within 1% of
            // the Coulomb+viscous asymptote.
            let t = friction_torque(&p, w);
            assert!(
                (t - (p.coulomb() + p.viscous() * w)).abs() < 0.01 * p.coulomb(),
                "w={w}: {t}"
            );
        }
    }

    #[test]
    fn odd_symmetry_and_sign() {
        let p = curve_params();
        for w in [1e-4, 0.01, 0.3, 2.0, 50.0] {
            assert_eq!(friction_torque(&p, -w), -friction_torque(&p, w));
            assert!(friction_torque(&p, w) > 0.0);
            assert!(friction_torque(&p, -w) < 0.0);
        }
    }

    #[test]
    fn zero_peak_degenerates_to_viscous() {
        let p = FrictionParams::from_peak_torque(0.0, 0.01, 0.7).unwrap();
        for w in [-2.0, -0.5, 0.0, 0.3, 4.0] {
            assert_abs_diff_eq!(friction_torque(&p, w), 0.7 * w, epsilon = 1e-15);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            FrictionParams::new(10.0, 5.0, 0.01, 0.0),
            Err(FrictionError::BreakawayBelowCoulomb { .. })
        ));
        assert!(matches!(
            FrictionParams::new(-1.0, 5.0, 0.01, 0.0),
            Err(FrictionError::NegativeCoulomb(_))
        ));
        assert!(matches!(
            FrictionParams::new(1.0, 5.0, 0.0, 0.0),
            Err(FrictionError::NonPositiveBreakawayVelocity(_))
        ));
        assert!(matches!(
            FrictionParams::new(1.0, 5.0, 0.01, -0.2),
            Err(FrictionError::NegativeViscous(_))
        ));
        assert!(matches!(
            FrictionParams::from_peak_torque(-3.0, 0.01, 0.1),
            Err(FrictionError::NegativePeakTorque(_))
        ));
    }
}
