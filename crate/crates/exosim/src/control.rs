//! Torque control laws and the gain stability gate.
//!
//! Three controllers share the pieces in here:
//!
//! * [`ctc_torque`] is the computed-torque law
//!   `tau = M(q)[acc_d + Kv (vel_d - qd) + Kp (pos_d - q)] + G(q)`, with the
//!   Coriolis/centripetal vector added on top when `include_coriolis` is set.
//!   The flag ON is the classic CTC (full compensation, error dynamics
//!   `E'' + Kv E' + Kp E = 0`); OFF is the reduced model law that treats V as
//!   a disturbance.
//! * [`loop2_correction`] is the PID that forces the plant onto the internal
//!   model, `dtau = K_I int(E) + K_P E + K_V E' + tau_f`, with a trapezoidal,
//!   clamped integral.
//! * [`routh_hurwitz_stable`] reduces, for diagonal gain matrices, to sign
//!   checks on every gain: second-order loops are asymptotically stable iff
//!   all their coefficients are positive.

use crate::dynamics::{self, RobotModel};
use crate::{JointVector, NUM_JOINTS};

/// Diagonal gains for both loops.
#[derive(Debug, Clone, PartialEq)]
pub struct GainSet {
    pub loop1_kp: JointVector,
    pub loop1_kv: JointVector,
    pub loop2_kp: JointVector,
    pub loop2_ki: JointVector,
    pub loop2_kv: JointVector,
}

impl GainSet {
    /// The default tuning used by every stock configuration.
    pub fn nominal() -> Self {
        GainSet {
            loop1_kp: JointVector::repeat(500.0),
            loop1_kv: JointVector::repeat(7500.0),
            loop2_kp: JointVector::repeat(1e4),
            loop2_ki: JointVector::repeat(250.0),
            loop2_kv: JointVector::from_column_slice(&[
                55e3, 50e3, 55e2, 3e2, 55e2, 55e2, 55e2,
            ]),
        }
    }
}

impl Default for GainSet {
    fn default() -> Self {
        Self::nominal()
    }
}

/// One sample of the reference trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefPoint {
    pub pos: JointVector,
    pub vel: JointVector,
    pub acc: JointVector,
}

impl RefPoint {
    pub fn hold(pos: JointVector) -> Self {
        RefPoint {
            pos,
            vel: JointVector::zeros(),
            acc: JointVector::zeros(),
        }
    }
}

/// Computed-torque law evaluated with the given model.
pub fn ctc_torque(
    model: &RobotModel,
    q: &JointVector,
    qdot: &JointVector,
    reference: &RefPoint,
    kp: &JointVector,
    kv: &JointVector,
    include_coriolis: bool,
) -> JointVector {
    let acc_cmd = reference.acc
        + kv.component_mul(&(reference.vel - qdot))
        + kp.component_mul(&(reference.pos - q));
    // One Newton-Euler pass at zero rates realizes M(q) acc_cmd + G(q).
    let base = dynamics::inverse_dynamics(model, q, &JointVector::zeros(), &acc_cmd);
    if include_coriolis {
        base + dynamics::coriolis_vector(model, q, qdot)
    } else {
        base
    }
}

/// Integral state of the loop-2 PID.
#[derive(Debug, Clone, PartialEq)]
pub struct PidState {
    integral: JointVector,
    prev_error: JointVector,
    /// Per-joint anti-windup clamp on the integral, rad·s.
    clamp: f64,
}

impl PidState {
    pub fn new(clamp: f64) -> Self {
        PidState {
            integral: JointVector::zeros(),
            prev_error: JointVector::zeros(),
            clamp,
        }
    }

    pub fn integral(&self) -> &JointVector {
        &self.integral
    }
}

/// Advance the PID state by `dt` and return the plant torque correction
/// `K_I int(E) + K_P E + K_V Edot + tau_f`.
///
/// The integral accumulates trapezoidally and is clamped per joint.
pub fn loop2_correction(
    state: &mut PidState,
    error: &JointVector,
    error_dot: &JointVector,
    dt: f64,
    gains: &GainSet,
    tau_f: &JointVector,
) -> JointVector {
    state.integral += (state.prev_error + error) * (0.5 * dt);
    state.integral = state.integral.map(|v| v.clamp(-state.clamp, state.clamp));
    state.prev_error = *error;
    gains.loop2_ki.component_mul(&state.integral)
        + gains.loop2_kp.component_mul(error)
        + gains.loop2_kv.component_mul(error_dot)
        + tau_f
}

/// Per-loop, per-joint stability verdicts for diagonal gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict {
    pub loop1: [bool; NUM_JOINTS],
    pub loop2: [bool; NUM_JOINTS],
}

impl StabilityVerdict {
    pub fn all_stable(&self) -> bool {
        self.loop1.iter().all(|&s| s) && self.loop2.iter().all(|&s| s)
    }

    /// Joints whose verdict is unstable, 1-based, for error messages.
    pub fn offending_joints(&self) -> Vec<(usize, &'static str)> {
        let mut out = Vec::new();
        for i in 0..NUM_JOINTS {
            if !self.loop1[i] {
                out.push((i + 1, "loop1"));
            }
            if !self.loop2[i] {
                out.push((i + 1, "loop2"));
            }
        }
        out
    }
}

/// Routh-Hurwitz verdicts: loop 1 needs Kp, Kv > 0; loop 2 needs
/// K_P, K_I, K_V > 0. Diagonal gains decouple the joints, so each is judged
/// independently.
pub fn routh_hurwitz_stable(gains: &GainSet) -> StabilityVerdict {
    StabilityVerdict {
        loop1: std::array::from_fn(|i| gains.loop1_kp[i] > 0.0 && gains.loop1_kv[i] > 0.0),
        loop2: std::array::from_fn(|i| {
            gains.loop2_kp[i] > 0.0 && gains.loop2_ki[i] > 0.0 && gains.loop2_kv[i] > 0.0
        }),
    }
}

/// Exact propagator of the scalar error system `e'' + kv e' + kp e = 0` over
/// one step: returns the 2x2 matrix P with `[e, e'](t+dt) = P [e, e'](t)`.
///
/// This is the closed-loop transition of a joint under the computed-torque
/// law; the executive uses it to advance the internal model without numeric
/// integration.
pub fn error_transition(kp: f64, kv: f64, dt: f64) -> [[f64; 2]; 2] {
    let disc = kv * kv - 4.0 * kp;
    let scale = (kv * kv + 4.0 * kp.abs()).max(1e-300);
    if disc > 1e-9 * scale {
        // Two distinct real roots.
        let s = disc.sqrt();
        let r1 = 0.5 * (-kv - s);
        let r2 = 0.5 * (-kv + s);
        let e1 = (r1 * dt).exp();
        let e2 = (r2 * dt).exp();
        let d = r2 - r1;
        [
            [(r2 * e1 - r1 * e2) / d, (e2 - e1) / d],
            [r1 * r2 * (e1 - e2) / d, (r2 * e2 - r1 * e1) / d],
        ]
    } else if disc < -1e-9 * scale {
        // Complex pair sigma +- i omega.
        let sigma = -0.5 * kv;
        let omega = 0.5 * (-disc).sqrt();
        let ex = (sigma * dt).exp();
        let (sw, cw) = (omega * dt).sin_cos();
        [
            [ex * (cw - sigma / omega * sw), ex * sw / omega],
            [-kp * ex * sw / omega, ex * (cw + sigma / omega * sw)],
        ]
    } else {
        // Repeated root r = -kv/2.
        let r = -0.5 * kv;
        let ex = (r * dt).exp();
        [
            [(1.0 - r * dt) * ex, dt * ex],
            [-r * r * dt * ex, (1.0 + r * dt) * ex],
        ]
    }
}
