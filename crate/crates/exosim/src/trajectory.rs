//! Joint-space reference trajectories inside anatomical ranges of motion.
//!
//! Motions are point-to-point minimum-jerk (quintic) profiles with zero
//! boundary velocity and acceleration. Sequential mode exercises the joints
//! one at a time (out and back, with dwells between motions); simultaneous
//! mode starts every joint together.

use thiserror::Error;

use crate::control::RefPoint;
use crate::{rad_to_deg, JointVector, NUM_JOINTS};

/// Default sampling rate of the stored trajectory arrays, Hz.
pub const SAMPLE_HZ: f64 = 1000.0;

/// Anatomical range of motion of one joint, degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RomLimit {
    pub name: &'static str,
    pub min_deg: f64,
    pub max_deg: f64,
}

/// Per-joint ranges: hip abduction 45 / adduction 30, hip flexion 120 /
/// extension 30, hip rotations 45, knee flexion 135, knee internal rotation
/// 30, ankle dorsiflexion 20 / plantarflexion 50, pronation 35 / supination 15.
pub const ROM_LIMITS: [RomLimit; NUM_JOINTS] = [
    RomLimit { name: "hip abduction/adduction", min_deg: -30.0, max_deg: 45.0 },
    RomLimit { name: "hip flexion/extension", min_deg: -30.0, max_deg: 120.0 },
    RomLimit { name: "hip internal/external rotation", min_deg: -45.0, max_deg: 45.0 },
    RomLimit { name: "knee flexion/extension", min_deg: 0.0, max_deg: 135.0 },
    RomLimit { name: "knee internal rotation", min_deg: -30.0, max_deg: 30.0 },
    RomLimit { name: "ankle dorsiflexion/plantarflexion", min_deg: -50.0, max_deg: 20.0 },
    RomLimit { name: "ankle pronation/supination", min_deg: -15.0, max_deg: 35.0 },
];

#[derive(Debug, Error, PartialEq)]
pub enum TrajectoryError {
    #[error(
        "joint {joint} ({name}): amplitude {amplitude_deg:.3} deg outside range \
         [{min_deg}, {max_deg}] deg"
    )]
    AmplitudeOutsideRom {
        joint: usize,
        name: &'static str,
        amplitude_deg: f64,
        min_deg: f64,
        max_deg: f64,
    },
    #[error("joint {joint}: motion duration must be positive, got {duration}")]
    NonPositiveDuration { joint: usize, duration: f64 },
    #[error("dwell must be non-negative, got {0}")]
    NegativeDwell(f64),
    #[error("requested total duration {requested} is shorter than the schedule ({required})")]
    TotalTooShort { requested: f64, required: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryMode {
    Sequential,
    Simultaneous,
}

/// What to generate: per-joint amplitudes/durations plus scheduling.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySpec {
    pub mode: TrajectoryMode,
    /// Signed target of each joint's excursion from zero, radians.
    pub amplitudes_rad: [f64; NUM_JOINTS],
    /// Duration of a single point-to-point motion, seconds.
    pub durations_s: [f64; NUM_JOINTS],
    /// Pause between scheduled motions, seconds.
    pub dwell_s: f64,
    /// Optional padding to a fixed total duration.
    pub total_duration_s: Option<f64>,
}

impl TrajectorySpec {
    /// Stock trajectory: every joint sweeps at least half of its range of
    /// motion, while hip flexion stays clear of the 90 deg hip-axis
    /// alignment.
    pub fn default_for_mode(mode: TrajectoryMode) -> Self {
        let deg = [40.0, 80.0, 45.0, 70.0, 30.0, -40.0, 28.0];
        TrajectorySpec {
            mode,
            amplitudes_rad: std::array::from_fn(|i| crate::deg_to_rad(deg[i])),
            durations_s: [0.8; NUM_JOINTS],
            dwell_s: 0.2,
            total_duration_s: None,
        }
    }
}

/// One minimum-jerk point-to-point motion.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Motion {
    start_time: f64,
    duration: f64,
    start_pos: f64,
    delta: f64,
}

impl Motion {
    fn end_time(&self) -> f64 {
        self.start_time + self.duration
    }

    /// Quintic s(u) = 10u^3 - 15u^4 + 6u^5 and its derivatives.
    fn eval(&self, t: f64) -> (f64, f64, f64) {
        let u = ((t - self.start_time) / self.duration).clamp(0.0, 1.0);
        let s = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
        let sd = 30.0 * u * u * (1.0 - 2.0 * u + u * u);
        let sdd = 60.0 * u * (1.0 - 3.0 * u + 2.0 * u * u);
        (
            self.start_pos + self.delta * s,
            self.delta * sd / self.duration,
            self.delta * sdd / (self.duration * self.duration),
        )
    }
}

/// A generated reference trajectory: piecewise-quintic segments (evaluable at
/// any time) plus arrays sampled at [`SAMPLE_HZ`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    motions: [Vec<Motion>; NUM_JOINTS],
    duration: f64,
    pub times: Vec<f64>,
    pub positions: Vec<JointVector>,
    pub velocities: Vec<JointVector>,
    pub accelerations: Vec<JointVector>,
}

impl Trajectory {
    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Analytic reference at time `t` (clamped to the schedule ends).
    pub fn sample(&self, t: f64) -> RefPoint {
        let mut pos = JointVector::zeros();
        let mut vel = JointVector::zeros();
        let mut acc = JointVector::zeros();
        for j in 0..NUM_JOINTS {
            let mut p = 0.0;
            let mut v = 0.0;
            let mut a = 0.0;
            for m in &self.motions[j] {
                if t < m.start_time {
                    break;
                }
                if t <= m.end_time() {
                    let (mp, mv, ma) = m.eval(t);
                    p = mp;
                    v = mv;
                    a = ma;
                } else {
                    p = m.start_pos + m.delta;
                    v = 0.0;
                    a = 0.0;
                }
            }
            pos[j] = p;
            vel[j] = v;
            acc[j] = a;
        }
        RefPoint { pos, vel, acc }
    }
}

/// Build the trajectory for a validated spec.
pub fn generate_trajectory(spec: &TrajectorySpec) -> Result<Trajectory, TrajectoryError> {
    for j in 0..NUM_JOINTS {
        let lim = &ROM_LIMITS[j];
        let amp_deg = rad_to_deg(spec.amplitudes_rad[j]);
        if amp_deg < lim.min_deg || amp_deg > lim.max_deg {
            return Err(TrajectoryError::AmplitudeOutsideRom {
                joint: j + 1,
                name: lim.name,
                amplitude_deg: amp_deg,
                min_deg: lim.min_deg,
                max_deg: lim.max_deg,
            });
        }
        if !(spec.durations_s[j] > 0.0) {
            return Err(TrajectoryError::NonPositiveDuration {
                joint: j + 1,
                duration: spec.durations_s[j],
            });
        }
    }
    if !(spec.dwell_s >= 0.0) {
        return Err(TrajectoryError::NegativeDwell(spec.dwell_s));
    }

    let mut motions: [Vec<Motion>; NUM_JOINTS] = Default::default();
    let dwell = spec.dwell_s;
    let schedule_end = match spec.mode {
        TrajectoryMode::Sequential => {
            // dwell, out, dwell, back — one joint after another.
            let mut cursor = 0.0;
            for j in 0..NUM_JOINTS {
                let t = spec.durations_s[j];
                let a = spec.amplitudes_rad[j];
                motions[j].push(Motion {
                    start_time: cursor + dwell,
                    duration: t,
                    start_pos: 0.0,
                    delta: a,
                });
                motions[j].push(Motion {
                    start_time: cursor + dwell + t + dwell,
                    duration: t,
                    start_pos: a,
                    delta: -a,
                });
                cursor += 2.0 * (dwell + t);
            }
            cursor + dwell
        }
        TrajectoryMode::Simultaneous => {
            // Everything out together, shared dwell, everything back.
            let t_max = spec
                .durations_s
                .iter()
                .cloned()
                .fold(0.0_f64, f64::max);
            let back_start = dwell + t_max + dwell;
            for j in 0..NUM_JOINTS {
                let t = spec.durations_s[j];
                let a = spec.amplitudes_rad[j];
                motions[j].push(Motion {
                    start_time: dwell,
                    duration: t,
                    start_pos: 0.0,
                    delta: a,
                });
                motions[j].push(Motion {
                    start_time: back_start,
                    duration: t,
                    start_pos: a,
                    delta: -a,
                });
            }
            back_start + t_max + dwell
        }
    };

    let duration = match spec.total_duration_s {
        Some(total) => {
            if total < schedule_end {
                return Err(TrajectoryError::TotalTooShort {
                    requested: total,
                    required: schedule_end,
                });
            }
            total
        }
        None => schedule_end,
    };

    let mut traj = Trajectory {
        motions,
        duration,
        times: Vec::new(),
        positions: Vec::new(),
        velocities: Vec::new(),
        accelerations: Vec::new(),
    };
    let n = (duration * SAMPLE_HZ).round() as usize;
    traj.times.reserve(n + 1);
    traj.positions.reserve(n + 1);
    traj.velocities.reserve(n + 1);
    traj.accelerations.reserve(n + 1);
    for k in 0..=n {
        let t = k as f64 / SAMPLE_HZ;
        let p = traj.sample(t);
        traj.times.push(t);
        traj.positions.push(p.pos);
        traj.velocities.push(p.vel);
        traj.accelerations.push(p.acc);
    }
    Ok(traj)
}
