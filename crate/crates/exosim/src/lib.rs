//! Dynamics and control simulator for a 7-DOF human lower-limb exoskeleton.
//!
//! The crate models one leg — hip (3 DOF), knee (2 DOF), ankle (2 DOF) — as a
//! serial rigid-body chain with anthropometric segment parameters, realistic
//! Stribeck + Coulomb + viscous joint friction, and three torque controllers:
//!
//! * **CTC** — classic computed torque control straight on the plant;
//! * **MRCTC** — model-reference CTC, where an internal model is driven by a
//!   CTC law and a PID loop forces the plant to follow the model;
//! * **RMRCTC** — the dual-rate variant: the model loop drops the
//!   Coriolis/centrifugal terms and runs at a slower rate, while a fast PID
//!   loop corrects the plant.
//!
//! Everything is deterministic; a run is a pure function of its
//! configuration. See the `book/` guide for a chapter-by-chapter tour.
//!
//! ```
//! use exosim::anthropometry::SegmentSet;
//! use exosim::dynamics::{RobotModel, gravity_vector};
//! use exosim::JointVector;
//!
//! let model = RobotModel::from_segments(&SegmentSet::default_adult(), None, 0.0).unwrap();
//! // A straight hanging leg is a gravity equilibrium.
//! let g = gravity_vector(&model, &JointVector::zeros());
//! assert!(g.amax() < 1e-9);
//! ```

pub mod analysis;
pub mod anthropometry;
pub mod cli;
pub mod config;
pub mod control;
pub mod dynamics;
pub mod friction;
pub mod kinematics;
pub mod simulation;
pub mod trajectory;

#[cfg(doctest)]
mod book;

/// Number of joints in the chain.
pub const NUM_JOINTS: usize = 7;

/// A per-joint quantity (positions, velocities, torques, gains, ...).
pub type JointVector = nalgebra::SVector<f64, NUM_JOINTS>;

/// A joint-space matrix, e.g. the mass matrix.
pub type JointMatrix = nalgebra::SMatrix<f64, NUM_JOINTS, NUM_JOINTS>;

/// Degrees to radians.
pub fn deg_to_rad(deg: f64) -> f64 {
    deg * std::f64::consts::PI / 180.0
}

/// Radians to degrees.
pub fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / std::f64::consts::PI
}
