//! Modified Denavit-Hartenberg kinematics of the 7-joint chain.
//!
//! Frames follow the modified (proximal) DH convention: joint i rotates about
//! the local z-axis of frame i, and the transform from frame i-1 to frame i
//! is parameterized by (theta_i, d_i, a_{i-1}, alpha_{i-1}).
//!
//! The chain runs hip abduction/adduction, hip flexion/extension, hip
//! internal/external rotation, knee flexion/extension, knee internal
//! rotation, ankle dorsiflexion/plantarflexion, ankle pronation/supination.
//! With all joint angles zero the leg hangs straight along the base -x axis:
//! knee at distance l1 from the hip, ankle at l1+l2, foot tip at l1+l2+a1.

use nalgebra::{Matrix3, Vector3};

use crate::dynamics::RobotModel;
use crate::{JointVector, NUM_JOINTS};

/// One row of the modified DH table.
///
/// `theta_offset` is the constant added to the joint variable (some joints
/// carry a -pi/2 offset so that q = 0 is the straight-leg posture).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DhRow {
    pub theta_offset: f64,
    pub d: f64,
    pub a_prev: f64,
    pub alpha_prev: f64,
}

/// Rotation + translation of one frame in another; the bottom (0,0,0,1) row
/// of the homogeneous matrix is implicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomTransform {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl HomTransform {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    /// self ∘ other: apply `other` first in the local frame.
    pub fn compose(&self, other: &HomTransform) -> HomTransform {
        HomTransform {
            rotation: self.rotation * other.rotation,
            translation: self.translation + self.rotation * other.translation,
        }
    }

    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.translation + self.rotation * p
    }

    /// Largest deviation of the rotation block from orthonormality.
    pub fn orthonormality_defect(&self) -> f64 {
        let defect = self.rotation.transpose() * self.rotation - Matrix3::identity();
        defect.abs().max()
    }
}

/// Link lengths plus the DH table they induce.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainGeometry {
    l1: f64,
    l2: f64,
    a1: f64,
    dh_rows: [DhRow; NUM_JOINTS],
}

impl ChainGeometry {
    /// Build the standard chain for thigh length `l1`, shank length `l2` and
    /// foot link length `a1` (meters).
    pub fn new(l1: f64, l2: f64, a1: f64) -> Self {
        use std::f64::consts::FRAC_PI_2;
        let row = |theta_offset, d, a_prev, alpha_prev| DhRow {
            theta_offset,
            d,
            a_prev,
            alpha_prev,
        };
        ChainGeometry {
            l1,
            l2,
            a1,
            dh_rows: [
                row(0.0, 0.0, 0.0, 0.0),                  // hip abduction/adduction
                row(-FRAC_PI_2, 0.0, 0.0, -FRAC_PI_2),    // hip flexion/extension
                row(0.0, -l1, 0.0, -FRAC_PI_2),           // hip int/ext rotation
                row(0.0, 0.0, 0.0, FRAC_PI_2),            // knee flexion/extension
                row(0.0, -l2, 0.0, -FRAC_PI_2),           // knee internal rotation
                row(-FRAC_PI_2, 0.0, 0.0, FRAC_PI_2),     // ankle dorsi/plantarflexion
                row(0.0, 0.0, a1, -FRAC_PI_2),            // ankle pronation/supination
            ],
        }
    }

    pub fn thigh_length(&self) -> f64 {
        self.l1
    }

    pub fn shank_length(&self) -> f64 {
        self.l2
    }

    pub fn foot_length(&self) -> f64 {
        self.a1
    }

    pub fn dh_rows(&self) -> &[DhRow; NUM_JOINTS] {
        &self.dh_rows
    }

    /// Total reach of the chain.
    pub fn reach(&self) -> f64 {
        self.l1 + self.l2 + self.a1
    }
}

/// Transform of frame i in frame i-1 for the given joint angle.
pub fn dh_transform(q_joint: f64, row: &DhRow) -> HomTransform {
    let theta = q_joint + row.theta_offset;
    let (st, ct) = theta.sin_cos();
    let (sa, ca) = row.alpha_prev.sin_cos();
    HomTransform {
        rotation: Matrix3::new(
            ct, -st, 0.0, //
            st * ca, ct * ca, -sa, //
            st * sa, ct * sa, ca,
        ),
        translation: Vector3::new(row.a_prev, -sa * row.d, ca * row.d),
    }
}

/// Per-joint transforms `[^0T_1, ^1T_2, ..., ^6T_7]`.
pub fn link_transforms(q: &JointVector, geom: &ChainGeometry) -> [HomTransform; NUM_JOINTS] {
    std::array::from_fn(|i| dh_transform(q[i], &geom.dh_rows[i]))
}

/// Foot frame relative to the hip: the product of all seven link transforms.
pub fn forward_kinematics(q: &JointVector, geom: &ChainGeometry) -> HomTransform {
    link_transforms(q, geom)
        .iter()
        .fold(HomTransform::identity(), |acc, t| acc.compose(t))
}

/// Positions and velocities of every link COM, all expressed in the base
/// frame. Velocities are exactly linear in the joint rates at fixed q.
#[derive(Debug, Clone, PartialEq)]
pub struct ComKinematics {
    pub com_positions: [Vector3<f64>; NUM_JOINTS],
    pub com_velocities: [Vector3<f64>; NUM_JOINTS],
    pub angular_velocities: [Vector3<f64>; NUM_JOINTS],
    /// Base-frame orientation of each link frame (needed to rotate inertia
    /// tensors out of link coordinates).
    pub rotations: [Matrix3<f64>; NUM_JOINTS],
}

/// COM kinematics via geometric per-link Jacobians.
pub fn com_kinematics(q: &JointVector, qdot: &JointVector, model: &RobotModel) -> ComKinematics {
    let transforms = link_transforms(q, model.geometry());

    // Cumulative pose of every frame in the base frame.
    let mut rotations = [Matrix3::identity(); NUM_JOINTS];
    let mut origins = [Vector3::zeros(); NUM_JOINTS];
    let mut axes = [Vector3::zeros(); NUM_JOINTS];
    let mut pose = HomTransform::identity();
    for i in 0..NUM_JOINTS {
        pose = pose.compose(&transforms[i]);
        rotations[i] = pose.rotation;
        origins[i] = pose.translation;
        axes[i] = pose.rotation.column(2).into_owned();
    }

    let mut com_positions = [Vector3::zeros(); NUM_JOINTS];
    let mut com_velocities = [Vector3::zeros(); NUM_JOINTS];
    let mut angular_velocities = [Vector3::zeros(); NUM_JOINTS];
    for i in 0..NUM_JOINTS {
        let p_ci = origins[i] + rotations[i] * model.links()[i].com;
        com_positions[i] = p_ci;
        let mut v = Vector3::zeros();
        let mut w = Vector3::zeros();
        // Revolute-joint Jacobian columns for every joint at or above link i.
        for j in 0..=i {
            w += axes[j] * qdot[j];
            v += qdot[j] * axes[j].cross(&(p_ci - origins[j]));
        }
        com_velocities[i] = v;
        angular_velocities[i] = w;
    }

    ComKinematics {
        com_positions,
        com_velocities,
        angular_velocities,
        rotations,
    }
}
