//! Rigid-body dynamics of the 7-DOF chain.
//!
//! The runtime primitive is a recursive Newton-Euler inverse dynamics pass
//! ([`inverse_dynamics`]); the mass matrix comes from the composite-rigid-body
//! algorithm ([`mass_matrix`]), and gravity/Coriolis vectors fall out of the
//! manipulator-equation identities
//!
//! ```text
//! tau = M(q) qdd + V(q, qd) + G(q)        G = tau(q, 0, 0)
//!                                         V = tau(q, qd, 0) - G(q)
//! ```
//!
//! An energy-based route ([`energies`], built on COM Jacobians rather than
//! the Newton-Euler recursions) provides the independent cross-check used by
//! the test suites: M is the Hessian of the kinetic energy in the joint
//! rates, G the gradient of the potential.

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

use crate::anthropometry::{SegmentSet, UnitSystem};
use crate::friction::{self, FrictionParams};
use crate::kinematics::{self, ChainGeometry, HomTransform};
use crate::{JointMatrix, JointVector, NUM_JOINTS};

/// Standard gravitational acceleration magnitude, m/s^2.
pub const STANDARD_GRAVITY: f64 = 9.81;

/// Mass given to the four zero-length connector links so the mass matrix
/// stays invertible when the three hip axes align (q2 = +-90 deg).
pub const VIRTUAL_LINK_MASS: f64 = 1e-4;
/// Isotropic rotational inertia of the connector links, kg·m^2.
pub const VIRTUAL_LINK_INERTIA: f64 = 1e-5;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("segment set must be in SI units")]
    NotSi,
    #[error(transparent)]
    Segments(#[from] crate::anthropometry::AnthroError),
    #[error("gravity magnitude {0} outside the sane range [0, 20] m/s^2")]
    GravityOutOfRange(f64),
}

/// Mass, COM position (link frame) and rotational inertia about the COM
/// (link frame) of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    pub mass: f64,
    pub com: Vector3<f64>,
    pub inertia: Matrix3<f64>,
}

/// Immutable description of the chain: geometry, per-link inertial
/// parameters, gravity and the potential-energy reference offset.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotModel {
    geometry: ChainGeometry,
    links: [LinkParams; NUM_JOINTS],
    gravity: Vector3<f64>,
    u_ref: f64,
}

impl RobotModel {
    /// Build the chain from an SI segment set.
    ///
    /// The thigh rides on link 3 (spun by hip rotation), the shank on link 5
    /// (spun by knee internal rotation) and the foot on link 7; the four
    /// remaining links are zero-length connectors between co-located joint
    /// axes and carry only the small regularization inertia. Segment COMs sit
    /// on each segment's long axis at the configured proximal offset, and the
    /// smallest principal inertia is assigned to that axis.
    ///
    /// `gravity = None` selects the default: 9.81 m/s^2 along the unit vector
    /// from the hip to the foot position at q = 0, which makes the straight
    /// hanging leg an equilibrium.
    pub fn from_segments(
        set: &SegmentSet,
        gravity: Option<Vector3<f64>>,
        u_ref: f64,
    ) -> Result<Self, ModelError> {
        if set.units != UnitSystem::Si {
            return Err(ModelError::NotSi);
        }
        set.validate()?;

        let geometry = ChainGeometry::new(set.thigh.length, set.shank.length, set.foot.length);

        let virtual_link = LinkParams {
            mass: VIRTUAL_LINK_MASS,
            com: Vector3::zeros(),
            inertia: Matrix3::identity() * VIRTUAL_LINK_INERTIA,
        };
        let thigh = LinkParams {
            mass: set.thigh.mass,
            com: Vector3::new(0.0, 0.0, set.thigh.length - set.thigh.com_offset),
            // Longitudinal axis of the thigh is the link-3 z axis.
            inertia: Matrix3::from_diagonal(&Vector3::new(
                set.thigh.inertia_diag[1],
                set.thigh.inertia_diag[2],
                set.thigh.inertia_diag[0],
            )),
        };
        let shank = LinkParams {
            mass: set.shank.mass,
            com: Vector3::new(0.0, 0.0, set.shank.length - set.shank.com_offset),
            // The shank's longitudinal entry is printed second.
            inertia: Matrix3::from_diagonal(&Vector3::new(
                set.shank.inertia_diag[0],
                set.shank.inertia_diag[2],
                set.shank.inertia_diag[1],
            )),
        };
        let foot = LinkParams {
            mass: set.foot.mass,
            // Ankle sits at -a1 x in the foot frame; the COM lies com_offset
            // along the foot axis from there.
            com: Vector3::new(set.foot.com_offset - set.foot.length, 0.0, 0.0),
            inertia: Matrix3::from_diagonal(&Vector3::new(
                set.foot.inertia_diag[0],
                set.foot.inertia_diag[1],
                set.foot.inertia_diag[2],
            )),
        };
        let links = [
            virtual_link,
            virtual_link,
            thigh,
            virtual_link,
            shank,
            virtual_link,
            foot,
        ];

        let gravity = match gravity {
            Some(g) => g,
            None => Self::default_gravity(&geometry),
        };
        if !(gravity.norm() <= 20.0) {
            return Err(ModelError::GravityOutOfRange(gravity.norm()));
        }

        Ok(RobotModel {
            geometry,
            links,
            gravity,
            u_ref,
        })
    }

    /// Default gravity: toward the foot position of the zero configuration.
    pub fn default_gravity(geometry: &ChainGeometry) -> Vector3<f64> {
        let foot = kinematics::forward_kinematics(&JointVector::zeros(), geometry).translation;
        foot.normalize() * STANDARD_GRAVITY
    }

    pub fn geometry(&self) -> &ChainGeometry {
        &self.geometry
    }

    pub fn links(&self) -> &[LinkParams; NUM_JOINTS] {
        &self.links
    }

    pub fn gravity(&self) -> Vector3<f64> {
        self.gravity
    }

    pub fn u_ref(&self) -> f64 {
        self.u_ref
    }
}

/// Joint torques split into the manipulator-equation contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct TorqueComponents {
    /// M(q) qdd
    pub inertial: JointVector,
    /// V(q, qd)
    pub coriolis: JointVector,
    /// G(q)
    pub gravitational: JointVector,
    pub total: JointVector,
}

/// Joint torques for the given state and acceleration (recursive
/// Newton-Euler). Gravity is folded in by accelerating the base frame.
pub fn inverse_dynamics(
    model: &RobotModel,
    q: &JointVector,
    qdot: &JointVector,
    qddot: &JointVector,
) -> JointVector {
    rnea(model, q, qdot, qddot, &model.gravity)
}

fn rnea(
    model: &RobotModel,
    q: &JointVector,
    qdot: &JointVector,
    qddot: &JointVector,
    gravity: &Vector3<f64>,
) -> JointVector {
    let transforms = kinematics::link_transforms(q, model.geometry());
    let ez = Vector3::z();

    // Outward pass: link angular velocity/acceleration and COM acceleration,
    // each in its own frame. The base "accelerates" opposite gravity.
    let mut w = [Vector3::zeros(); NUM_JOINTS];
    let mut wd = [Vector3::zeros(); NUM_JOINTS];
    let mut net_force = [Vector3::zeros(); NUM_JOINTS];
    let mut net_moment = [Vector3::zeros(); NUM_JOINTS];
    let mut w_prev = Vector3::zeros();
    let mut wd_prev = Vector3::zeros();
    let mut vd_prev: Vector3<f64> = -gravity;
    for i in 0..NUM_JOINTS {
        let rot_into = transforms[i].rotation.transpose();
        let p = transforms[i].translation;

        let w_parent = rot_into * w_prev;
        let w_i = w_parent + ez * qdot[i];
        let wd_i = rot_into * wd_prev + w_parent.cross(&(ez * qdot[i])) + ez * qddot[i];
        let vd_i = rot_into * (wd_prev.cross(&p) + w_prev.cross(&w_prev.cross(&p)) + vd_prev);

        let link = &model.links[i];
        let vd_com = wd_i.cross(&link.com) + w_i.cross(&w_i.cross(&link.com)) + vd_i;
        net_force[i] = link.mass * vd_com;
        net_moment[i] = link.inertia * wd_i + w_i.cross(&(link.inertia * w_i));

        w[i] = w_i;
        wd[i] = wd_i;
        w_prev = w_i;
        wd_prev = wd_i;
        vd_prev = vd_i;
    }

    // Inward pass: accumulate joint forces/moments, project on the joint axes.
    let mut tau = JointVector::zeros();
    let mut f_child = Vector3::zeros();
    let mut n_child = Vector3::zeros();
    for i in (0..NUM_JOINTS).rev() {
        let (f_from_child, n_from_child) = if i + 1 < NUM_JOINTS {
            let rot = transforms[i + 1].rotation;
            let p = transforms[i + 1].translation;
            let f = rot * f_child;
            (f, rot * n_child + p.cross(&f))
        } else {
            (Vector3::zeros(), Vector3::zeros())
        };
        let f_i = net_force[i] + f_from_child;
        let n_i = net_moment[i] + model.links[i].com.cross(&net_force[i]) + n_from_child;
        tau[i] = n_i.z;
        f_child = f_i;
        n_child = n_i;
    }
    tau
}

/// Gravity torque vector, G(q) = tau(q, 0, 0).
pub fn gravity_vector(model: &RobotModel, q: &JointVector) -> JointVector {
    inverse_dynamics(model, q, &JointVector::zeros(), &JointVector::zeros())
}

/// Coriolis/centripetal torque vector, V(q, qd) = tau(q, qd, 0) - G(q).
pub fn coriolis_vector(model: &RobotModel, q: &JointVector, qdot: &JointVector) -> JointVector {
    inverse_dynamics(model, q, qdot, &JointVector::zeros()) - gravity_vector(model, q)
}

#[derive(Clone, Copy)]
struct CompositeBody {
    mass: f64,
    com: Vector3<f64>,
    inertia: Matrix3<f64>,
}

impl CompositeBody {
    fn shift_inertia(mass: f64, inertia: &Matrix3<f64>, d: &Vector3<f64>) -> Matrix3<f64> {
        inertia + mass * (Matrix3::identity() * d.norm_squared() - d * d.transpose())
    }

    fn merge(&self, other: &CompositeBody) -> CompositeBody {
        let mass = self.mass + other.mass;
        let com = (self.com * self.mass + other.com * other.mass) / mass;
        let inertia = Self::shift_inertia(self.mass, &self.inertia, &(self.com - com))
            + Self::shift_inertia(other.mass, &other.inertia, &(other.com - com));
        CompositeBody { mass, com, inertia }
    }
}

/// Mass matrix via the composite-rigid-body algorithm.
///
/// Equals unit-acceleration extraction, column j = tau(q, 0, e_j) - G(q),
/// and is symmetric by construction.
pub fn mass_matrix(model: &RobotModel, q: &JointVector) -> JointMatrix {
    let transforms = kinematics::link_transforms(q, model.geometry());

    // Composite body supported by each joint, in that joint's frame.
    let mut composites: [CompositeBody; NUM_JOINTS] = std::array::from_fn(|i| CompositeBody {
        mass: model.links[i].mass,
        com: model.links[i].com,
        inertia: model.links[i].inertia,
    });
    for i in (1..NUM_JOINTS).rev() {
        let rot = transforms[i].rotation;
        let child = &composites[i];
        let moved = CompositeBody {
            mass: child.mass,
            com: rot * child.com + transforms[i].translation,
            inertia: rot * child.inertia * rot.transpose(),
        };
        composites[i - 1] = composites[i - 1].merge(&moved);
    }

    let ez = Vector3::z();
    let mut m = JointMatrix::zeros();
    for i in 0..NUM_JOINTS {
        // Spatial force a unit joint-i acceleration exerts on its composite,
        // taken about the frame-i origin.
        let body = &composites[i];
        let mut force = body.mass * ez.cross(&body.com);
        let mut moment = CompositeBody::shift_inertia(body.mass, &body.inertia, &body.com) * ez;
        m[(i, i)] = moment.z;
        for j in (0..i).rev() {
            // Carry the force one frame down the chain.
            let rot = transforms[j + 1].rotation;
            let p = transforms[j + 1].translation;
            force = rot * force;
            moment = rot * moment + p.cross(&force);
            m[(j, i)] = moment.z;
            m[(i, j)] = moment.z;
        }
    }
    m
}

/// Kinetic and potential energy of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energies {
    pub kinetic: f64,
    pub potential: f64,
}

impl Energies {
    pub fn total(&self) -> f64 {
        self.kinetic + self.potential
    }
}

/// Energies from COM kinematics: k = sum(m v^2 + w' I w)/2,
/// u = sum(-m g . P_com + u_ref).
///
/// This route shares no code with the Newton-Euler recursion, which is what
/// makes it a usable oracle for M and G.
pub fn energies(model: &RobotModel, q: &JointVector, qdot: &JointVector) -> Energies {
    let kin = kinematics::com_kinematics(q, qdot, model);
    let mut kinetic = 0.0;
    let mut potential = 0.0;
    for i in 0..NUM_JOINTS {
        let link = &model.links[i];
        let v = kin.com_velocities[i];
        let w = kin.angular_velocities[i];
        let inertia_base = kin.rotations[i] * link.inertia * kin.rotations[i].transpose();
        kinetic += 0.5 * link.mass * v.dot(&v) + 0.5 * w.dot(&(inertia_base * w));
        potential += -link.mass * model.gravity.dot(&kin.com_positions[i]) + model.u_ref;
    }
    Energies { kinetic, potential }
}

/// Joint accelerations for applied torques: solves
/// M(q) qdd = tau - V - G - F(qd).
///
/// `friction`, when given, supplies the per-joint friction torque at the
/// current joint rates. M is positive definite for any valid model, so the
/// solve cannot fail; a non-finite result signals corrupted parameters.
pub fn forward_dynamics(
    model: &RobotModel,
    q: &JointVector,
    qdot: &JointVector,
    tau: &JointVector,
    friction_params: Option<&[FrictionParams; NUM_JOINTS]>,
) -> JointVector {
    let m = mass_matrix(model, q);
    let bias = inverse_dynamics(model, q, qdot, &JointVector::zeros());
    let mut rhs = tau - bias;
    if let Some(params) = friction_params {
        rhs -= friction::friction_torques(params, qdot);
    }
    match m.cholesky() {
        Some(chol) => chol.solve(&rhs),
        // Unreachable for a valid model; surface NaNs rather than panic.
        None => JointVector::repeat(f64::NAN),
    }
}

/// All three torque contributions at one state.
pub fn torque_components(
    model: &RobotModel,
    q: &JointVector,
    qdot: &JointVector,
    qddot: &JointVector,
) -> TorqueComponents {
    let gravitational = gravity_vector(model, q);
    let coriolis = inverse_dynamics(model, q, qdot, &JointVector::zeros()) - gravitational;
    let inertial = mass_matrix(model, q) * qddot;
    TorqueComponents {
        inertial,
        coriolis,
        gravitational,
        total: inertial + coriolis + gravitational,
    }
}
