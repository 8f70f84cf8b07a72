//! Robot models: a free-flying object holder and revolute serial chains.

mod config;
mod ik;

pub use config::Configuration;
pub use ik::{ik_solve, IkError, IkOptions};

use rand::Rng;

use crate::geometry::{Pose, Primitive, Vec3};

/// Revolute joint: fixed transform from the previous frame, then a rotation
/// about `axis` (expressed in the joint frame).
#[derive(Clone, Debug, PartialEq)]
pub struct Joint {
    pub origin: Pose,
    pub axis: Vec3,
}

/// Rigid body attached to kinematic frame `frame` (0 is the base frame,
/// k is the frame after joint k).
#[derive(Clone, Debug, PartialEq)]
pub struct Link {
    pub primitive: Primitive,
    pub frame: usize,
    pub offset: Pose,
}

/// Grasped object and its pose relative to the end-effector frame.
#[derive(Clone, Debug, PartialEq)]
pub struct AttachedObject {
    pub primitive: Primitive,
    pub grasp: Pose,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RobotKind {
    /// q = (x, y, z, roll, pitch, yaw); the base frame is q itself.
    FreeFlyer,
    SerialArm { joints: Vec<Joint>, tool: Pose },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobotModel {
    pub kind: RobotKind,
    pub base: Pose,
    pub limits: Vec<(f64, f64)>,
    pub links: Vec<Link>,
    pub object: AttachedObject,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RobotError {
    #[error("invalid robot model: {0}")]
    InvalidModel(String),
}

/// World poses of every link and of the attached object.
#[derive(Clone, Debug)]
pub struct Kinematics {
    pub link_poses: Vec<Pose>,
    pub object_pose: Pose,
}

impl RobotModel {
    pub fn free_flyer(limits: Vec<(f64, f64)>, object: AttachedObject) -> Result<Self, RobotError> {
        if limits.len() != 6 {
            return Err(RobotError::InvalidModel(format!(
                "free_flyer needs 6 limits, got {}",
                limits.len()
            )));
        }
        let model = RobotModel {
            kind: RobotKind::FreeFlyer,
            base: Pose::identity(),
            limits,
            links: Vec::new(),
            object,
        };
        model.check()?;
        Ok(model)
    }

    pub fn serial_arm(
        base: Pose,
        joints: Vec<Joint>,
        tool: Pose,
        limits: Vec<(f64, f64)>,
        links: Vec<Link>,
        object: AttachedObject,
    ) -> Result<Self, RobotError> {
        if joints.is_empty() || joints.len() != limits.len() {
            return Err(RobotError::InvalidModel(format!(
                "serial_arm has {} joints and {} limits",
                joints.len(),
                limits.len()
            )));
        }
        let mut joints = joints;
        for (i, j) in joints.iter_mut().enumerate() {
            j.axis = j.axis.try_normalize(1e-12).ok_or_else(|| {
                RobotError::InvalidModel(format!("joint {i} has a zero axis"))
            })?;
        }
        let model = RobotModel {
            kind: RobotKind::SerialArm { joints, tool },
            base,
            limits,
            links,
            object,
        };
        model.check()?;
        Ok(model)
    }

    fn check(&self) -> Result<(), RobotError> {
        for (i, (lo, hi)) in self.limits.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(RobotError::InvalidModel(format!(
                    "limit {i} is not an increasing finite interval"
                )));
            }
        }
        let frames = self.dof() + 1;
        if let Some(l) = self.links.iter().find(|l| l.frame >= frames) {
            return Err(RobotError::InvalidModel(format!(
                "link attached to frame {} but only {frames} frames exist",
                l.frame
            )));
        }
        Ok(())
    }

    pub fn dof(&self) -> usize {
        self.limits.len()
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            RobotKind::FreeFlyer => "free_flyer",
            RobotKind::SerialArm { .. } => "serial_arm",
        }
    }

    pub fn within_limits(&self, q: &Configuration) -> bool {
        q.len() == self.dof()
            && q
                .iter()
                .zip(&self.limits)
                .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    pub fn clamp(&self, q: &mut Configuration) {
        for (v, (lo, hi)) in q.iter_mut().zip(&self.limits) {
            *v = v.clamp(*lo, *hi);
        }
    }

    /// Whether dimension `i` is a length (free-flyer position) rather than an angle.
    pub fn is_translational(&self, i: usize) -> bool {
        matches!(self.kind, RobotKind::FreeFlyer) && i < 3
    }

    /// Euclidean length of the joint-range box diagonal.
    pub fn range_diagonal(&self) -> f64 {
        self.limits
            .iter()
            .map(|(lo, hi)| (hi - lo).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Kinematic frames 0..=dof (base, then after each joint) and the
    /// end-effector frame.
    pub fn frames(&self, q: &Configuration) -> (Vec<Pose>, Pose) {
        match &self.kind {
            RobotKind::FreeFlyer => {
                let base = Pose::from_xyz_rpy([q[0], q[1], q[2]], [q[3], q[4], q[5]]);
                (vec![base], base)
            }
            RobotKind::SerialArm { joints, tool } => {
                let mut frames = Vec::with_capacity(joints.len() + 1);
                let mut current = self.base;
                frames.push(current);
                for (joint, angle) in joints.iter().zip(q.iter()) {
                    current = current.compose(&joint.origin).compose(&joint_rotation(joint, *angle));
                    frames.push(current);
                }
                let ee = current.compose(tool);
                (frames, ee)
            }
        }
    }

    pub fn forward_kinematics(&self, q: &Configuration) -> Kinematics {
        let (frames, ee) = self.frames(q);
        let link_poses = self
            .links
            .iter()
            .map(|l| frames[l.frame.min(frames.len() - 1)].compose(&l.offset))
            .collect();
        Kinematics {
            link_poses,
            object_pose: ee.compose(&self.object.grasp),
        }
    }

    /// Object pose only; avoids building link poses.
    pub fn object_pose(&self, q: &Configuration) -> Pose {
        self.frames(q).1.compose(&self.object.grasp)
    }

    /// Upper bound on how far any point of any body moves per unit change of
    /// q (Euclidean norm), used to size collision-check steps.
    pub fn lipschitz_bound(&self) -> f64 {
        match &self.kind {
            RobotKind::FreeFlyer => {
                // Translation moves points 1:1; each Euler angle rotates the
                // object about an axis through the base origin.
                let reach = self.object.grasp.position.norm() + self.object.primitive.bounding_radius();
                (1.0 + 3.0 * reach * reach).sqrt()
            }
            RobotKind::SerialArm { joints, tool } => {
                let chain: f64 = joints.iter().map(|j| j.origin.position.norm()).sum::<f64>()
                    + tool.position.norm()
                    + self.object.grasp.position.norm()
                    + self.object.primitive.bounding_radius();
                chain * (joints.len() as f64).sqrt()
            }
        }
    }
}

fn joint_rotation(joint: &Joint, angle: f64) -> Pose {
    let axis = nalgebra::Unit::new_unchecked(joint.axis);
    Pose::new(Vec3::zeros(), nalgebra::UnitQuaternion::from_axis_angle(&axis, angle))
}

/// Uniform sample inside the joint limits.
pub fn sample_configuration<R: Rng + ?Sized>(model: &RobotModel, rng: &mut R) -> Configuration {
    Configuration::new(
        model
            .limits
            .iter()
            .map(|(lo, hi)| rng.gen_range(*lo..=*hi))
            .collect(),
    )
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    pub(crate) fn planar_arm() -> RobotModel {
        let joints = vec![
            Joint {
                origin: Pose::identity(),
                axis: Vec3::z(),
            },
            Joint {
                origin: Pose::from_translation(Vec3::x()),
                axis: Vec3::z(),
            },
        ];
        RobotModel::serial_arm(
            Pose::identity(),
            joints,
            Pose::from_translation(Vec3::x()),
            vec![(-PI, PI); 2],
            Vec::new(),
            AttachedObject {
                primitive: Primitive::sphere(0.05).unwrap(),
                grasp: Pose::identity(),
            },
        )
        .unwrap()
    }

    fn rod_flyer() -> RobotModel {
        RobotModel::free_flyer(
            vec![(-1.0, 1.0), (-1.0, 1.0), (0.0, 1.0), (-PI, PI), (-PI / 2.0, PI / 2.0), (-PI, PI)],
            AttachedObject {
                primitive: Primitive::capsule(0.02, 0.3).unwrap(),
                grasp: Pose::from_xyz_rpy([0.1, 0.0, 0.0], [0.0, PI / 2.0, 0.0]),
            },
        )
        .unwrap()
    }

    #[test]
    fn free_flyer_at_zero_is_grasp() {
        let m = rod_flyer();
        let fk = m.forward_kinematics(&Configuration::zeros(6));
        let g = m.object.grasp;
        assert!((fk.object_pose.position - g.position).norm() < 1e-15);
        assert!(fk.object_pose.angle_to(&g) < 1e-12);
    }

    #[test]
    fn planar_arm_stretched() {
        let p = planar_arm().object_pose(&Configuration::new(vec![0.0, 0.0]));
        assert!((p.position - Vec3::new(2.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn planar_arm_elbow() {
        let p = planar_arm().object_pose(&Configuration::new(vec![PI / 2.0, -PI / 2.0]));
        assert!((p.position - Vec3::new(1.0, 1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn samples_are_reproducible_and_in_limits() {
        let m = rod_flyer();
        let a = sample_configuration(&m, &mut ChaCha8Rng::seed_from_u64(7));
        let b = sample_configuration(&m, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
        assert!(m.within_limits(&a));
    }

    #[test]
    fn sample_mean_is_centered() {
        let m = RobotModel::free_flyer(
            vec![(-1.0, 1.0); 6],
            AttachedObject {
                primitive: Primitive::sphere(0.1).unwrap(),
                grasp: Pose::identity(),
            },
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut sum = vec![0.0; 6];
        let n = 10_000;
        for _ in 0..n {
            let q = sample_configuration(&m, &mut rng);
            for (s, v) in sum.iter_mut().zip(q.iter()) {
                *s += v;
            }
        }
        for s in sum {
            assert!((s / n as f64).abs() < 0.05);
        }
    }

    #[test]
    fn rejects_bad_limits() {
        let obj = AttachedObject {
            primitive: Primitive::sphere(0.1).unwrap(),
            grasp: Pose::identity(),
        };
        assert!(RobotModel::free_flyer(vec![(1.0, 0.0); 6], obj.clone()).is_err());
        assert!(RobotModel::free_flyer(vec![(0.0, 1.0); 5], obj).is_err());
    }
}
