use nalgebra::{DMatrix, DVector, Vector6};

use super::{Configuration, RobotKind, RobotModel};
use crate::geometry::{Pose, Vec3};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IkOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub damping: f64,
    pub max_step: f64,
}

impl Default for IkOptions {
    fn default() -> Self {
        IkOptions {
            tol: 1e-4,
            max_iters: 200,
            damping: 1e-2,
            max_step: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IkError {
    #[error("no IK solution: {0}")]
    NoSolution(String),
}

/// Combined pose error: max of position error and geodesic angle.
pub fn pose_error(a: &Pose, b: &Pose) -> f64 {
    (a.position - b.position).norm().max(a.angle_to(b))
}

/// Configuration placing the attached object at `target`.
pub fn ik_solve(
    model: &RobotModel,
    target: &Pose,
    seed: &Configuration,
    opts: &IkOptions,
) -> Result<Configuration, IkError> {
    match &model.kind {
        RobotKind::FreeFlyer => free_flyer_ik(model, target),
        RobotKind::SerialArm { .. } => serial_ik(model, target, seed, opts),
    }
}

fn wrap_into(v: f64, lo: f64, hi: f64) -> Option<f64> {
    let tau = std::f64::consts::TAU;
    [v, v - tau, v + tau]
        .into_iter()
        .find(|c| *c >= lo && *c <= hi)
}

fn free_flyer_ik(model: &RobotModel, target: &Pose) -> Result<Configuration, IkError> {
    let base = target.compose(&model.object.grasp.inverse());
    let p = base.position;
    let (r, pi, y) = base.orientation.euler_angles();
    let pi_ = std::f64::consts::PI;
    // The same rotation has a second ZYX reading with pitch mirrored about pi/2.
    let candidates = [[r, pi, y], [r + pi_, pi_ - pi, y + pi_]];
    for angles in candidates {
        let mut values = vec![p.x, p.y, p.z];
        let mut ok = true;
        for (k, a) in angles.iter().enumerate() {
            let (lo, hi) = model.limits[3 + k];
            match wrap_into(*a, lo, hi) {
                Some(v) => values.push(v),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        let q = Configuration::new(values);
        if ok && model.within_limits(&q) {
            return Ok(q);
        }
    }
    Err(IkError::NoSolution("target outside free-flyer limits".into()))
}

fn serial_ik(
    model: &RobotModel,
    target: &Pose,
    seed: &Configuration,
    opts: &IkOptions,
) -> Result<Configuration, IkError> {
    let RobotKind::SerialArm { joints, .. } = &model.kind else {
        unreachable!()
    };
    let n = joints.len();
    let mut q = seed.clone();
    model.clamp(&mut q);
    let mut history: Vec<f64> = Vec::with_capacity(opts.max_iters + 1);
    for it in 0..=opts.max_iters {
        let (frames, ee) = model.frames(&q);
        let current = ee.compose(&model.object.grasp);
        let err = pose_error(&current, target);
        if err < opts.tol {
            if model.within_limits(&q) {
                return Ok(q);
            }
            return Err(IkError::NoSolution("converged outside limits".into()));
        }
        history.push(err);
        if it == opts.max_iters {
            break;
        }
        if history.len() > 10 && history[history.len() - 11] - err < 1e-12 {
            return Err(IkError::NoSolution(format!(
                "stalled at error {err:.3e} after {it} iterations"
            )));
        }

        let dp = target.position - current.position;
        let dr = (target.orientation * current.orientation.inverse()).scaled_axis();
        let e = Vector6::new(dp.x, dp.y, dp.z, dr.x, dr.y, dr.z);

        let mut jac = DMatrix::<f64>::zeros(6, n);
        for (i, joint) in joints.iter().enumerate() {
            // Frame i is before joint i; its origin transform places the axis.
            let pre = frames[i].compose(&joint.origin);
            let axis: Vec3 = pre.rotate(&joint.axis);
            let lin = axis.cross(&(current.position - pre.position));
            for r in 0..3 {
                jac[(r, i)] = lin[r];
                jac[(r + 3, i)] = axis[r];
            }
        }
        let jjt = &jac * jac.transpose() + DMatrix::<f64>::identity(6, 6) * opts.damping.powi(2);
        let Some(y) = jjt.lu().solve(&DVector::from_column_slice(e.as_slice())) else {
            return Err(IkError::NoSolution("singular damped system".into()));
        };
        let mut dq = jac.transpose() * y;
        let peak = dq.amax();
        if peak > opts.max_step {
            dq *= opts.max_step / peak;
        }
        for (v, d) in q.iter_mut().zip(dq.iter()) {
            *v += d;
        }
        model.clamp(&mut q);
    }
    Err(IkError::NoSolution(format!(
        "max_iters {} reached",
        opts.max_iters
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Primitive;
    use crate::robot::{sample_configuration, AttachedObject, Joint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn spatial_arm() -> RobotModel {
        let joints = vec![
            Joint { origin: Pose::from_translation(Vec3::new(0.0, 0.0, 0.1)), axis: Vec3::z() },
            Joint { origin: Pose::from_translation(Vec3::new(0.0, 0.0, 0.1)), axis: Vec3::y() },
            Joint { origin: Pose::from_translation(Vec3::new(0.0, 0.0, 0.3)), axis: Vec3::y() },
            Joint { origin: Pose::from_translation(Vec3::new(0.0, 0.0, 0.3)), axis: Vec3::z() },
            Joint { origin: Pose::from_translation(Vec3::new(0.0, 0.0, 0.05)), axis: Vec3::y() },
            Joint { origin: Pose::from_translation(Vec3::new(0.0, 0.0, 0.05)), axis: Vec3::z() },
        ];
        RobotModel::serial_arm(
            Pose::identity(),
            joints,
            Pose::from_translation(Vec3::new(0.0, 0.0, 0.05)),
            vec![(-2.5, 2.5); 6],
            Vec::new(),
            AttachedObject {
                primitive: Primitive::capsule(0.02, 0.2).unwrap(),
                grasp: Pose::from_translation(Vec3::new(0.0, 0.0, 0.1)),
            },
        )
        .unwrap()
    }

    #[test]
    fn free_flyer_is_exact() {
        let m = RobotModel::free_flyer(
            vec![(-1.0, 1.0), (-1.0, 1.0), (0.0, 1.0), (-PI, PI), (-PI / 2.0, PI / 2.0), (-PI, PI)],
            AttachedObject {
                primitive: Primitive::capsule(0.02, 0.3).unwrap(),
                grasp: Pose::from_xyz_rpy([0.0, 0.0, 0.0], [0.0, PI / 2.0, 0.0]),
            },
        )
        .unwrap();
        let q_star = Configuration::new(vec![0.2, -0.3, 0.5, 0.4, -0.7, 2.9]);
        let target = m.object_pose(&q_star);
        let q = ik_solve(&m, &target, &Configuration::zeros(6), &IkOptions::default()).unwrap();
        assert!(pose_error(&m.object_pose(&q), &target) < 1e-12);
    }

    #[test]
    fn serial_round_trip() {
        let m = spatial_arm();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let opts = IkOptions::default();
        let mut ok = 0;
        for _ in 0..100 {
            let q_star = sample_configuration(&m, &mut rng);
            let target = m.object_pose(&q_star);
            let mut seed = q_star.clone();
            let mut delta: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = delta.iter().map(|d| d * d).sum::<f64>().sqrt();
            delta.iter_mut().for_each(|d| *d *= 0.1 / norm);
            for (s, d) in seed.iter_mut().zip(&delta) {
                *s += d;
            }
            m.clamp(&mut seed);
            match ik_solve(&m, &target, &seed, &opts) {
                Ok(q) => {
                    assert!(m.within_limits(&q));
                    assert!(pose_error(&m.object_pose(&q), &target) < opts.tol);
                    ok += 1;
                }
                Err(IkError::NoSolution(_)) => {}
            }
        }
        assert!(ok >= 95, "{ok}/100 round trips");
    }

    #[test]
    fn unreachable_target_fails() {
        let m = crate::robot::tests::planar_arm();
        let target = Pose::from_translation(Vec3::new(3.0, 0.0, 0.0));
        let r = ik_solve(&m, &target, &Configuration::zeros(2), &IkOptions::default());
        assert!(matches!(r, Err(IkError::NoSolution(_))));
    }
}
