use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ChannelEdge, NodeId};
use crate::robot::{ik_solve, Configuration, IkOptions, RobotKind, RobotModel};
use crate::scene::ValidityChecker;
use crate::topology::{Channel, ChannelSampler, ALIGNMENT_CONE};

/// How passability compares the opening with the object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassMode {
    /// Incircle radius over the object's cross-section radius.
    Incircle,
    /// Opening area over the object's cross-section area.
    AreaRatio,
}

pub(super) fn make_edge(a: NodeId, b: NodeId, visible: usize, n_pairs: usize, d: f64) -> ChannelEdge {
    let xi = if n_pairs == 0 {
        0.0
    } else {
        visible as f64 / n_pairs as f64
    };
    let d = d.max(1e-6);
    ChannelEdge {
        a,
        b,
        visible,
        n_pairs,
        xi,
        d,
        w_e: xi / d,
    }
}

/// Reachability and passability of one channel.
pub fn node_weights<R: Rng + ?Sized>(
    c: &Channel,
    checker: &ValidityChecker,
    robot: &RobotModel,
    n_samples: usize,
    mode: PassMode,
    rng: &mut R,
) -> (f64, f64) {
    let object = &robot.object.primitive;
    let w_pass = match mode {
        PassMode::Incircle => (c.incircle_radius / object.cross_section_radius()).min(1.0),
        PassMode::AreaRatio => (c.area / object.cross_section_area()).min(1.0),
    };
    let Some(sampler) = ChannelSampler::new(c, object, 0.0, ALIGNMENT_CONE) else {
        return (0.0, w_pass);
    };
    if n_samples == 0 {
        return (0.0, w_pass);
    }
    let opts = IkOptions::default();
    let seed = ik_solve(robot, &sampler.center_pose(), &mid_configuration(robot), &opts)
        .unwrap_or_else(|_| mid_configuration(robot));
    let serial = matches!(robot.kind, RobotKind::SerialArm { .. });
    let mut ok = 0usize;
    for _ in 0..n_samples {
        let pose = sampler.sample(rng);
        if serial && !checker.pose_valid(&pose) {
            continue;
        }
        if let Ok(q) = ik_solve(robot, &pose, &seed, &opts) {
            if checker.config_valid(&q) {
                ok += 1;
            }
        }
    }
    (ok as f64 / n_samples as f64, w_pass)
}

pub fn mid_configuration(robot: &RobotModel) -> Configuration {
    Configuration::new(robot.limits.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect())
}

/// Visibility ratio between uniformly drawn points of two openings, over the
/// distance between their centers. Endpoint ids are placeholders.
pub fn edge_weight<R: Rng + ?Sized>(
    ci: &Channel,
    cj: &Channel,
    checker: &ValidityChecker,
    n_pairs: usize,
    rng: &mut R,
) -> ChannelEdge {
    let mut visible = 0;
    for _ in 0..n_pairs {
        let a = ci.lift(&ci.polygon.sample_uniform(rng.gen(), rng.gen(), rng.gen()));
        let b = cj.lift(&cj.polygon.sample_uniform(rng.gen(), rng.gen(), rng.gen()));
        if checker.workspace_segment_free(&a, &b) {
            visible += 1;
        }
    }
    make_edge(
        NodeId::Channel(0),
        NodeId::Channel(1),
        visible,
        n_pairs,
        (ci.center - cj.center).norm(),
    )
}
