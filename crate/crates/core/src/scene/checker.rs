use std::sync::atomic::{AtomicU64, Ordering};

use super::{Aabb, Scene};
use crate::geometry::{pairwise_distance, segment_distance, Pose, Primitive, Vec3};
use crate::robot::{Configuration, RobotModel};

#[derive(Clone, Debug)]
struct Placed {
    primitive: Primitive,
    pose: Pose,
    radius: f64,
}

/// Membership test for the free configuration space.
///
/// Holds its own copy of the scene geometry. Every `config_valid` call bumps
/// an atomic counter; planners use it, together with the count of
/// nearest-neighbor distance evaluations they report, as a deterministic
/// effort budget.
#[derive(Debug)]
pub struct ValidityChecker {
    robot: RobotModel,
    workspace: Aabb,
    obstacles: Vec<Placed>,
    margin: f64,
    resolution: f64,
    diagonal: f64,
    checks: AtomicU64,
    neighbor_evals: AtomicU64,
}

impl Clone for ValidityChecker {
    fn clone(&self) -> Self {
        ValidityChecker {
            robot: self.robot.clone(),
            workspace: self.workspace,
            obstacles: self.obstacles.clone(),
            margin: self.margin,
            resolution: self.resolution,
            diagonal: self.diagonal,
            checks: AtomicU64::new(self.checks()),
            neighbor_evals: AtomicU64::new(self.neighbor_evals()),
        }
    }
}

impl ValidityChecker {
    /// # Panics
    /// When `margin` is negative or `resolution` is outside `(0, 1]`.
    pub fn new(scene: &Scene, margin: f64, resolution: f64) -> Self {
        assert!(margin >= 0.0, "clearance margin must be non-negative");
        assert!(
            resolution > 0.0 && resolution <= 1.0,
            "resolution must lie in (0, 1]"
        );
        let obstacles = scene
            .sub_obstacles()
            .map(|s| Placed {
                primitive: s.sub.primitive,
                pose: s.sub.pose,
                radius: s.sub.primitive.bounding_radius(),
            })
            .collect();
        ValidityChecker {
            robot: scene.robot.clone(),
            workspace: scene.workspace,
            obstacles,
            margin,
            resolution,
            diagonal: scene.robot.range_diagonal(),
            checks: AtomicU64::new(0),
            neighbor_evals: AtomicU64::new(0),
        }
    }

    pub fn robot(&self) -> &RobotModel {
        &self.robot
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Copy of this checker with a different resolution and a fresh counter.
    pub fn with_resolution(&self, resolution: f64) -> Self {
        let mut c = self.clone();
        assert!(resolution > 0.0 && resolution <= 1.0);
        c.resolution = resolution;
        c.checks = AtomicU64::new(0);
        c.neighbor_evals = AtomicU64::new(0);
        c
    }

    /// Number of `config_valid` evaluations so far.
    pub fn checks(&self) -> u64 {
        self.checks.load(Ordering::Relaxed)
    }

    /// Add `n` configuration-distance evaluations made by a neighbor search.
    pub fn record_neighbor_evals(&self, n: u64) {
        self.neighbor_evals.fetch_add(n, Ordering::Relaxed);
    }

    pub fn neighbor_evals(&self) -> u64 {
        self.neighbor_evals.load(Ordering::Relaxed)
    }

    /// Maximum C-space spacing between checked states on a segment.
    pub fn step_length(&self) -> f64 {
        self.resolution * self.diagonal
    }

    fn clear_of_obstacles(&self, prim: &Primitive, pose: &Pose) -> bool {
        let r = prim.bounding_radius();
        self.obstacles.iter().all(|o| {
            let gap = (o.pose.position - pose.position).norm() - r - o.radius;
            gap > self.margin
                || pairwise_distance(prim, pose, &o.primitive, &o.pose).distance > self.margin
        })
    }

    fn inside_workspace(&self, prim: &Primitive, pose: &Pose) -> bool {
        let (lo, hi) = prim.aabb(pose);
        self.workspace.contains_box(&lo, &hi)
    }

    /// True iff `q` is within limits, every body lies inside the workspace,
    /// and every body clears every sub-obstacle by more than the margin.
    pub fn config_valid(&self, q: &Configuration) -> bool {
        self.checks.fetch_add(1, Ordering::Relaxed);
        if !self.robot.within_limits(q) {
            return false;
        }
        let fk = self.robot.forward_kinematics(q);
        let obj = &self.robot.object.primitive;
        if !self.inside_workspace(obj, &fk.object_pose) {
            return false;
        }
        for (link, pose) in self.robot.links.iter().zip(&fk.link_poses) {
            if !self.inside_workspace(&link.primitive, pose) {
                return false;
            }
        }
        if !self.clear_of_obstacles(obj, &fk.object_pose) {
            return false;
        }
        self.robot
            .links
            .iter()
            .zip(&fk.link_poses)
            .all(|(link, pose)| self.clear_of_obstacles(&link.primitive, pose))
    }

    /// Object-only check at a task-space pose; ignores robot links.
    pub fn pose_valid(&self, pose: &Pose) -> bool {
        self.clear_of_obstacles(&self.robot.object.primitive, pose)
    }

    /// Resolution-based straight-segment check at the configured resolution.
    pub fn segment_valid(&self, q1: &Configuration, q2: &Configuration) -> bool {
        self.segment_valid_at(q1, q2, self.resolution)
    }

    /// Checks `2^k + 1` evenly spaced states, with `2^k` the smallest power of
    /// two keeping the spacing within `resolution` times the range diagonal.
    /// A finer resolution therefore always checks a superset of states.
    /// States are visited coarse to fine so blocked segments fail early.
    pub fn segment_valid_at(&self, q1: &Configuration, q2: &Configuration, resolution: f64) -> bool {
        let (a, b) = if q2.lex_cmp(q1).is_lt() { (q2, q1) } else { (q1, q2) };
        if !self.config_valid(a) {
            return false;
        }
        let len = a.distance(b);
        if len == 0.0 {
            return true;
        }
        if !self.config_valid(b) {
            return false;
        }
        let step = resolution * self.diagonal;
        let mut n: u64 = 1;
        while len / (n as f64) > step {
            n *= 2;
        }
        let mut stride = n;
        while stride > 1 {
            let half = stride / 2;
            let mut k = half;
            while k < n {
                let t = k as f64 / n as f64;
                if !self.config_valid(&a.lerp(b, t)) {
                    return false;
                }
                k += stride;
            }
            stride = half;
        }
        true
    }

    /// Exact test that the straight workspace segment keeps more than the
    /// margin from every sub-obstacle.
    pub fn workspace_segment_free(&self, x1: &Vec3, x2: &Vec3) -> bool {
        let mid = (x1 + x2) * 0.5;
        let half = (x2 - x1).norm() * 0.5;
        self.obstacles.iter().all(|o| {
            (o.pose.position - mid).norm() - half - o.radius > self.margin
                || segment_distance(x1, x2, &o.primitive, &o.pose) > self.margin
        })
    }

    /// Smallest signed distance from the point to any sub-obstacle.
    pub fn point_clearance(&self, p: &Vec3) -> f64 {
        self.obstacles
            .iter()
            .map(|o| o.primitive.signed_distance_to_point(&o.pose, p))
            .fold(f64::INFINITY, f64::min)
    }
}
