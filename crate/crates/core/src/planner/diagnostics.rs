use serde::Serialize;

use crate::robot::{Configuration, RobotModel};
use crate::topology::Channel;

/// Time spent per phase, on the run's clock.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PhaseTimings {
    pub topology: f64,
    pub channel_graph: f64,
    pub keyframes: f64,
    pub connection: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub topo_nodes: usize,
    pub topo_edges: usize,
    pub loop_count: usize,
    pub channel_count: usize,
    /// Obstacle ids of each rejected loop with the reason.
    pub rejected: Vec<(Vec<String>, String)>,
    pub candidate_paths: usize,
    pub paths_tried: usize,
    pub chosen_path: Vec<String>,
    pub sequences_attempted: usize,
    pub budgets: Vec<Vec<f64>>,
    pub fallback: bool,
    /// Whether the object passes through the chosen channels in order.
    pub crosses_channels: Option<bool>,
    pub checks: u64,
}

/// Step between object-position samples when tracing a trajectory.
const TRACE_STEP: f64 = 0.01;

/// True when the object's reference point crosses every channel plane inside
/// its polygon, in the given order.
pub fn crosses_channels(waypoints: &[Configuration], robot: &RobotModel, channels: &[&Channel]) -> bool {
    let mut points = Vec::new();
    for w in waypoints.windows(2) {
        let n = ((w[0].distance(&w[1]) / TRACE_STEP).ceil() as usize).max(1);
        for i in 0..n {
            let q = w[0].lerp(&w[1], i as f64 / n as f64);
            points.push(robot.object_pose(&q).position);
        }
    }
    if let Some(last) = waypoints.last() {
        points.push(robot.object_pose(last).position);
    }

    let mut from = 0;
    'channels: for c in channels {
        for k in from..points.len().saturating_sub(1) {
            let (a, b) = (points[k], points[k + 1]);
            let (da, db) = (c.plane.signed_distance(&a), c.plane.signed_distance(&b));
            if da == db || da.signum() == db.signum() && da != 0.0 {
                continue;
            }
            let t = da / (da - db);
            let hit = a + (b - a) * t;
            if c.polygon.contains(&c.plane.project(&hit), 1e-6) {
                from = k + 1;
                continue 'channels;
            }
        }
        return false;
    }
    true
}
