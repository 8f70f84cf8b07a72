use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::planner::{PlanResult, PlannerId};
use crate::robot::RobotModel;
use crate::scene::Scene;

pub const CSV_HEADER: [&str; 9] = [
    "scene",
    "planner",
    "seed",
    "success",
    "elapsed_s",
    "waypoints",
    "joint_len",
    "trans_len_m",
    "rot_len_rad",
];

/// One planning run. Trajectory statistics are present iff it succeeded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub scene: String,
    pub planner: String,
    pub seed: u64,
    pub success: bool,
    pub elapsed_s: f64,
    pub waypoints: Option<usize>,
    pub joint_len: Option<f64>,
    pub trans_len_m: Option<f64>,
    pub rot_len_rad: Option<f64>,
}

impl TrialRecord {
    pub fn from_result(scene_name: &str, planner: PlannerId, seed: u64, scene: &Scene, r: &PlanResult) -> Self {
        let mut rec = TrialRecord {
            scene: scene_name.to_string(),
            planner: planner.to_string(),
            seed,
            success: r.is_success(),
            elapsed_s: r.elapsed,
            waypoints: None,
            joint_len: None,
            trans_len_m: None,
            rot_len_rad: None,
        };
        if let Some(t) = r.trajectory() {
            let (trans, rot) = workspace_lengths(&scene.robot, &t.waypoints);
            rec.waypoints = Some(t.waypoints.len());
            rec.joint_len = Some(t.joint_length());
            rec.trans_len_m = Some(trans);
            rec.rot_len_rad = Some(rot);
        }
        rec
    }
}

/// Object translation (m) and rotation (rad) summed between consecutive waypoints.
fn workspace_lengths(robot: &RobotModel, waypoints: &[crate::robot::Configuration]) -> (f64, f64) {
    let poses: Vec<_> = waypoints.iter().map(|q| robot.object_pose(q)).collect();
    poses.windows(2).fold((0.0, 0.0), |(t, r), w| {
        (t + (w[1].position - w[0].position).norm(), r + w[0].angle_to(&w[1]))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsRow {
    pub scene: String,
    pub planner: String,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Mean over all trials, failures counted at the time limit.
    pub avg_time: f64,
    /// Mean over successful trials; `None` when there were none.
    pub avg_success_time: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MetricsTable {
    pub rows: Vec<MetricsRow>,
}

impl MetricsTable {
    pub fn get(&self, scene: &str, planner: &str) -> Option<&MetricsRow> {
        self.rows.iter().find(|r| r.scene == scene && r.planner == planner)
    }
}

/// Group records by (scene, planner) in first-appearance order.
pub fn aggregate(records: &[TrialRecord], time_limit: f64) -> MetricsTable {
    let mut keys: Vec<(&str, &str)> = Vec::new();
    for r in records {
        let k = (r.scene.as_str(), r.planner.as_str());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let rows = keys
        .into_iter()
        .map(|(scene, planner)| {
            let group: Vec<&TrialRecord> = records
                .iter()
                .filter(|r| r.scene == scene && r.planner == planner)
                .collect();
            let trials = group.len();
            let ok: Vec<f64> = group.iter().filter(|r| r.success).map(|r| r.elapsed_s).collect();
            let capped: f64 = group
                .iter()
                .map(|r| if r.success { r.elapsed_s } else { time_limit })
                .sum();
            MetricsRow {
                scene: scene.to_string(),
                planner: planner.to_string(),
                trials,
                successes: ok.len(),
                success_rate: ok.len() as f64 / trials as f64,
                avg_time: capped / trials as f64,
                avg_success_time: (!ok.is_empty()).then(|| ok.iter().sum::<f64>() / ok.len() as f64),
            }
        })
        .collect();
    MetricsTable { rows }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// Fixed column order; floats use the shortest round-trip decimal form.
pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.scene.clone(),
            r.planner.clone(),
            r.seed.to_string(),
            r.success.to_string(),
            r.elapsed_s.to_string(),
            opt(&r.waypoints),
            opt(&r.joint_len),
            opt(&r.trans_len_m),
            opt(&r.rot_len_rad),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>, HarnessError> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for rec in rd.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}
