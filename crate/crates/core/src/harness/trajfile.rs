//! Plain-text trajectory files: `# key: value` header lines, then one
//! space-separated configuration per line.

use std::fmt::Write as _;

use super::HarnessError;
use crate::lowlevel::Trajectory;
use crate::robot::Configuration;
use crate::scene::{Scene, ValidityChecker};

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryFile {
    pub scene: String,
    pub seed: u64,
    pub planner: String,
    pub resolution: f64,
    pub elapsed_s: f64,
    pub waypoints: Vec<Configuration>,
}

pub fn write_trajectory(scene: &str, seed: u64, planner: &str, elapsed_s: f64, t: &Trajectory) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# scene: {scene}");
    let _ = writeln!(s, "# seed: {seed}");
    let _ = writeln!(s, "# planner: {planner}");
    let _ = writeln!(s, "# resolution: {}", t.resolution);
    let _ = writeln!(s, "# elapsed_s: {elapsed_s}");
    for q in &t.waypoints {
        let row: Vec<String> = q.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

pub fn read_trajectory(text: &str) -> Result<TrajectoryFile, HarnessError> {
    let mut f = TrajectoryFile {
        scene: String::new(),
        seed: 0,
        planner: String::new(),
        resolution: 0.0,
        elapsed_s: 0.0,
        waypoints: Vec::new(),
    };
    for (i, line) in text.lines().enumerate() {
        let err = |message: String| HarnessError::TrajectoryFormat { line: i + 1, message };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            let Some((key, value)) = header.split_once(':') else {
                continue;
            };
            let value = value.trim();
            let num = |v: &str| v.parse::<f64>().map_err(|e| err(format!("{key}: {e}")));
            match key.trim() {
                "scene" => f.scene = value.to_string(),
                "planner" => f.planner = value.to_string(),
                "seed" => f.seed = value.parse().map_err(|e| err(format!("seed: {e}")))?,
                "resolution" => f.resolution = num(value)?,
                "elapsed_s" => f.elapsed_s = num(value)?,
                _ => {}
            }
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
        let row = row.map_err(|e| err(e.to_string()))?;
        if let Some(first) = f.waypoints.first() {
            if first.len() != row.len() {
                return Err(err(format!("expected {} values, got {}", first.len(), row.len())));
            }
        }
        f.waypoints.push(Configuration::new(row));
    }
    if f.waypoints.is_empty() {
        return Err(HarnessError::TrajectoryFormat {
            line: 0,
            message: "no waypoints".into(),
        });
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ValidationError {
    #[error("waypoints have {got} values, robot has {want} joints")]
    Dimension { got: usize, want: usize },
    #[error("{0} does not match the scene")]
    Endpoint(&'static str),
    #[error("segment {0} is in collision")]
    Segment(usize),
}

/// Exact endpoint match plus every segment checked with `checker`.
pub fn validate_waypoints(
    scene: &Scene,
    waypoints: &[Configuration],
    checker: &ValidityChecker,
) -> Result<(), ValidationError> {
    let want = scene.robot.dof();
    if let Some(q) = waypoints.iter().find(|q| q.len() != want) {
        return Err(ValidationError::Dimension { got: q.len(), want });
    }
    if waypoints.first() != Some(&scene.start) {
        return Err(ValidationError::Endpoint("start"));
    }
    if waypoints.last() != Some(&scene.goal) {
        return Err(ValidationError::Endpoint("goal"));
    }
    if waypoints.len() == 1 && !checker.config_valid(&waypoints[0]) {
        return Err(ValidationError::Segment(0));
    }
    for (i, w) in waypoints.windows(2).enumerate() {
        if !checker.segment_valid(&w[0], &w[1]) {
            return Err(ValidationError::Segment(i));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let t = Trajectory {
            waypoints: vec![
                Configuration::new(vec![0.1, -1.0 / 3.0, 2.0]),
                Configuration::new(vec![1e-17, 0.7, std::f64::consts::PI]),
            ],
            resolution: 5e-4,
            source: vec![],
        };
        let text = write_trajectory("frame", 3, "tapom", 0.25, &t);
        let back = read_trajectory(&text).unwrap();
        assert_eq!(back.waypoints, t.waypoints);
        assert_eq!(back.scene, "frame");
        assert_eq!(back.seed, 3);
        assert_eq!(back.resolution, 5e-4);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let r = read_trajectory("1 2 3\n1 2\n");
        assert!(matches!(r, Err(HarnessError::TrajectoryFormat { line: 2, .. })));
        assert!(read_trajectory("# scene: x\n").is_err());
        assert!(read_trajectory("1 a 3\n").is_err());
    }
}
