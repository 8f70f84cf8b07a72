//! Benchmark runner, metrics, fixtures and file exports.

mod export;
mod fixtures;
mod metrics;
mod svg;
mod trajfile;

pub use export::topology_dot;
pub use fixtures::{fixture, fixture_names, manifest, Fixture, FixtureCalibration, BENCH_FIXTURES};
pub use metrics::{aggregate, read_csv, write_csv, MetricsRow, MetricsTable, TrialRecord, CSV_HEADER};
pub use svg::render_svg;
pub use trajfile::{read_trajectory, validate_waypoints, write_trajectory, TrajectoryFile, ValidationError};

use crate::channelgraph::{build_channel_graph, ChannelGraph, GraphError};
use crate::planner::{make_checker, run_planner, FailureReason, Outcome, PlannerConfig, PlannerId};
use crate::scene::Scene;
use crate::topology::{
    build_topo_graph, detect_simple_loops, extract_channels, ChannelExtraction, Loop, TopoGraph, TopologyError,
};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    EmptyInput(String),
    #[error("scene {scene}: {message}")]
    InvalidScene { scene: String, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("trajectory file line {line}: {message}")]
    TrajectoryFormat { line: usize, message: String },
}

/// Run every planner on every scene for `trials` seeds starting at
/// `cfg.seed`. Trials run sequentially.
pub fn run_benchmark(
    scenes: &[(String, Scene)],
    planners: &[PlannerId],
    trials: usize,
    cfg: &PlannerConfig,
) -> Result<(Vec<TrialRecord>, MetricsTable), HarnessError> {
    if scenes.is_empty() {
        return Err(HarnessError::EmptyInput("no scenes".into()));
    }
    if planners.is_empty() {
        return Err(HarnessError::EmptyInput("no planners".into()));
    }
    if trials == 0 {
        return Err(HarnessError::EmptyInput("trials must be at least 1".into()));
    }
    let mut records = Vec::with_capacity(scenes.len() * planners.len() * trials);
    for (name, scene) in scenes {
        for &planner in planners {
            for t in 0..trials {
                let mut trial_cfg = cfg.clone();
                trial_cfg.seed = cfg.seed.wrapping_add(t as u64);
                let result = run_planner(scene, planner, &trial_cfg);
                if let Outcome::Failure(FailureReason::InvalidScene(message)) = &result.outcome {
                    return Err(HarnessError::InvalidScene {
                        scene: name.clone(),
                        message: message.clone(),
                    });
                }
                records.push(TrialRecord::from_result(name, planner, trial_cfg.seed, scene, &result));
            }
        }
    }
    let table = aggregate(&records, cfg.time_limit);
    Ok((records, table))
}

/// High-level structures of a scene, computed the same way `plan` does.
pub struct Analysis {
    pub topology: TopoGraph,
    pub loops: Vec<Loop>,
    pub extraction: ChannelExtraction,
    pub graph: Result<ChannelGraph, GraphError>,
}

/// Topology, loops, channels and the channel graph for `scene`; the graph is
/// skipped (left as `NoChannels`) when `with_graph` is false.
pub fn analyze(scene: &Scene, cfg: &PlannerConfig, with_graph: bool) -> Result<Analysis, TopologyError> {
    let topology = build_topo_graph(scene, cfg.contact_tol)?;
    let loops = detect_simple_loops(&topology, cfg.max_loop_len);
    let extraction = extract_channels(&loops, scene, &cfg.filter_params());
    let graph = if with_graph {
        let checker = make_checker(scene, cfg);
        let start = scene.robot.object_pose(&scene.start).position;
        let goal = scene.robot.object_pose(&scene.goal).position;
        build_channel_graph(&extraction.channels, &checker, &start, &goal, &cfg.graph_params(), cfg.seed)
    } else {
        Err(GraphError::NoChannels)
    };
    Ok(Analysis {
        topology,
        loops,
        extraction,
        graph,
    })
}
