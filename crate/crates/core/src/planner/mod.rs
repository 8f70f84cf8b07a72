//! End-to-end planning: topology, channel graph, keyframes, connection.

mod config;
mod diagnostics;

pub use config::{default_config, PlannerConfig, PlannerId};
pub use diagnostics::{crosses_channels, Diagnostics, PhaseTimings};

use std::collections::HashMap;

use crate::channelgraph::{build_channel_graph, enumerate_paths, rank_paths, ChannelPath, GraphError, NodeId};
use crate::clock::Clock;
use crate::lowlevel::{
    birrt, birrt_connect, connect_and_merge, get_all_paths, grow_local_rrt, prioritize, sample_keyframes,
    ExplorationTree, Keyframe, Region, RrtOptions, RrtVariant, Trajectory,
};
use crate::rng;
use crate::robot::Configuration;
use crate::scene::{Scene, ValidityChecker};
use crate::topology::{build_topo_graph, detect_simple_loops, extract_channels, Channel};

#[derive(Clone, Debug, PartialEq)]
pub enum FailureReason {
    Timeout,
    NoChannelsFallbackFailed,
    AllSequencesFailed,
    InvalidScene(String),
}

impl std::fmt::Display for FailureReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FailureReason::Timeout => f.write_str("timeout"),
            FailureReason::NoChannelsFallbackFailed => f.write_str("no channels and fallback failed"),
            FailureReason::AllSequencesFailed => f.write_str("all keyframe sequences failed"),
            FailureReason::InvalidScene(m) => write!(f, "invalid scene: {m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Success(Trajectory),
    Failure(FailureReason),
}

#[derive(Clone, Debug)]
pub struct PlanResult {
    pub outcome: Outcome,
    /// Seconds on the configured clock (nominal in check-budget mode).
    pub elapsed: f64,
    pub timings: PhaseTimings,
    pub diagnostics: Diagnostics,
}

impl PlanResult {
    pub fn trajectory(&self) -> Option<&Trajectory> {
        match &self.outcome {
            Outcome::Success(t) => Some(t),
            Outcome::Failure(_) => None,
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self.outcome, Outcome::Success(_))
    }
}

struct Run<'a> {
    scene: &'a Scene,
    cfg: &'a PlannerConfig,
    checker: &'a ValidityChecker,
    clock: Clock<'a>,
    timings: PhaseTimings,
    diag: Diagnostics,
    step: f64,
}

/// Checker configured from `cfg` for `scene`.
pub fn make_checker(scene: &Scene, cfg: &PlannerConfig) -> ValidityChecker {
    ValidityChecker::new(scene, cfg.clearance_margin, cfg.resolution)
}

/// Run planner `id` on `scene`.
pub fn run_planner(scene: &Scene, id: PlannerId, cfg: &PlannerConfig) -> PlanResult {
    let mut cfg = cfg.clone();
    match id {
        PlannerId::Tapom => plan(scene, &cfg),
        PlannerId::TapomNoHighlevel => {
            cfg.high_level = false;
            plan(scene, &cfg)
        }
        PlannerId::TapomNoPrioritize => {
            cfg.prioritize = false;
            plan(scene, &cfg)
        }
        PlannerId::RrtConnect => baseline(scene, &cfg, RrtVariant::Connect),
        PlannerId::BirrtPlain => baseline(scene, &cfg, RrtVariant::ExtendExtend),
    }
}

fn invalid(reason: String) -> PlanResult {
    PlanResult {
        outcome: Outcome::Failure(FailureReason::InvalidScene(reason)),
        elapsed: 0.0,
        timings: PhaseTimings::default(),
        diagnostics: Diagnostics::default(),
    }
}

fn check_endpoints(scene: &Scene, checker: &ValidityChecker) -> Result<(), String> {
    for (name, q) in [("start", &scene.start), ("goal", &scene.goal)] {
        if !checker.config_valid(q) {
            return Err(format!("{name} is not collision-free at the configured margin"));
        }
    }
    Ok(())
}

fn baseline(scene: &Scene, cfg: &PlannerConfig, variant: RrtVariant) -> PlanResult {
    if let Err(e) = cfg.validate() {
        return invalid(e);
    }
    let checker = make_checker(scene, cfg);
    if let Err(e) = check_endpoints(scene, &checker) {
        return invalid(e);
    }
    let clock = Clock::start(cfg.budget_mode, &checker);
    let opts = RrtOptions {
        step: cfg.step_fraction * scene.robot.range_diagonal(),
        shortcut: false,
        variant,
    };
    let mut r = rng::stream(cfg.seed, rng::ids::FALLBACK);
    let res = birrt(&scene.start, &scene.goal, &checker, &clock, cfg.time_limit, &opts, &mut r);
    let elapsed = clock.elapsed();
    let outcome = match res {
        Ok(waypoints) => Outcome::Success(Trajectory {
            waypoints,
            resolution: cfg.resolution,
            source: vec!["start".into(), "goal".into()],
        }),
        Err(_) => Outcome::Failure(FailureReason::Timeout),
    };
    let diagnostics = Diagnostics {
        checks: checker.checks(),
        ..Diagnostics::default()
    };
    PlanResult {
        outcome,
        elapsed,
        timings: PhaseTimings {
            connection: elapsed,
            ..PhaseTimings::default()
        },
        diagnostics,
    }
}

/// Full hierarchical pipeline with fallbacks and the global deadline.
pub fn plan(scene: &Scene, cfg: &PlannerConfig) -> PlanResult {
    if let Err(e) = cfg.validate() {
        return invalid(e);
    }
    let checker = make_checker(scene, cfg);
    if let Err(e) = check_endpoints(scene, &checker) {
        return invalid(e);
    }
    let mut run = Run {
        scene,
        cfg,
        checker: &checker,
        clock: Clock::start(cfg.budget_mode, &checker),
        timings: PhaseTimings::default(),
        diag: Diagnostics::default(),
        step: cfg.step_fraction * scene.robot.range_diagonal(),
    };
    let outcome = run.execute();
    run.diag.checks = checker.checks();
    PlanResult {
        outcome,
        elapsed: run.clock.elapsed(),
        timings: run.timings,
        diagnostics: run.diag,
    }
}

type ChannelPrep = Option<Vec<Keyframe>>;

impl Run<'_> {
    fn timed_out(&self) -> bool {
        self.clock.past(self.cfg.time_limit)
    }

    fn execute(&mut self) -> Outcome {
        if self.timed_out() {
            return Outcome::Failure(FailureReason::Timeout);
        }
        if !self.cfg.high_level {
            return self.fallback(FailureReason::Timeout);
        }

        let t0 = self.clock.elapsed();
        let graph = match build_topo_graph(self.scene, self.cfg.contact_tol) {
            Ok(g) => g,
            Err(e) => return Outcome::Failure(FailureReason::InvalidScene(e.to_string())),
        };
        self.diag.topo_nodes = graph.nodes.len();
        self.diag.topo_edges = graph.edges.len();
        let loops = detect_simple_loops(&graph, self.cfg.max_loop_len);
        self.diag.loop_count = loops.len();
        let extraction = extract_channels(&loops, self.scene, &self.cfg.filter_params());
        self.diag.rejected = extraction
            .rejected
            .iter()
            .map(|(i, r)| (loops[*i].ids.clone(), r.to_string()))
            .collect();
        let channels = extraction.channels;
        self.diag.channel_count = channels.len();
        self.timings.topology = self.clock.elapsed() - t0;
        if self.timed_out() {
            return Outcome::Failure(FailureReason::Timeout);
        }

        let t1 = self.clock.elapsed();
        let robot = &self.scene.robot;
        let start_point = robot.object_pose(&self.scene.start).position;
        let goal_point = robot.object_pose(&self.scene.goal).position;
        let cgraph = match build_channel_graph(
            &channels,
            self.checker,
            &start_point,
            &goal_point,
            &self.cfg.graph_params(),
            self.cfg.seed,
        ) {
            Ok(g) => g,
            Err(GraphError::NoChannels) | Err(GraphError::DisconnectedEndpoints(_)) => {
                self.timings.channel_graph = self.clock.elapsed() - t1;
                return self.fallback(FailureReason::NoChannelsFallbackFailed);
            }
        };
        let ranked = rank_paths(&cgraph, &enumerate_paths(&cgraph, self.cfg.l_max), self.cfg.gamma);
        self.diag.candidate_paths = ranked.len();
        self.timings.channel_graph = self.clock.elapsed() - t1;
        if ranked.is_empty() {
            return self.fallback(FailureReason::NoChannelsFallbackFailed);
        }

        let mut prepared: HashMap<usize, ChannelPrep> = HashMap::new();
        for path in &ranked {
            if self.timed_out() {
                return Outcome::Failure(FailureReason::Timeout);
            }
            self.diag.paths_tried += 1;
            let t2 = self.clock.elapsed();
            let mut lists = Vec::new();
            let mut reachable = true;
            for ci in path.channels() {
                let prep = prepared
                    .entry(ci)
                    .or_insert_with(|| prepare_channel(&channels[ci], ci, self));
                match prep {
                    Some(ks) => lists.push(ks.clone()),
                    None => {
                        reachable = false;
                        break;
                    }
                }
            }
            self.timings.keyframes += self.clock.elapsed() - t2;
            if !reachable {
                continue;
            }
            self.diag.chosen_path = path.nodes.iter().map(|n| node_label(*n, &channels)).collect();
            return self.connect(path, &lists, &channels);
        }
        self.fallback(FailureReason::NoChannelsFallbackFailed)
    }

    fn connect(&mut self, path: &ChannelPath, lists: &[Vec<Keyframe>], channels: &[Channel]) -> Outcome {
        let t = self.clock.elapsed();
        let sequences: Vec<Vec<Configuration>> = get_all_paths(lists, self.cfg.s_max)
            .iter()
            .map(|s| s.configurations(lists, &self.scene.start, &self.scene.goal))
            .collect();
        let opts = RrtOptions {
            step: self.step,
            shortcut: self.cfg.shortcut,
            variant: RrtVariant::Connect,
        };
        let res = birrt_connect(
            &sequences,
            self.checker,
            &self.clock,
            self.cfg.b_min,
            self.cfg.kappa,
            self.cfg.time_limit,
            &opts,
            self.cfg.seed,
        );
        self.timings.connection += self.clock.elapsed() - t;
        self.diag.sequences_attempted = res.sequences_attempted;
        self.diag.budgets = res.budgets;
        match res.waypoints {
            Some(waypoints) => {
                let via: Vec<&Channel> = path.channels().map(|i| &channels[i]).collect();
                self.diag.crosses_channels = Some(crosses_channels(&waypoints, &self.scene.robot, &via));
                Outcome::Success(Trajectory {
                    waypoints,
                    resolution: self.cfg.resolution,
                    source: self.diag.chosen_path.clone(),
                })
            }
            None if res.timed_out || self.timed_out() => Outcome::Failure(FailureReason::Timeout),
            None => Outcome::Failure(FailureReason::AllSequencesFailed),
        }
    }

    /// Full-space BiRRT with the time left.
    fn fallback(&mut self, on_failure: FailureReason) -> Outcome {
        self.diag.fallback = true;
        let t = self.clock.elapsed();
        let opts = RrtOptions {
            step: self.step,
            shortcut: self.cfg.shortcut,
            variant: RrtVariant::Connect,
        };
        let mut r = rng::stream(self.cfg.seed, rng::ids::FALLBACK);
        let res = birrt(
            &self.scene.start,
            &self.scene.goal,
            self.checker,
            &self.clock,
            self.cfg.time_limit,
            &opts,
            &mut r,
        );
        self.timings.connection += self.clock.elapsed() - t;
        match res {
            Ok(waypoints) => Outcome::Success(Trajectory {
                waypoints,
                resolution: self.cfg.resolution,
                source: vec!["start".into(), "goal".into()],
            }),
            Err(_) => Outcome::Failure(on_failure),
        }
    }
}

fn node_label(n: NodeId, channels: &[Channel]) -> String {
    match n {
        NodeId::Channel(i) => channels[i].id.clone(),
        other => other.to_string(),
    }
}

/// Keyframes for one channel, explored, merged and prioritized; `None` when
/// the channel yields no valid keyframe.
fn prepare_channel(c: &Channel, index: usize, run: &Run) -> ChannelPrep {
    let cfg = run.cfg;
    let mut r = rng::stream(cfg.seed, rng::ids::KEYFRAMES + index as u64);
    let mut keyframes = sample_keyframes(c, index, run.checker, cfg.n_key, cfg.k_select, &mut r).ok()?;
    let robot = run.checker.robot();
    let trees: Vec<ExplorationTree> = keyframes
        .iter()
        .map(|k| {
            let region = Region::around(
                &k.q,
                robot,
                cfg.delta_rot,
                cfg.delta_trans,
                c.center,
                2.0 * c.incircle_radius,
            );
            let mut tr = rng::stream(cfg.seed, rng::ids::LOCAL_TREES + ((index as u64) << 8) + k.id as u64);
            grow_local_rrt(k, &region, run.checker, cfg.local_iterations, run.step, &mut tr)
        })
        .collect();
    let trees = connect_and_merge(trees, run.checker);
    prioritize(&mut keyframes, &trees, cfg.prioritize);
    Some(keyframes)
}
