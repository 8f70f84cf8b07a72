//! Weighted graph over channels plus the start and goal, and scoring of
//! channel paths through it.

mod paths;
mod weights;

pub use paths::{enumerate_paths, rank_paths, score_path, score_weights, select_best_path, ChannelPath};
pub use weights::{edge_weight, mid_configuration, node_weights, PassMode};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Vec3;
use crate::rng;
use crate::scene::ValidityChecker;
use crate::topology::Channel;

/// Node identity; orders as start, channels by index, goal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeId {
    Start,
    Channel(usize),
    Goal,
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NodeId::Start => f.write_str("start"),
            NodeId::Channel(i) => write!(f, "ch{i}"),
            NodeId::Goal => f.write_str("goal"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelNode {
    pub id: NodeId,
    pub w_reach: f64,
    pub w_pass: f64,
    /// alpha * w_reach, kept separately so the sum can be audited.
    pub reach_term: f64,
    /// beta * w_pass.
    pub pass_term: f64,
    pub w_v: f64,
}

impl ChannelNode {
    pub fn endpoint(id: NodeId) -> Self {
        ChannelNode {
            id,
            w_reach: 1.0,
            w_pass: 1.0,
            reach_term: 0.0,
            pass_term: 0.0,
            w_v: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelEdge {
    pub a: NodeId,
    pub b: NodeId,
    pub visible: usize,
    pub n_pairs: usize,
    pub xi: f64,
    pub d: f64,
    pub w_e: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphParams {
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub n_samples: usize,
    pub n_pairs: usize,
    pub pass_mode: PassMode,
}

impl Default for GraphParams {
    fn default() -> Self {
        GraphParams {
            alpha: 1.0,
            beta: 2.0,
            epsilon: 0.25,
            n_samples: 100,
            n_pairs: 100,
            pass_mode: PassMode::Incircle,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("no channels to build a graph from")]
    NoChannels,
    #[error("{0} has no edge above the weight threshold")]
    DisconnectedEndpoints(&'static str),
}

#[derive(Clone, Debug, Default)]
pub struct ChannelGraph {
    /// Start, channels in index order, goal.
    pub nodes: Vec<ChannelNode>,
    pub edges: Vec<ChannelEdge>,
}

impl ChannelGraph {
    pub fn node(&self, id: NodeId) -> &ChannelNode {
        let i = match id {
            NodeId::Start => 0,
            NodeId::Channel(c) => c + 1,
            NodeId::Goal => self.nodes.len() - 1,
        };
        &self.nodes[i]
    }

    pub fn edge(&self, a: NodeId, b: NodeId) -> Option<&ChannelEdge> {
        self.edges
            .iter()
            .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    /// Sorted neighbour ids.
    pub fn neighbors(&self, u: NodeId) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.a == u {
                    Some(e.b)
                } else if e.b == u {
                    Some(e.a)
                } else {
                    None
                }
            })
            .collect();
        out.sort();
        out
    }

    pub fn channel_count(&self) -> usize {
        self.nodes.len().saturating_sub(2)
    }

    /// Graph from explicit weights, for tests and oracles.
    pub fn from_weights(channel_w: &[f64], edges: &[(NodeId, NodeId, f64)]) -> Self {
        let mut nodes = vec![ChannelNode::endpoint(NodeId::Start)];
        for (i, w) in channel_w.iter().enumerate() {
            nodes.push(ChannelNode {
                id: NodeId::Channel(i),
                w_reach: 0.0,
                w_pass: 0.0,
                reach_term: 0.0,
                pass_term: *w,
                w_v: *w,
            });
        }
        nodes.push(ChannelNode::endpoint(NodeId::Goal));
        let edges = edges
            .iter()
            .map(|&(a, b, w)| ChannelEdge {
                a: a.min(b),
                b: a.max(b),
                visible: 0,
                n_pairs: 0,
                xi: w,
                d: 1.0,
                w_e: w,
            })
            .collect();
        ChannelGraph { nodes, edges }
    }
}

/// Nodes for every channel and both endpoints; channel pairs and
/// endpoint-channel pairs are joined when their edge weight exceeds epsilon.
/// The direct start-goal edge uses a single straight segment.
pub fn build_channel_graph(
    channels: &[Channel],
    checker: &ValidityChecker,
    start_point: &Vec3,
    goal_point: &Vec3,
    params: &GraphParams,
    seed: u64,
) -> Result<ChannelGraph, GraphError> {
    if channels.is_empty() {
        return Err(GraphError::NoChannels);
    }
    let robot = checker.robot();
    let mut nodes = vec![ChannelNode::endpoint(NodeId::Start)];
    for (i, c) in channels.iter().enumerate() {
        let mut r = rng::stream(seed, rng::ids::NODE_WEIGHTS + i as u64);
        let (w_reach, w_pass) = node_weights(c, checker, robot, params.n_samples, params.pass_mode, &mut r);
        let reach_term = params.alpha * w_reach;
        let pass_term = params.beta * w_pass;
        nodes.push(ChannelNode {
            id: NodeId::Channel(i),
            w_reach,
            w_pass,
            reach_term,
            pass_term,
            w_v: reach_term + pass_term,
        });
    }
    nodes.push(ChannelNode::endpoint(NodeId::Goal));

    let mut edges = Vec::new();
    let mut stream_id = rng::ids::EDGE_WEIGHTS;
    let keep = |e: ChannelEdge, edges: &mut Vec<ChannelEdge>| {
        if e.w_e > params.epsilon {
            edges.push(e);
        }
    };
    for (end, point) in [(NodeId::Start, start_point), (NodeId::Goal, goal_point)] {
        for (i, c) in channels.iter().enumerate() {
            let mut r = rng::stream(seed, stream_id);
            stream_id += 1;
            let e = endpoint_edge(end, point, NodeId::Channel(i), c, checker, params.n_pairs, &mut r);
            keep(e, &mut edges);
        }
    }
    for i in 0..channels.len() {
        for j in (i + 1)..channels.len() {
            let mut r = rng::stream(seed, stream_id);
            stream_id += 1;
            let mut e = edge_weight(&channels[i], &channels[j], checker, params.n_pairs, &mut r);
            e.a = NodeId::Channel(i);
            e.b = NodeId::Channel(j);
            keep(e, &mut edges);
        }
    }
    let visible = usize::from(checker.workspace_segment_free(start_point, goal_point));
    keep(weights::make_edge(NodeId::Start, NodeId::Goal, visible, 1, (goal_point - start_point).norm()), &mut edges);

    edges.sort_by(|x, y| (x.a, x.b).cmp(&(y.a, y.b)));
    let graph = ChannelGraph { nodes, edges };
    for end in [NodeId::Start, NodeId::Goal] {
        if graph.neighbors(end).is_empty() {
            return Err(GraphError::DisconnectedEndpoints(if end == NodeId::Start {
                "start"
            } else {
                "goal"
            }));
        }
    }
    Ok(graph)
}

fn endpoint_edge<R: Rng + ?Sized>(
    end: NodeId,
    point: &Vec3,
    id: NodeId,
    c: &Channel,
    checker: &ValidityChecker,
    n_pairs: usize,
    rng: &mut R,
) -> ChannelEdge {
    let mut visible = 0;
    for _ in 0..n_pairs {
        let uv = c.polygon.sample_uniform(rng.gen(), rng.gen(), rng.gen());
        if checker.workspace_segment_free(point, &c.lift(&uv)) {
            visible += 1;
        }
    }
    weights::make_edge(end.min(id), end.max(id), visible, n_pairs, (c.center - point).norm())
}

/// DOT rendering with node and edge weights as labels.
pub fn to_dot(graph: &ChannelGraph, channels: &[Channel]) -> String {
    let mut s = String::from("graph channels {\n");
    for n in &graph.nodes {
        let label = match n.id {
            NodeId::Channel(i) => format!(
                "{}\\nw_v={:.4} reach={:.3} pass={:.3}",
                channels.get(i).map(|c| c.id.as_str()).unwrap_or("?"),
                n.w_v,
                n.w_reach,
                n.w_pass
            ),
            other => other.to_string(),
        };
        s.push_str(&format!("  \"{}\" [label=\"{}\"];\n", n.id, label));
    }
    for e in &graph.edges {
        s.push_str(&format!(
            "  \"{}\" -- \"{}\" [label=\"w_e={:.4} xi={:.3} d={:.3}\"];\n",
            e.a, e.b, e.w_e, e.xi, e.d
        ));
    }
    s.push_str("}\n");
    s
}
