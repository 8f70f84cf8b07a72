use std::collections::VecDeque;

use super::{ChannelGraph, NodeId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("no candidate channel path")]
pub struct NoFeasiblePath;

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelPath {
    pub nodes: Vec<NodeId>,
    pub score: f64,
}

impl ChannelPath {
    pub fn channels(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            NodeId::Channel(i) => Some(*i),
            _ => None,
        })
    }
}

/// Simple start-to-goal paths with at most `l_max` channel nodes, shortest
/// first (breadth-first; neighbours in id order).
pub fn enumerate_paths(graph: &ChannelGraph, l_max: usize) -> Vec<ChannelPath> {
    let mut out = Vec::new();
    let mut queue: VecDeque<Vec<NodeId>> = VecDeque::new();
    queue.push_back(vec![NodeId::Start]);
    while let Some(path) = queue.pop_front() {
        let last = *path.last().unwrap();
        let channels = path.len() - 1;
        for next in graph.neighbors(last) {
            if path.contains(&next) {
                continue;
            }
            match next {
                NodeId::Goal => {
                    let mut p = path.clone();
                    p.push(next);
                    out.push(ChannelPath { nodes: p, score: 0.0 });
                }
                NodeId::Channel(_) if channels < l_max => {
                    let mut p = path.clone();
                    p.push(next);
                    queue.push_back(p);
                }
                _ => {}
            }
        }
    }
    out
}

/// W = (sum_{i<g} w_v[i] * w_e[i] + w_v[g]) / g^gamma for node weights
/// `w_v[0..g]` and edge weights `w_e[0..g-1]`.
pub fn score_weights(node_w: &[f64], edge_w: &[f64], gamma: f64) -> f64 {
    let g = node_w.len();
    debug_assert_eq!(edge_w.len() + 1, g);
    let mut sum = 0.0;
    for i in 0..g - 1 {
        sum += node_w[i] * edge_w[i];
    }
    (sum + node_w[g - 1]) / (g as f64).powf(gamma)
}

pub fn score_path(graph: &ChannelGraph, path: &ChannelPath, gamma: f64) -> f64 {
    let node_w: Vec<f64> = path.nodes.iter().map(|n| graph.node(*n).w_v).collect();
    let edge_w: Vec<f64> = path
        .nodes
        .windows(2)
        .map(|w| graph.edge(w[0], w[1]).map(|e| e.w_e).unwrap_or(0.0))
        .collect();
    score_weights(&node_w, &edge_w, gamma)
}

/// Scores every path and orders them best first: higher W, then fewer
/// nodes, then lexicographic node ids.
pub fn rank_paths(graph: &ChannelGraph, paths: &[ChannelPath], gamma: f64) -> Vec<ChannelPath> {
    let mut scored: Vec<ChannelPath> = paths
        .iter()
        .map(|p| ChannelPath {
            nodes: p.nodes.clone(),
            score: score_path(graph, p, gamma),
        })
        .collect();
    scored.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.nodes.len().cmp(&b.nodes.len()))
            .then_with(|| a.nodes.cmp(&b.nodes))
    });
    scored
}

pub fn select_best_path(graph: &ChannelGraph, paths: &[ChannelPath], gamma: f64) -> Result<ChannelPath, NoFeasiblePath> {
    rank_paths(graph, paths, gamma).into_iter().next().ok_or(NoFeasiblePath)
}
