//! Sub-obstacle contact graph, simple loops, and planar channels.

mod channels;
mod loops;
mod sampling;

pub use channels::{extract_channels, Channel, ChannelExtraction, ChannelFilterParams, RejectReason};
pub use loops::{detect_simple_loops, Loop};
pub use sampling::{ChannelSampler, ALIGNMENT_CONE};

use std::collections::HashMap;

use crate::geometry::{pairwise_distance, Vec3};
use crate::scene::Scene;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TopologyError {
    #[error("sub-obstacles {a} and {b} overlap by {depth:.3e} m; declare their contact explicitly")]
    AmbiguousContact { a: String, b: String, depth: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TopoEdge {
    pub a: usize,
    pub b: usize,
    pub contact: Vec3,
}

/// Contact graph over sub-obstacles. Nodes are sorted by id, so node index
/// order equals id order.
#[derive(Clone, Debug, Default)]
pub struct TopoGraph {
    pub nodes: Vec<String>,
    /// Parent obstacle index of each node.
    pub parents: Vec<usize>,
    pub edges: Vec<TopoEdge>,
    adjacency: Vec<Vec<usize>>,
    edge_of: HashMap<(usize, usize), usize>,
}

impl TopoGraph {
    pub fn new(nodes: Vec<String>, parents: Vec<usize>) -> Self {
        let n = nodes.len();
        TopoGraph {
            nodes,
            parents,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
            edge_of: HashMap::new(),
        }
    }

    /// Unlabelled graph for tests and oracles; ids are zero-padded indices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = TopoGraph::new((0..n).map(|i| format!("{i:04}")).collect(), vec![0; n]);
        for &(a, b) in edges {
            g.add_edge(a, b, Vec3::zeros());
        }
        g
    }

    /// Adds an undirected edge; self loops and repeated pairs are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize, contact: Vec3) -> bool {
        if a == b {
            return false;
        }
        let key = (a.min(b), a.max(b));
        if self.edge_of.contains_key(&key) {
            return false;
        }
        self.edge_of.insert(key, self.edges.len());
        self.edges.push(TopoEdge { a: key.0, b: key.1, contact });
        for (u, v) in [(a, b), (b, a)] {
            let list = &mut self.adjacency[u];
            let pos = list.partition_point(|&x| x < v);
            list.insert(pos, v);
        }
        true
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<&TopoEdge> {
        self.edge_of
            .get(&(a.min(b), a.max(b)))
            .map(|&i| &self.edges[i])
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.as_str().cmp(id)).ok()
    }
}

/// Connect sub-obstacles that touch within `contact_tol`; declared contacts
/// take precedence over detected ones.
pub fn build_topo_graph(scene: &Scene, contact_tol: f64) -> Result<TopoGraph, TopologyError> {
    let mut subs: Vec<_> = scene.sub_obstacles().collect();
    subs.sort_by(|x, y| x.sub.id.cmp(&y.sub.id));
    let mut g = TopoGraph::new(
        subs.iter().map(|s| s.sub.id.clone()).collect(),
        subs.iter().map(|s| s.parent).collect(),
    );
    for c in &scene.explicit_contacts {
        let (Some(a), Some(b)) = (g.index_of(&c.a), g.index_of(&c.b)) else {
            continue;
        };
        g.add_edge(a, b, c.point);
    }
    for i in 0..subs.len() {
        for j in (i + 1)..subs.len() {
            if g.edge(i, j).is_some() {
                continue;
            }
            let (si, sj) = (subs[i].sub, subs[j].sub);
            let reach = si.primitive.bounding_radius() + sj.primitive.bounding_radius();
            if (si.pose.position - sj.pose.position).norm() - reach > contact_tol {
                continue;
            }
            let prox = pairwise_distance(&si.primitive, &si.pose, &sj.primitive, &sj.pose);
            if prox.distance < -contact_tol {
                return Err(TopologyError::AmbiguousContact {
                    a: si.id.clone(),
                    b: sj.id.clone(),
                    depth: -prox.distance,
                });
            }
            if prox.distance <= contact_tol {
                g.add_edge(i, j, (prox.point_a + prox.point_b) * 0.5);
            }
        }
    }
    Ok(g)
}
