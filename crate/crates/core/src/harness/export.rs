use std::fmt::Write as _;

use crate::scene::Scene;
use crate::topology::{Channel, TopoGraph};

/// DOT graph of sub-obstacles and contacts; nodes are grouped by parent
/// obstacle and every accepted channel is listed with its loop.
pub fn topology_dot(scene: &Scene, graph: &TopoGraph, channels: &[Channel]) -> String {
    let mut s = String::from("graph topology {\n  node [shape=box];\n");
    for (p, obstacle) in scene.obstacles.iter().enumerate() {
        let _ = writeln!(s, "  subgraph \"cluster_{}\" {{\n    label=\"{}\";", obstacle.id, obstacle.id);
        for (i, id) in graph.nodes.iter().enumerate() {
            if graph.parents[i] == p {
                let _ = writeln!(s, "    \"{id}\";");
            }
        }
        s.push_str("  }\n");
    }
    for e in &graph.edges {
        let c = e.contact;
        let _ = writeln!(
            s,
            "  \"{}\" -- \"{}\" [label=\"({:.4}, {:.4}, {:.4})\"];",
            graph.nodes[e.a], graph.nodes[e.b], c.x, c.y, c.z
        );
    }
    for c in channels {
        let _ = writeln!(
            s,
            "  // {}: loop [{}], area {:.6}, incircle {:.6}, thickness {:.6}",
            c.id,
            c.source_loop.ids.join(", "),
            c.area,
            c.incircle_radius,
            c.thickness
        );
    }
    s.push_str("}\n");
    s
}
