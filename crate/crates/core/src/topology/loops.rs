use super::TopoGraph;
use crate::geometry::Vec3;

/// Simple cycle in canonical form: the smallest node first and the second
/// node smaller than the last.
#[derive(Clone, Debug, PartialEq)]
pub struct Loop {
    pub nodes: Vec<usize>,
    pub ids: Vec<String>,
    /// Contact point of edge (nodes[i], nodes[i + 1 mod len]).
    pub contact_points: Vec<Vec3>,
}

impl Loop {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Every simple cycle with 3..=max_loop_len nodes, each reported once,
/// sorted by length and then lexicographically.
pub fn detect_simple_loops(g: &TopoGraph, max_loop_len: usize) -> Vec<Loop> {
    let n = g.nodes.len();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut path = Vec::with_capacity(max_loop_len);
    let mut on_path = vec![false; n];
    for s in 0..n {
        path.push(s);
        on_path[s] = true;
        extend(g, s, max_loop_len, &mut path, &mut on_path, &mut cycles);
        on_path[s] = false;
        path.pop();
    }
    cycles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    cycles
        .into_iter()
        .map(|nodes| {
            let m = nodes.len();
            let contact_points = (0..m)
                .map(|i| {
                    g.edge(nodes[i], nodes[(i + 1) % m])
                        .expect("cycle edge exists")
                        .contact
                })
                .collect();
            Loop {
                ids: nodes.iter().map(|&i| g.nodes[i].clone()).collect(),
                nodes,
                contact_points,
            }
        })
        .collect()
}

// Depth-first search over nodes larger than the root; a cycle closes when
// a neighbour is the root, and is kept only in the orientation whose second
// node is smaller than its last.
fn extend(
    g: &TopoGraph,
    root: usize,
    max_len: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let u = *path.last().unwrap();
    for &v in g.neighbors(u) {
        if v == root {
            if path.len() >= 3 && path[1] < u {
                out.push(path.clone());
            }
        } else if v > root && !on_path[v] && path.len() < max_len {
            path.push(v);
            on_path[v] = true;
            extend(g, root, max_len, path, on_path, out);
            on_path[v] = false;
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_has_one_loop() {
        let g = TopoGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let loops = detect_simple_loops(&g, 8);
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].nodes, vec![0, 1, 2]);
    }

    #[test]
    fn k4_has_seven_loops() {
        let g = TopoGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let loops = detect_simple_loops(&g, 8);
        assert_eq!(loops.len(), 7);
        assert_eq!(loops.iter().filter(|l| l.len() == 3).count(), 4);
        assert_eq!(loops[0].nodes, vec![0, 1, 2]);
        assert_eq!(loops[4].nodes, vec![0, 1, 2, 3]);
    }

    #[test]
    fn tree_has_none() {
        let g = TopoGraph::from_edges(5, &[(0, 1), (0, 2), (2, 3), (2, 4)]);
        assert!(detect_simple_loops(&g, 8).is_empty());
    }

    #[test]
    fn length_bound_applies() {
        let ring: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let g = TopoGraph::from_edges(6, &ring);
        assert!(detect_simple_loops(&g, 5).is_empty());
        assert_eq!(detect_simple_loops(&g, 6).len(), 1);
    }
}
