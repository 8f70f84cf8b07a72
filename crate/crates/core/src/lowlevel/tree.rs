use rand::Rng;

use super::Keyframe;
use crate::geometry::Vec3;
use crate::robot::{Configuration, RobotModel};
use crate::scene::ValidityChecker;

/// Sampling box around a keyframe, clipped to the joint limits, plus a ball
/// the object position must stay inside.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub center: Vec3,
    pub radius: f64,
}

impl Region {
    /// Half-width `delta_rot` on angles and `delta_trans` on lengths.
    pub fn around(
        q: &Configuration,
        robot: &RobotModel,
        delta_rot: f64,
        delta_trans: f64,
        center: Vec3,
        radius: f64,
    ) -> Self {
        let mut lo = Vec::with_capacity(q.len());
        let mut hi = Vec::with_capacity(q.len());
        for (i, (v, (l, h))) in q.iter().zip(&robot.limits).enumerate() {
            let d = if robot.is_translational(i) { delta_trans } else { delta_rot };
            lo.push((v - d).max(*l));
            hi.push((v + d).min(*h));
        }
        Region { lo, hi, center, radius }
    }

    pub fn contains(&self, q: &Configuration, robot: &RobotModel) -> bool {
        q.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (l, h))| v >= l && v <= h)
            && (robot.object_pose(q).position - self.center).norm() <= self.radius
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        Configuration::new(
            self.lo
                .iter()
                .zip(&self.hi)
                .map(|(l, h)| if l < h { rng.gen_range(*l..=*h) } else { *l })
                .collect(),
        )
    }
}

/// Tree of configurations; node 0 is the root and has no parent.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplorationTree {
    pub channel: usize,
    /// Ids of the keyframes whose trees were merged into this one.
    pub members: Vec<usize>,
    pub nodes: Vec<Configuration>,
    pub parents: Vec<Option<usize>>,
    pub regions: Vec<Region>,
}

impl ExplorationTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> &Configuration {
        &self.nodes[0]
    }

    /// Undirected edges as sorted index pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .parents
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (i.min(p), i.max(p))))
            .collect();
        e.sort();
        e
    }
}

pub(crate) fn nearest(nodes: &[Configuration], q: &Configuration) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, n) in nodes.iter().enumerate() {
        let d = n.distance_squared(q);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Plain RRT rooted at the keyframe, confined to `region`.
pub fn grow_local_rrt<R: Rng + ?Sized>(
    k: &Keyframe,
    region: &Region,
    checker: &ValidityChecker,
    iterations: usize,
    step: f64,
    rng: &mut R,
) -> ExplorationTree {
    let robot = checker.robot();
    let mut tree = ExplorationTree {
        channel: k.channel,
        members: vec![k.id],
        nodes: vec![k.q.clone()],
        parents: vec![None],
        regions: vec![region.clone()],
    };
    for _ in 0..iterations {
        let target = region.sample(rng);
        let near = nearest(&tree.nodes, &target);
        checker.record_neighbor_evals(tree.nodes.len() as u64);
        let new = tree.nodes[near].step_toward(&target, step);
        if new == tree.nodes[near] || !region.contains(&new, robot) {
            continue;
        }
        if checker.segment_valid(&tree.nodes[near], &new) {
            tree.nodes.push(new);
            tree.parents.push(Some(near));
        }
    }
    tree
}

fn closest_pair(a: &ExplorationTree, b: &ExplorationTree) -> (usize, usize) {
    let mut best = (0, 0);
    let mut best_d = f64::INFINITY;
    for (i, x) in a.nodes.iter().enumerate() {
        for (j, y) in b.nodes.iter().enumerate() {
            let d = x.distance_squared(y);
            if d < best_d {
                best_d = d;
                best = (i, j);
            }
        }
    }
    best
}

/// Appends `b` to `a`, re-rooting `b` at node `bj` and hanging it from `ai`.
fn merge(mut a: ExplorationTree, b: ExplorationTree, ai: usize, bj: usize) -> ExplorationTree {
    let offset = a.nodes.len();
    let mut parents: Vec<Option<usize>> = b.parents.iter().map(|p| p.map(|p| p + offset)).collect();
    // Reverse the parent chain from bj up to b's old root.
    let mut prev = Some(ai);
    let mut cur = Some(bj);
    while let Some(c) = cur {
        let next = b.parents[c];
        parents[c] = prev;
        prev = Some(c + offset);
        cur = next;
    }
    a.nodes.extend(b.nodes);
    a.parents.extend(parents);
    a.members.extend(b.members);
    a.regions.extend(b.regions);
    a
}

/// Joins trees whose closest node pair is connectable, until no pair joins.
/// The earlier tree of a pair keeps its root.
pub fn connect_and_merge(trees: Vec<ExplorationTree>, checker: &ValidityChecker) -> Vec<ExplorationTree> {
    let mut trees = trees;
    'again: loop {
        for i in 0..trees.len() {
            for j in (i + 1)..trees.len() {
                let (a, b) = closest_pair(&trees[i], &trees[j]);
                if checker.segment_valid(&trees[i].nodes[a], &trees[j].nodes[b]) {
                    let tj = trees.remove(j);
                    let ti = trees.remove(i);
                    trees.insert(i, merge(ti, tj, a, b));
                    continue 'again;
                }
            }
        }
        return trees;
    }
}

/// Priority is the size of the tree holding each keyframe; sorted high to
/// low, ties by id. With `enabled == false` every priority is zero and the
/// order is by id.
pub fn prioritize(keyframes: &mut Vec<Keyframe>, trees: &[ExplorationTree], enabled: bool) {
    for k in keyframes.iter_mut() {
        let t = trees
            .iter()
            .position(|t| t.channel == k.channel && t.members.contains(&k.id))
            .unwrap_or(usize::MAX);
        k.tree = t;
        k.priority = if enabled && t != usize::MAX {
            trees[t].len() as f64
        } else {
            0.0
        };
    }
    keyframes.sort_by(|a, b| b.priority.total_cmp(&a.priority).then(a.id.cmp(&b.id)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Pose;

    fn kf(id: usize, x: f64) -> Keyframe {
        Keyframe {
            id,
            channel: 0,
            q: Configuration::new(vec![x]),
            pose: Pose::identity(),
            priority: 0.0,
            tree: id,
        }
    }

    fn line_tree(id: usize, xs: &[f64]) -> ExplorationTree {
        ExplorationTree {
            channel: 0,
            members: vec![id],
            nodes: xs.iter().map(|x| Configuration::new(vec![*x])).collect(),
            parents: (0..xs.len()).map(|i| if i == 0 { None } else { Some(i - 1) }).collect(),
            regions: Vec::new(),
        }
    }

    #[test]
    fn merge_reroots_second_tree() {
        let a = line_tree(0, &[0.0, 1.0]);
        let b = line_tree(1, &[3.0, 2.5, 2.0]);
        let m = merge(a.clone(), b.clone(), 1, 2);
        assert_eq!(m.len(), 5);
        assert_eq!(m.parents[0], None);
        // Old root of b now hangs below the bridge end.
        assert_eq!(m.parents[4], Some(1));
        assert_eq!(m.parents[3], Some(4));
        assert_eq!(m.parents[2], Some(3));
        let mut expected: Vec<(usize, usize)> = a.edges();
        expected.extend(b.edges().iter().map(|(x, y)| (x + 2, y + 2)));
        expected.push((1, 4));
        expected.sort();
        assert_eq!(m.edges(), expected);
    }

    #[test]
    fn priorities_follow_tree_size() {
        let trees = vec![line_tree(0, &[0.0; 10]), line_tree(1, &[0.0; 3])];
        let mut ks = vec![kf(1, 0.0), kf(0, 0.0)];
        prioritize(&mut ks, &trees, true);
        assert_eq!(ks.iter().map(|k| k.priority).collect::<Vec<_>>(), vec![10.0, 3.0]);
        assert_eq!(ks[0].id, 0);
    }

    #[test]
    fn merged_tree_gives_equal_priorities_in_id_order() {
        let mut t = line_tree(0, &[0.0; 4]);
        t.members = vec![2, 0, 1];
        let mut ks = vec![kf(2, 0.0), kf(1, 0.0), kf(0, 0.0)];
        prioritize(&mut ks, &[t], true);
        assert!(ks.iter().all(|k| k.priority == 4.0));
        assert_eq!(ks.iter().map(|k| k.id).collect::<Vec<_>>(), vec![0, 1, 2]);
    }
}
