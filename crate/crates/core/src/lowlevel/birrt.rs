use rand::Rng;

use super::nn::KdIndex;
use super::LowLevelError;
use crate::clock::Clock;
use crate::robot::{sample_configuration, Configuration};
use crate::scene::ValidityChecker;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RrtVariant {
    /// Extend one tree, then greedily connect the other to the new node.
    Connect,
    /// Extend one tree, then take a single step of the other toward it.
    ExtendExtend,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RrtOptions {
    /// Maximum C-space length of one tree edge.
    pub step: f64,
    /// Try the straight segment before growing any tree.
    pub shortcut: bool,
    pub variant: RrtVariant,
}

struct Tree {
    nodes: Vec<Configuration>,
    parents: Vec<usize>,
    index: KdIndex,
}

enum Step {
    Reached(usize),
    Advanced(usize),
    Trapped,
}

impl Tree {
    fn new(root: Configuration) -> Self {
        let nodes = vec![root];
        let mut index = KdIndex::new();
        index.insert_next(&nodes);
        Tree {
            nodes,
            parents: vec![usize::MAX],
            index,
        }
    }

    fn extend(&mut self, target: &Configuration, checker: &ValidityChecker, step: f64) -> Step {
        let (near, evals) = self.index.nearest(&self.nodes, target);
        checker.record_neighbor_evals(evals);
        let new = self.nodes[near].step_toward(target, step);
        if new == self.nodes[near] {
            return Step::Reached(near);
        }
        if !checker.segment_valid(&self.nodes[near], &new) {
            return Step::Trapped;
        }
        let reached = new == *target;
        self.nodes.push(new);
        self.parents.push(near);
        self.index.insert_next(&self.nodes);
        let i = self.nodes.len() - 1;
        if reached {
            Step::Reached(i)
        } else {
            Step::Advanced(i)
        }
    }

    /// Node `i` back to the root.
    fn branch(&self, mut i: usize) -> Vec<Configuration> {
        let mut out = vec![self.nodes[i].clone()];
        while self.parents[i] != usize::MAX {
            i = self.parents[i];
            out.push(self.nodes[i].clone());
        }
        out
    }
}

/// Bidirectional RRT between two valid configurations. Stops with
/// `BudgetExhausted` once `clock` passes `deadline`.
pub fn birrt<R: Rng + ?Sized>(
    q_a: &Configuration,
    q_b: &Configuration,
    checker: &ValidityChecker,
    clock: &Clock,
    deadline: f64,
    opts: &RrtOptions,
    rng: &mut R,
) -> Result<Vec<Configuration>, LowLevelError> {
    if q_a == q_b {
        return Ok(vec![q_a.clone()]);
    }
    if opts.shortcut && checker.segment_valid(q_a, q_b) {
        return Ok(vec![q_a.clone(), q_b.clone()]);
    }
    let robot = checker.robot();
    let mut trees = [Tree::new(q_a.clone()), Tree::new(q_b.clone())];
    // trees[0] is the one extended toward the random sample this round.
    let mut a_first = true;
    loop {
        if clock.past(deadline) {
            return Err(LowLevelError::BudgetExhausted);
        }
        let target = sample_configuration(robot, rng);
        let [grow, other] = &mut trees;
        let new = match grow.extend(&target, checker, opts.step) {
            Step::Reached(i) | Step::Advanced(i) => i,
            Step::Trapped => {
                trees.swap(0, 1);
                a_first = !a_first;
                continue;
            }
        };
        let q_new = grow.nodes[new].clone();
        let joined = match opts.variant {
            RrtVariant::Connect => loop {
                match other.extend(&q_new, checker, opts.step) {
                    Step::Reached(j) => break Some(j),
                    Step::Advanced(_) if !clock.past(deadline) => continue,
                    _ => break None,
                }
            },
            RrtVariant::ExtendExtend => match other.extend(&q_new, checker, opts.step) {
                Step::Reached(j) => Some(j),
                _ => None,
            },
        };
        if let Some(j) = joined {
            let mut from_grow = grow.branch(new);
            from_grow.reverse();
            let from_other = other.branch(j);
            // from_grow ends at q_new and from_other starts at the same node.
            let mut path = from_grow;
            path.extend(from_other.into_iter().skip(1));
            if !a_first {
                path.reverse();
            }
            return Ok(path);
        }
        trees.swap(0, 1);
        a_first = !a_first;
    }
}

/// Textbook RRT-Connect over the full joint limits with no shortcut.
pub fn rrt_connect_baseline<R: Rng + ?Sized>(
    q_start: &Configuration,
    q_goal: &Configuration,
    checker: &ValidityChecker,
    clock: &Clock,
    deadline: f64,
    step: f64,
    rng: &mut R,
) -> Result<Vec<Configuration>, LowLevelError> {
    let opts = RrtOptions {
        step,
        shortcut: false,
        variant: RrtVariant::Connect,
    };
    birrt(q_start, q_goal, checker, clock, deadline, &opts, rng)
}
