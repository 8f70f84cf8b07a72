//! Nearest-neighbor index over a growing list of configurations.
//!
//! Points live in blocks of power-of-two sizes, each a balanced k-d tree
//! split on its widest coordinate; equal-sized blocks are merged on insert.

use crate::robot::Configuration;

#[derive(Clone, Debug)]
struct Block {
    /// Point indices in implicit tree order: the median of `[lo, hi)` sits at
    /// `(lo + hi) / 2`.
    order: Vec<usize>,
    axis: Vec<usize>,
}

impl Block {
    fn build(points: &[Configuration], range: std::ops::Range<usize>) -> Self {
        let mut order: Vec<usize> = range.collect();
        let mut axis = vec![0; order.len()];
        let n = order.len();
        split(points, &mut order, &mut axis, 0, n);
        Block { order, axis }
    }

    /// Returns the number of distances evaluated.
    fn search(&self, points: &[Configuration], q: &Configuration, best: &mut (f64, usize)) -> u64 {
        let mut evals = 0;
        let mut stack = vec![(0usize, self.order.len(), 0.0f64)];
        while let Some((lo, hi, bound)) = stack.pop() {
            if lo >= hi || bound > best.0 {
                continue;
            }
            let mid = (lo + hi) / 2;
            let i = self.order[mid];
            let d = points[i].distance_squared(q);
            evals += 1;
            if d < best.0 || (d == best.0 && i < best.1) {
                *best = (d, i);
            }
            let ax = self.axis[mid];
            let diff = q[ax] - points[i][ax];
            let (near, far) = if diff >= 0.0 { ((mid + 1, hi), (lo, mid)) } else { ((lo, mid), (mid + 1, hi)) };
            stack.push((far.0, far.1, diff * diff));
            stack.push((near.0, near.1, 0.0));
        }
        evals
    }
}

fn split(points: &[Configuration], order: &mut [usize], axis: &mut [usize], lo: usize, hi: usize) {
    if hi <= lo + 1 {
        return;
    }
    let dim = points[order[lo]].len();
    let mut best_axis = 0;
    let mut best_spread = f64::NEG_INFINITY;
    for a in 0..dim {
        let (mut mn, mut mx) = (f64::INFINITY, f64::NEG_INFINITY);
        for &i in &order[lo..hi] {
            mn = mn.min(points[i][a]);
            mx = mx.max(points[i][a]);
        }
        if mx - mn > best_spread {
            best_spread = mx - mn;
            best_axis = a;
        }
    }
    let mid = (lo + hi) / 2;
    order[lo..hi].select_nth_unstable_by(mid - lo, |&x, &y| {
        points[x][best_axis].total_cmp(&points[y][best_axis]).then(x.cmp(&y))
    });
    axis[mid] = best_axis;
    split(points, order, axis, lo, mid);
    split(points, order, axis, mid + 1, hi);
}

#[derive(Clone, Debug, Default)]
pub(crate) struct KdIndex {
    blocks: Vec<Block>,
    len: usize,
}

impl KdIndex {
    pub fn new() -> Self {
        KdIndex::default()
    }

    /// Index `points[self.len]`, which must already be in the list.
    pub fn insert_next(&mut self, points: &[Configuration]) {
        self.len += 1;
        let mut size = 1;
        while self.blocks.last().is_some_and(|b| b.order.len() == size) {
            self.blocks.pop();
            size *= 2;
        }
        self.blocks.push(Block::build(points, self.len - size..self.len));
    }

    /// Index of the nearest indexed point (ties go to the lower index) and
    /// the number of distances evaluated.
    pub fn nearest(&self, points: &[Configuration], q: &Configuration) -> (usize, u64) {
        let mut best = (f64::INFINITY, usize::MAX);
        let evals = self.blocks.iter().rev().map(|b| b.search(points, q, &mut best)).sum();
        (best.1, evals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowlevel::tree::nearest;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_linear_scan(
            pts in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 3), 1..120),
            queries in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..20),
        ) {
            let points: Vec<Configuration> = pts.into_iter().map(Configuration::new).collect();
            let mut idx = KdIndex::new();
            for k in 0..points.len() {
                idx.insert_next(&points);
                let q = &points[k];
                prop_assert_eq!(idx.nearest(&points, q).0, nearest(&points[..=k], q));
            }
            for q in queries {
                let q = Configuration::new(q);
                prop_assert_eq!(idx.nearest(&points, &q).0, nearest(&points, &q));
            }
        }
    }

    #[test]
    fn duplicate_points_resolve_to_the_first() {
        let points = vec![Configuration::new(vec![1.0, 1.0]); 5];
        let mut idx = KdIndex::new();
        for _ in 0..5 {
            idx.insert_next(&points);
        }
        assert_eq!(idx.nearest(&points, &Configuration::new(vec![0.0, 0.0])).0, 0);
    }
}
