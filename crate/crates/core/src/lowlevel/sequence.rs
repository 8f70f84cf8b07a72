use super::birrt::{birrt, RrtOptions};
use super::{Keyframe, LowLevelError};
use crate::clock::Clock;
use crate::rng;
use crate::robot::Configuration;
use crate::scene::ValidityChecker;

/// One keyframe per channel of the high-level path, by index into that
/// channel's prioritized keyframe list.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyframeSequence {
    pub picks: Vec<usize>,
    pub score: f64,
}

impl KeyframeSequence {
    /// Start, chosen keyframes, goal.
    pub fn configurations(
        &self,
        keyframes: &[Vec<Keyframe>],
        start: &Configuration,
        goal: &Configuration,
    ) -> Vec<Configuration> {
        let mut out = vec![start.clone()];
        out.extend(self.picks.iter().zip(keyframes).map(|(&i, ks)| ks[i].q.clone()));
        out.push(goal.clone());
        out
    }
}

/// Cartesian product of the per-channel keyframe lists, ordered by descending
/// priority sum, ties by the lexicographic order of keyframe ids, and cut to
/// `s_max` sequences.
pub fn get_all_paths(keyframes: &[Vec<Keyframe>], s_max: usize) -> Vec<KeyframeSequence> {
    if keyframes.iter().any(|k| k.is_empty()) {
        return Vec::new();
    }
    let m = keyframes.len();
    let mut all: Vec<(KeyframeSequence, Vec<usize>)> = Vec::new();
    let mut picks = vec![0usize; m];
    loop {
        let score = picks.iter().zip(keyframes).map(|(&i, ks)| ks[i].priority).sum();
        let ids = picks.iter().zip(keyframes).map(|(&i, ks)| ks[i].id).collect();
        all.push((KeyframeSequence { picks: picks.clone(), score }, ids));
        // Odometer increment, last channel fastest.
        let mut d = m;
        loop {
            if d == 0 {
                all.sort_by(|a, b| b.0.score.total_cmp(&a.0.score).then_with(|| a.1.cmp(&b.1)));
                return all.into_iter().take(s_max).map(|(s, _)| s).collect();
            }
            d -= 1;
            picks[d] += 1;
            if picks[d] < keyframes[d].len() {
                break;
            }
            picks[d] = 0;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConnectOutcome {
    pub waypoints: Option<Vec<Configuration>>,
    /// Nominal budget of every segment attempted, per sequence, in seconds.
    pub budgets: Vec<Vec<f64>>,
    pub sequences_attempted: usize,
    pub timed_out: bool,
}

/// Connect consecutive anchors of each sequence with BiRRT, growing the
/// per-segment budget by `kappa` after every success. A failed segment
/// discards its sequence; the first fully connected sequence wins.
#[allow(clippy::too_many_arguments)]
pub fn birrt_connect(
    sequences: &[Vec<Configuration>],
    checker: &ValidityChecker,
    clock: &Clock,
    b_min: f64,
    kappa: f64,
    deadline: f64,
    opts: &RrtOptions,
    seed: u64,
) -> ConnectOutcome {
    let mut out = ConnectOutcome::default();
    for (si, seq) in sequences.iter().enumerate() {
        if clock.past(deadline) {
            out.timed_out = true;
            return out;
        }
        out.sequences_attempted += 1;
        let mut budgets = Vec::new();
        let mut b_cur = b_min;
        let mut path: Vec<Configuration> = vec![seq[0].clone()];
        let mut ok = true;
        for (k, pair) in seq.windows(2).enumerate() {
            budgets.push(b_cur);
            let seg_deadline = clock.after(b_cur).min(deadline);
            let mut r = rng::stream(seed, rng::ids::CONNECT + ((si as u64) << 8) + k as u64);
            match birrt(&pair[0], &pair[1], checker, clock, seg_deadline, opts, &mut r) {
                Ok(seg) => {
                    path.extend(seg.into_iter().skip(1));
                    b_cur *= kappa;
                }
                Err(LowLevelError::BudgetExhausted) | Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        out.budgets.push(budgets);
        if ok {
            out.waypoints = Some(path);
            return out;
        }
        if clock.past(deadline) {
            out.timed_out = true;
            return out;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Pose;

    fn kf(id: usize, priority: f64) -> Keyframe {
        Keyframe {
            id,
            channel: 0,
            q: Configuration::new(vec![id as f64]),
            pose: Pose::identity(),
            priority,
            tree: 0,
        }
    }

    #[test]
    fn product_count_and_truncation() {
        let ks = vec![vec![kf(0, 1.0), kf(1, 1.0)], vec![kf(0, 1.0), kf(1, 1.0)]];
        assert_eq!(get_all_paths(&ks, 64).len(), 4);
        assert_eq!(get_all_paths(&ks, 3).len(), 3);
    }

    #[test]
    fn sorted_by_priority_then_ids() {
        // Sums: (a0,b0)=7, (a0,b1)=5, (a1,b0)=7, (a1,b1)=5.
        let ks = vec![vec![kf(0, 4.0), kf(1, 4.0)], vec![kf(0, 3.0), kf(1, 1.0)]];
        let seqs = get_all_paths(&ks, 3);
        assert_eq!(seqs.iter().map(|s| s.score).collect::<Vec<_>>(), vec![7.0, 7.0, 5.0]);
        assert_eq!(seqs[0].picks, vec![0, 0]);
        assert_eq!(seqs[1].picks, vec![1, 0]);
    }

    #[test]
    fn empty_channel_gives_nothing() {
        let ks = vec![vec![kf(0, 1.0)], vec![]];
        assert!(get_all_paths(&ks, 64).is_empty());
    }
}
