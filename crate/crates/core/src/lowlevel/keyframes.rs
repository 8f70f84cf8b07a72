use rand::Rng;

use super::LowLevelError;
use crate::channelgraph::mid_configuration;
use crate::geometry::Pose;
use crate::robot::{ik_solve, Configuration, IkOptions};
use crate::scene::ValidityChecker;
use crate::topology::{Channel, ChannelSampler, ALIGNMENT_CONE};

pub const KEYFRAME_ATTEMPTS_PER_KEY: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct Keyframe {
    /// Position in the selection order within its channel.
    pub id: usize,
    pub channel: usize,
    pub q: Configuration,
    pub pose: Pose,
    pub priority: f64,
    /// Index of the exploration tree holding this keyframe.
    pub tree: usize,
}

/// Valid configurations threading channel `channel_index`, thinned to
/// `k_select` by greedy max-min dispersion.
pub fn sample_keyframes<R: Rng + ?Sized>(
    c: &Channel,
    channel_index: usize,
    checker: &ValidityChecker,
    n_key: usize,
    k_select: usize,
    rng: &mut R,
) -> Result<Vec<Keyframe>, LowLevelError> {
    let robot = checker.robot();
    let unreachable = || LowLevelError::ChannelUnreachable(c.id.clone());
    let sampler = ChannelSampler::new(c, &robot.object.primitive, 0.5 * c.thickness, ALIGNMENT_CONE)
        .ok_or_else(unreachable)?;
    let opts = IkOptions::default();
    let mid = mid_configuration(robot);
    let center_q = ik_solve(robot, &sampler.center_pose(), &mid, &opts).unwrap_or(mid);

    let mut found: Vec<(Configuration, Pose)> = Vec::with_capacity(n_key);
    let mut attempts = 0;
    while found.len() < n_key && attempts < KEYFRAME_ATTEMPTS_PER_KEY * n_key {
        attempts += 1;
        let pose = sampler.sample(rng);
        if !checker.pose_valid(&pose) {
            continue;
        }
        let Ok(q) = ik_solve(robot, &pose, &center_q, &opts) else {
            continue;
        };
        if checker.config_valid(&q) {
            found.push((q, pose));
        }
    }
    if found.is_empty() {
        return Err(unreachable());
    }
    let qs: Vec<Configuration> = found.iter().map(|(q, _)| q.clone()).collect();
    let picked = select_dispersed(&qs, k_select, &center_q);
    Ok(picked
        .into_iter()
        .enumerate()
        .map(|(id, i)| Keyframe {
            id,
            channel: channel_index,
            q: found[i].0.clone(),
            pose: found[i].1,
            priority: 0.0,
            tree: id,
        })
        .collect())
}

/// Greedy max-min dispersion: start from the candidate farthest from
/// `reference`, then repeatedly add the one farthest from the chosen set.
/// Ties go to the lower index.
pub fn select_dispersed(candidates: &[Configuration], k: usize, reference: &Configuration) -> Vec<usize> {
    let k = k.min(candidates.len());
    if k == 0 {
        return Vec::new();
    }
    let argmax = |score: &dyn Fn(usize) -> f64, taken: &[bool]| -> usize {
        let mut best = usize::MAX;
        let mut best_v = f64::NEG_INFINITY;
        for i in 0..candidates.len() {
            if taken[i] {
                continue;
            }
            let v = score(i);
            if v > best_v {
                best_v = v;
                best = i;
            }
        }
        best
    };
    let mut taken = vec![false; candidates.len()];
    let first = argmax(&|i| candidates[i].distance(reference), &taken);
    taken[first] = true;
    let mut chosen = vec![first];
    let mut min_d: Vec<f64> = candidates.iter().map(|c| c.distance(&candidates[first])).collect();
    while chosen.len() < k {
        let next = argmax(&|i| min_d[i], &taken);
        taken[next] = true;
        chosen.push(next);
        for (i, c) in candidates.iter().enumerate() {
            min_d[i] = min_d[i].min(c.distance(&candidates[next]));
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispersion_picks_extremes() {
        let pts: Vec<Configuration> = [0.0, 0.1, 0.5, 0.9, 1.0]
            .iter()
            .map(|x| Configuration::new(vec![*x]))
            .collect();
        let picked = select_dispersed(&pts, 3, &Configuration::new(vec![0.0]));
        assert_eq!(picked, vec![4, 0, 2]);
    }

    #[test]
    fn selection_is_capped_by_candidates() {
        let pts = vec![Configuration::new(vec![0.0]); 2];
        assert_eq!(select_dispersed(&pts, 5, &Configuration::new(vec![1.0])).len(), 2);
    }
}
