//! Keyframe sampling inside channels, local exploration trees, and budgeted
//! bidirectional RRT connection of keyframe sequences.

mod birrt;
mod keyframes;
mod nn;
mod sequence;
mod tree;

pub use birrt::{birrt, rrt_connect_baseline, RrtOptions, RrtVariant};
pub use keyframes::{sample_keyframes, select_dispersed, Keyframe, KEYFRAME_ATTEMPTS_PER_KEY};
pub use sequence::{birrt_connect, get_all_paths, ConnectOutcome, KeyframeSequence};
pub use tree::{connect_and_merge, grow_local_rrt, prioritize, ExplorationTree, Region};

use crate::robot::Configuration;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LowLevelError {
    #[error("no valid keyframe found in channel {0}")]
    ChannelUnreachable(String),
    #[error("budget exhausted before the trees connected")]
    BudgetExhausted,
}

/// Collision-free waypoint sequence with the resolution it was certified at.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub waypoints: Vec<Configuration>,
    pub resolution: f64,
    /// Labels of the anchors the trajectory was stitched through.
    pub source: Vec<String>,
}

impl Trajectory {
    pub fn joint_length(&self) -> f64 {
        self.waypoints.windows(2).map(|w| w[0].distance(&w[1])).sum()
    }
}
