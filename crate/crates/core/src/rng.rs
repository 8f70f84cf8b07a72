//! Deterministic random streams keyed by (master seed, stream id).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type PlannerRng = ChaCha8Rng;

/// Independent generator for one task of a run.
pub fn stream(seed: u64, stream_id: u64) -> PlannerRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Stream-id bases for the phases of a planning run.
pub mod ids {
    pub const NODE_WEIGHTS: u64 = 1 << 20;
    pub const EDGE_WEIGHTS: u64 = 2 << 20;
    pub const KEYFRAMES: u64 = 3 << 20;
    pub const LOCAL_TREES: u64 = 4 << 20;
    pub const CONNECT: u64 = 5 << 20;
    pub const FALLBACK: u64 = 6 << 20;
}
