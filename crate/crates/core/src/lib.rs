pub mod geometry;
pub mod robot;
pub mod scene;
pub mod topology;
pub mod clock;
pub mod rng;
pub mod channelgraph;
pub mod lowlevel;
pub mod planner;
pub mod harness;
