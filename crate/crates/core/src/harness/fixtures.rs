//! Bundled benchmark scenes and their calibration records.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::scene::{parse_scene, Scene};

pub struct Fixture {
    pub name: &'static str,
    pub source: &'static str,
}

impl Fixture {
    pub fn scene(&self) -> Scene {
        parse_scene(self.source).unwrap_or_else(|e| panic!("bundled fixture {} is invalid: {e}", self.name))
    }
}

const FIXTURES: [Fixture; 6] = [
    Fixture { name: "frame", source: include_str!("../../fixtures/frame.json") },
    Fixture { name: "two_chamber", source: include_str!("../../fixtures/two_chamber.json") },
    Fixture { name: "shelf", source: include_str!("../../fixtures/shelf.json") },
    Fixture { name: "offset_slits", source: include_str!("../../fixtures/offset_slits.json") },
    Fixture { name: "rubble", source: include_str!("../../fixtures/rubble.json") },
    Fixture { name: "wall_with_slit", source: include_str!("../../fixtures/wall_with_slit.json") },
];

/// The benchmark suite proper; `wall_with_slit` is a smaller test scene.
pub const BENCH_FIXTURES: [&str; 5] = ["frame", "two_chamber", "shelf", "offset_slits", "rubble"];

pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|f| f.name)
}

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

/// Calibrated numbers for one fixture, from `fixtures/manifest.json`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FixtureCalibration {
    /// Gap between the object's cross-section and the tightest opening.
    pub clearance_m: f64,
    pub time_limit_s: f64,
    pub trials: usize,
    pub b_min_s: f64,
    pub checks_per_second: f64,
    /// Success rate per planner id.
    pub success_rate: BTreeMap<String, f64>,
}

pub fn manifest() -> BTreeMap<String, FixtureCalibration> {
    serde_json::from_str(include_str!("../../fixtures/manifest.json")).expect("bundled manifest is valid")
}
