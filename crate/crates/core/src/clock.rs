//! Planning time in seconds, measured either on the wall clock or as a
//! nominal conversion of validity checks.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::scene::ValidityChecker;

/// Nominal validity-check throughput used to turn seconds into checks.
pub const NOMINAL_CHECKS_PER_SECOND: f64 = 700_000.0;

/// Nearest-neighbor distance evaluations that cost as much as one check.
pub const NEIGHBOR_EVALS_PER_CHECK: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BudgetMode {
    WallClock,
    /// Every `config_valid` call costs `1 / checks_per_second` seconds and
    /// every `NEIGHBOR_EVALS_PER_CHECK` neighbor-search distances cost as much.
    Checks { checks_per_second: f64 },
}

impl BudgetMode {
    pub fn deterministic() -> Self {
        BudgetMode::Checks {
            checks_per_second: NOMINAL_CHECKS_PER_SECOND,
        }
    }
}

/// Elapsed-time source bound to one checker.
pub struct Clock<'a> {
    mode: BudgetMode,
    checker: &'a ValidityChecker,
    started: Instant,
    start_checks: u64,
    start_evals: u64,
}

impl<'a> Clock<'a> {
    pub fn start(mode: BudgetMode, checker: &'a ValidityChecker) -> Self {
        Clock {
            mode,
            checker,
            started: Instant::now(),
            start_checks: checker.checks(),
            start_evals: checker.neighbor_evals(),
        }
    }

    pub fn mode(&self) -> BudgetMode {
        self.mode
    }

    /// Seconds since `start`, real or nominal.
    pub fn elapsed(&self) -> f64 {
        match self.mode {
            BudgetMode::WallClock => self.started.elapsed().as_secs_f64(),
            BudgetMode::Checks { checks_per_second } => {
                let checks = (self.checker.checks() - self.start_checks) as f64;
                let evals = (self.checker.neighbor_evals() - self.start_evals) as f64;
                (checks + evals / NEIGHBOR_EVALS_PER_CHECK) / checks_per_second
            }
        }
    }

    pub fn past(&self, deadline: f64) -> bool {
        self.elapsed() >= deadline
    }

    /// Absolute deadline `seconds` from now.
    pub fn after(&self, seconds: f64) -> f64 {
        self.elapsed() + seconds
    }
}
