use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channelgraph::{GraphParams, PassMode};
use crate::clock::BudgetMode;
use crate::scene::DEFAULT_RESOLUTION;
use crate::topology::ChannelFilterParams;

/// Every tunable of a planning run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub l_max: usize,
    pub n_key: usize,
    pub k_select: usize,
    pub s_max: usize,
    pub kappa: f64,
    pub epsilon: f64,
    /// Budget of the first BiRRT segment of a sequence, in seconds.
    pub b_min: f64,
    pub time_limit: f64,
    pub resolution: f64,
    pub clearance_margin: f64,
    pub contact_tol: f64,
    pub max_loop_len: usize,
    pub n_samples: usize,
    pub n_pairs: usize,
    pub pass_mode: PassMode,
    pub max_residual: f64,
    pub min_area: f64,
    pub shrink_margin: f64,
    pub interior_samples: usize,
    pub max_thickness_probe: f64,
    /// RRT step as a fraction of the joint-range diagonal.
    pub step_fraction: f64,
    pub delta_rot: f64,
    pub delta_trans: f64,
    pub local_iterations: usize,
    pub shortcut: bool,
    pub budget_mode: BudgetMode,
    /// Off: skip topology and plan with full-space BiRRT.
    pub high_level: bool,
    /// Off: keyframes keep their sampling order.
    pub prioritize: bool,
    pub seed: u64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        let f = ChannelFilterParams::default();
        let g = GraphParams::default();
        PlannerConfig {
            alpha: g.alpha,
            beta: g.beta,
            gamma: 3.0,
            l_max: 4,
            n_key: 20,
            k_select: 5,
            s_max: 64,
            kappa: 2.0,
            epsilon: g.epsilon,
            b_min: 20.0,
            time_limit: 60.0,
            resolution: DEFAULT_RESOLUTION,
            clearance_margin: 0.0,
            contact_tol: f.contact_tol,
            max_loop_len: 8,
            n_samples: g.n_samples,
            n_pairs: g.n_pairs,
            pass_mode: g.pass_mode,
            max_residual: f.max_residual,
            min_area: f.min_area,
            shrink_margin: f.shrink_margin,
            interior_samples: f.interior_samples,
            max_thickness_probe: f.max_thickness_probe,
            step_fraction: 0.05,
            delta_rot: 0.5,
            delta_trans: 0.25,
            local_iterations: 100,
            shortcut: true,
            budget_mode: BudgetMode::WallClock,
            high_level: true,
            prioritize: true,
            seed: 0,
        }
    }
}

pub fn default_config() -> PlannerConfig {
    PlannerConfig::default()
}

impl PlannerConfig {
    pub fn filter_params(&self) -> ChannelFilterParams {
        ChannelFilterParams {
            max_residual: self.max_residual,
            min_area: self.min_area,
            shrink_margin: self.shrink_margin,
            interior_samples: self.interior_samples,
            max_thickness_probe: self.max_thickness_probe,
            contact_tol: self.contact_tol,
            allow_single_parent: false,
        }
    }

    pub fn graph_params(&self) -> GraphParams {
        GraphParams {
            alpha: self.alpha,
            beta: self.beta,
            epsilon: self.epsilon,
            n_samples: self.n_samples,
            n_pairs: self.n_pairs,
            pass_mode: self.pass_mode,
        }
    }

    /// Parse a JSON config; missing fields take their defaults. Errors name
    /// the offending field.
    pub fn from_json(source: &str) -> Result<Self, String> {
        let de = &mut serde_json::Deserializer::from_str(source);
        let cfg: PlannerConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            format!("{path}: {}", e.into_inner())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("b_min", self.b_min),
            ("resolution", self.resolution),
            ("step_fraction", self.step_fraction),
            ("contact_tol", self.contact_tol),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.time_limit >= 0.0) {
            return Err(format!("time_limit must be non-negative, got {}", self.time_limit));
        }
        if !(self.kappa >= 1.0) {
            return Err(format!("kappa must be at least 1, got {}", self.kappa));
        }
        if !(self.clearance_margin >= 0.0) {
            return Err("clearance_margin must be non-negative".into());
        }
        for (name, v) in [("n_key", self.n_key), ("k_select", self.k_select), ("s_max", self.s_max)] {
            if v == 0 {
                return Err(format!("{name} must be at least 1"));
            }
        }
        if let BudgetMode::Checks { checks_per_second } = self.budget_mode {
            if !(checks_per_second > 0.0) {
                return Err("checks_per_second must be positive".into());
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlannerId {
    Tapom,
    TapomNoHighlevel,
    TapomNoPrioritize,
    RrtConnect,
    BirrtPlain,
}

impl PlannerId {
    pub const ALL: [PlannerId; 5] = [
        PlannerId::Tapom,
        PlannerId::TapomNoHighlevel,
        PlannerId::TapomNoPrioritize,
        PlannerId::RrtConnect,
        PlannerId::BirrtPlain,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PlannerId::Tapom => "tapom",
            PlannerId::TapomNoHighlevel => "tapom_no_highlevel",
            PlannerId::TapomNoPrioritize => "tapom_no_prioritize",
            PlannerId::RrtConnect => "rrt_connect",
            PlannerId::BirrtPlain => "birrt_plain",
        }
    }
}

impl fmt::Display for PlannerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PlannerId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlannerId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = PlannerId::ALL.iter().map(|p| p.as_str()).collect();
                format!("unknown planner `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_partial_and_errors() {
        let cfg = PlannerConfig::from_json(r#"{"seed": 7, "budget_mode": {"checks": {"checks_per_second": 1000.0}}}"#).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.alpha, 1.0);
        assert_eq!(cfg.budget_mode, BudgetMode::Checks { checks_per_second: 1000.0 });
        let err = PlannerConfig::from_json(r#"{"kappa": "two"}"#).unwrap_err();
        assert!(err.starts_with("kappa"), "{err}");
        assert!(PlannerConfig::from_json(r#"{"bogus": 1}"#).is_err());
        assert!(PlannerConfig::from_json(r#"{"kappa": 0.5}"#).unwrap_err().contains("kappa"));
    }

    #[test]
    fn defaults_round_trip_through_json() {
        let cfg = default_config();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: PlannerConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn partial_json_keeps_defaults() {
        let cfg: PlannerConfig = serde_json::from_str(r#"{"gamma": 1.5, "seed": 9}"#).unwrap();
        assert_eq!(cfg.gamma, 1.5);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.l_max, 4);
        assert!(serde_json::from_str::<PlannerConfig>(r#"{"gama": 1}"#).is_err());
    }

    #[test]
    fn planner_names_parse() {
        for p in PlannerId::ALL {
            assert_eq!(p.as_str().parse::<PlannerId>().unwrap(), p);
        }
        assert!("rrt".parse::<PlannerId>().is_err());
    }

    #[test]
    fn invalid_values_are_reported() {
        let mut cfg = default_config();
        cfg.kappa = 0.5;
        assert!(cfg.validate().unwrap_err().contains("kappa"));
    }
}
