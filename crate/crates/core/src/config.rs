//! TOML experiment files.
//!
//! Every table is optional; omitted keys take the library defaults.
//!
//! ```toml
//! seed = 7                 # base seed, trial i uses seed + i
//! trials = 20
//!
//! [mission]
//! kind = "search_return_land"   # track_visible | forward_search_hover |
//!                               # search_return_land | carrier_coordination
//! search_color = "pink"
//! home_color = "blue"           # defaults to the landing marker color
//! timeout_s = 120.0
//!
//! [mission.params]
//! hover_dwell = 1.0
//! land_threshold = 20.0
//! land_dwell = 5
//!
//! [mission.trajectory]
//! pattern = "forward"           # forward | square | random | custom
//! segment_duration_s = 60.0
//! offset_px = 100.0
//! # random: segments = 4, random_seed = 3
//! # custom: custom = [{ target = [320, 80], terminate_on = { duration = 5.0 } }]
//!
//! [sim]
//! dt = 0.1
//! altitude = 1.0
//! perception = "rendered"       # rendered | ground_truth
//! frame = { width = 640, height = 360, focal_length = 320.0 }
//! gains = { k = 0.0005, hover_threshold = 50.0, max_speed = 1.0 }
//! noise = { drift_std = 0.01, takeoff_jitter_std = 0.05 }
//!
//! [world]
//! carrier_start = [0.0, 0.0]
//! carrier_path = []
//! carrier_speed = 0.5
//! landing_marker_radius = 0.15
//! markers = [{ position = [2.0, 0.0], radius = 0.1, color = "pink" }]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harness::{Campaign, Scenario};
use crate::imagination::{self, Direction, ImaginationError, ImaginedSegment, ImaginedTrajectory};
use crate::mission::{
    MissionError, MissionKind, MissionParams, MissionSpec, DEFAULT_SEARCH_DURATION_S, DEFAULT_TIMEOUT_S,
};
use crate::perception::ColorClass;
use crate::sim::SimConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("no mission kind given")]
    MissingKind,
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl From<MissionError> for ConfigError {
    fn from(e: MissionError) -> Self {
        ConfigError::Invalid(e.to_string())
    }
}

impl From<ImaginationError> for ConfigError {
    fn from(e: ImaginationError) -> Self {
        ConfigError::Invalid(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    #[default]
    Forward,
    Square,
    Random,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajectorySection {
    pub pattern: Pattern,
    pub segment_duration_s: f64,
    pub offset_px: f64,
    pub segments: usize,
    pub random_seed: Option<u64>,
    pub custom: Vec<ImaginedSegment>,
}

impl Default for TrajectorySection {
    fn default() -> Self {
        Self {
            pattern: Pattern::Forward,
            segment_duration_s: DEFAULT_SEARCH_DURATION_S,
            offset_px: imagination::DEFAULT_OFFSET_PX,
            segments: 4,
            random_seed: None,
            custom: Vec::new(),
        }
    }
}

impl TrajectorySection {
    pub fn build(&self, cfg: &SimConfig, base_seed: u64) -> Result<ImaginedTrajectory, ConfigError> {
        let seg = |d| {
            ImaginedSegment::for_duration(
                imagination::cardinal_target(&cfg.frame, d, self.offset_px),
                self.segment_duration_s,
            )
        };
        let t = match self.pattern {
            Pattern::Forward => ImaginedTrajectory::new(vec![seg(Direction::Forward)])?,
            Pattern::Square => ImaginedTrajectory::new(
                [
                    Direction::Forward,
                    Direction::Right,
                    Direction::Backward,
                    Direction::Left,
                ]
                .into_iter()
                .map(seg)
                .collect(),
            )?,
            Pattern::Random => imagination::random_trajectory(
                &cfg.frame,
                self.segments,
                self.segment_duration_s,
                self.offset_px,
                self.random_seed.unwrap_or(base_seed),
            )?,
            Pattern::Custom => ImaginedTrajectory::new(self.custom.clone())?,
        };
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MissionSection {
    pub kind: Option<MissionKind>,
    pub search_color: ColorClass,
    pub home_color: Option<ColorClass>,
    pub timeout_s: f64,
    pub params: MissionParams,
    pub trajectory: TrajectorySection,
}

impl Default for MissionSection {
    fn default() -> Self {
        Self {
            kind: None,
            search_color: ColorClass::Pink,
            home_color: None,
            timeout_s: DEFAULT_TIMEOUT_S,
            params: MissionParams::default(),
            trajectory: TrajectorySection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub mission: MissionSection,
    pub sim: SimConfig,
    pub world: Option<Scenario>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 20,
            mission: MissionSection::default(),
            sim: SimConfig::default(),
            world: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Builds a validated campaign. `kind` overrides `mission.kind`.
    pub fn campaign(&self, kind: Option<MissionKind>) -> Result<Campaign, ConfigError> {
        let kind = kind.or(self.mission.kind).ok_or(ConfigError::MissingKind)?;
        self.sim.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let scenario = self.world.clone().unwrap_or_else(|| Scenario::for_kind(kind));

        let trajectory = if kind.searches() {
            self.mission.trajectory.build(&self.sim, self.seed)?
        } else {
            ImaginedTrajectory::default()
        };
        let spec = MissionSpec {
            kind,
            search_color: self.mission.search_color,
            home_color: if kind.returns_home() {
                Some(self.mission.home_color.unwrap_or(scenario.landing_marker_color))
            } else {
                self.mission.home_color
            },
            trajectory,
            timeout: self.mission.timeout_s,
            params: self.mission.params,
        };
        spec.validate()?;
        if self.trials == 0 {
            return Err(ConfigError::Invalid("trials must be at least 1".into()));
        }
        Ok(Campaign {
            spec,
            scenario,
            config: self.sim,
            trials: self.trials,
            base_seed: self.seed,
        })
    }
}
