use serde::{Deserialize, Serialize};

use super::EnvError;
use crate::gridmap::DEFAULT_WALL_THICKNESS;
use crate::sensing::{NoiseSpec, SensorSpec};
use crate::worldgen::ObstacleSpec;

/// The three discrete moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[repr(u8)]
pub enum Action {
    Forward,
    RotateLeft,
    RotateRight,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::Forward, Action::RotateLeft, Action::RotateRight];
}

/// Circular robot and its step sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RobotSpec {
    /// Meters.
    pub radius: f64,
    /// Forward step, meters.
    pub linear_step: f64,
    /// Rotation step, degrees.
    pub angular_step: f64,
}

impl Default for RobotSpec {
    fn default() -> Self {
        Self { radius: 0.15, linear_step: 0.3, angular_step: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RewardSpec {
    /// Registered reward function name.
    pub kind: String,
    pub alpha_s: f64,
    pub alpha_a: f64,
    pub collision_penalty: f64,
    pub exploration_alpha: f64,
    /// Square meters per unit of area reward.
    pub area_unit: f64,
}

impl Default for RewardSpec {
    fn default() -> Self {
        Self {
            kind: "obstacle_avoidance".into(),
            alpha_s: 0.9,
            alpha_a: 0.1,
            collision_penalty: -1.0,
            exploration_alpha: 1.0,
            area_unit: 1.0,
        }
    }
}

/// What the robot knows at the start of an episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Empty initial map.
    #[default]
    ExplorationUnknown,
    /// Initial map equals the ground truth.
    NavigationKnown,
}

/// Full episode configuration, loadable from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EpisodeConfig {
    pub mode: Mode,
    /// Meters per cell.
    pub resolution: f64,
    /// Rasterized wall thickness, meters.
    pub wall_thickness: f64,
    pub sensor: SensorSpec,
    pub noise: NoiseSpec,
    pub robot: RobotSpec,
    pub obstacles: ObstacleSpec,
    /// Side of the egocentric observation, meters.
    pub observation_side: f64,
    pub max_steps: usize,
    pub reward: RewardSpec,
    pub terminate_on_collision: bool,
    pub seed: u64,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        Self {
            mode: Mode::ExplorationUnknown,
            resolution: 0.1,
            wall_thickness: DEFAULT_WALL_THICKNESS,
            sensor: SensorSpec::default(),
            noise: NoiseSpec::default(),
            robot: RobotSpec::default(),
            obstacles: ObstacleSpec::default(),
            observation_side: 3.0,
            max_steps: 200,
            reward: RewardSpec::default(),
            terminate_on_collision: false,
            seed: 0,
        }
    }
}

impl EpisodeConfig {
    pub fn from_json(text: &str) -> Result<Self, EnvError> {
        let config: Self = serde_json::from_str(text).map_err(|e| EnvError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(EnvError::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("resolution", self.resolution)?;
        positive("observation_side", self.observation_side)?;
        positive("robot.radius", self.robot.radius)?;
        positive("robot.linear_step", self.robot.linear_step)?;
        positive("robot.angular_step", self.robot.angular_step)?;
        positive("reward.area_unit", self.reward.area_unit)?;
        if !(self.wall_thickness >= 0.0 && self.wall_thickness.is_finite()) {
            return Err(EnvError::Config(format!("wall_thickness must be >= 0, got {}", self.wall_thickness)));
        }
        if self.max_steps == 0 {
            return Err(EnvError::Config("max_steps must be at least 1".into()));
        }
        if self.reward.alpha_s < 0.0 || self.reward.alpha_a < 0.0 || self.reward.exploration_alpha < 0.0 {
            return Err(EnvError::Config("reward weights must be non-negative".into()));
        }
        super::reward::reward_by_name(&self.reward.kind)?;
        self.sensor.validate(self.resolution).map_err(|e| EnvError::Config(e.to_string()))?;
        self.noise.validate().map_err(|e| EnvError::Config(e.to_string()))?;
        self.obstacles.validate().map_err(|e| EnvError::Config(e.to_string()))?;
        Ok(())
    }
}
