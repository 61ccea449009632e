//! Episodic environment: reset/step over a rasterized plan with discrete
//! actions, egocentric observations, and pluggable per-step rewards.

mod config;
mod episode;
mod reward;
mod rollout;

pub use config::{Action, EpisodeConfig, Mode, RewardSpec, RobotSpec};
pub use episode::{explored_area, Env, StepInfo, StepResult};
pub use reward::{
    reward_by_name, reward_exploration, reward_obstacle_avoidance, Exploration, ObstacleAvoidance, RewardFn,
    RewardInput, REWARD_NAMES,
};
pub use rollout::{instance_seed, policy_rng, run_episode, EpisodeSummary, RolloutRecord, RolloutWriter};

use thiserror::Error;

use crate::gridmap::GridError;
use crate::sensing::SensingError;
use crate::worldgen::WorldgenError;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("no collision-free start pose: free space is smaller than the robot")]
    NoStartPose,
    #[error("episode is over; call reset")]
    EpisodeDone,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Sensing(#[from] SensingError),
    #[error(transparent)]
    Worldgen(#[from] WorldgenError),
    #[error("writing rollout: {0}")]
    Io(#[from] std::io::Error),
}
