use super::{Action, EnvError, RewardSpec};

/// Everything a reward function may look at for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardInput {
    pub collision: bool,
    /// Newly discovered area this step, m².
    pub new_area: f64,
    pub action: Action,
}

/// A per-step reward rule, selected by name from the episode config.
pub trait RewardFn: Send + Sync {
    fn name(&self) -> &'static str;
    fn reward(&self, input: &RewardInput, spec: &RewardSpec) -> f64;
}

/// Penalty on collision; otherwise weighted new area plus a bonus for
/// moving forward.
pub fn reward_obstacle_avoidance(collision: bool, new_area: f64, action: Action, spec: &RewardSpec) -> f64 {
    if collision {
        return spec.collision_penalty;
    }
    let forward = if action == Action::Forward { 1.0 } else { 0.0 };
    spec.alpha_s * (new_area / spec.area_unit) + spec.alpha_a * forward
}

/// Scaled newly discovered area.
pub fn reward_exploration(new_area: f64, spec: &RewardSpec) -> f64 {
    spec.exploration_alpha * (new_area / spec.area_unit)
}

pub struct ObstacleAvoidance;

impl RewardFn for ObstacleAvoidance {
    fn name(&self) -> &'static str {
        "obstacle_avoidance"
    }

    fn reward(&self, input: &RewardInput, spec: &RewardSpec) -> f64 {
        reward_obstacle_avoidance(input.collision, input.new_area, input.action, spec)
    }
}

pub struct Exploration;

impl RewardFn for Exploration {
    fn name(&self) -> &'static str {
        "exploration"
    }

    fn reward(&self, input: &RewardInput, spec: &RewardSpec) -> f64 {
        reward_exploration(input.new_area, spec)
    }
}

pub const REWARD_NAMES: [&str; 2] = ["obstacle_avoidance", "exploration"];

pub fn reward_by_name(name: &str) -> Result<Box<dyn RewardFn>, EnvError> {
    match name {
        "obstacle_avoidance" => Ok(Box::new(ObstacleAvoidance)),
        "exploration" => Ok(Box::new(Exploration)),
        other => {
            Err(EnvError::Config(format!("unknown reward {other:?} (expected one of: {})", REWARD_NAMES.join(", "))))
        }
    }
}
