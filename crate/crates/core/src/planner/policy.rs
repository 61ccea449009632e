use rand::{Rng, RngCore};

use super::{FrontierPolicy, PlannerError};
use crate::env::{Action, RobotSpec};
use crate::gridmap::{OccupancyGrid, Pose};

/// What a policy gets to look at each step.
#[derive(Debug, Clone, Copy)]
pub struct PolicyView<'a> {
    /// The robot's own map, not the ground truth.
    pub map: &'a OccupancyGrid,
    pub pose: Pose,
    pub robot: &'a RobotSpec,
    /// Whether the previous step ended in a collision.
    pub last_collision: bool,
}

/// A scripted controller choosing one of the three discrete actions.
pub trait Policy: Send {
    fn name(&self) -> &'static str;

    fn act(&mut self, view: &PolicyView<'_>, rng: &mut dyn RngCore) -> Action;

    /// Forget per-episode state.
    fn reset(&mut self) {}
}

/// Each action with probability 1/3.
pub fn random_action(rng: &mut (impl RngCore + ?Sized)) -> Action {
    Action::ALL[rng.random_range(0..Action::ALL.len())]
}

#[derive(Debug, Default, Clone)]
pub struct RandomPolicy;

impl Policy for RandomPolicy {
    fn name(&self) -> &'static str {
        "random"
    }

    fn act(&mut self, _view: &PolicyView<'_>, rng: &mut dyn RngCore) -> Action {
        random_action(rng)
    }
}

pub const POLICY_NAMES: [&str; 2] = ["random", "frontier"];

pub fn policy_by_name(name: &str) -> Result<Box<dyn Policy>, PlannerError> {
    match name {
        "random" => Ok(Box::new(RandomPolicy)),
        "frontier" => Ok(Box::new(FrontierPolicy::default())),
        other => Err(PlannerError::UnknownPolicy(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_over_three_actions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 300_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            counts[random_action(&mut rng) as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 1.0 / 3.0).abs() < 0.01);
        }
    }

    #[test]
    fn seeded_streams() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..100).map(|_| random_action(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(1), draw(1));
        assert_ne!(draw(1), draw(2));
    }

    #[test]
    fn registry_lookup() {
        for name in POLICY_NAMES {
            assert_eq!(policy_by_name(name).unwrap().name(), name);
        }
        assert!(policy_by_name("greedy").is_err());
    }
}
