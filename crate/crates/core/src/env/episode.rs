use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::reward::{reward_by_name, RewardFn, RewardInput};
use super::{Action, EnvError, EpisodeConfig, Mode};
use crate::floorplan::FloorPlan;
use crate::gridmap::{crop_local, rasterize, CellState, OccupancyGrid, Pose};
use crate::sensing::{merge_into, perturb_ranges, perturb_registration, scan};
use crate::worldgen::{generate_obstacles, ObstacleSet};

/// Step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepInfo {
    pub collision: bool,
    /// Cells that went from Unknown to known this step.
    pub new_cells: usize,
    /// Known area of the built map, m².
    pub explored_area: f64,
    pub pose: Pose,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    /// Egocentric crop of the built map.
    pub observation: OccupancyGrid,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

/// Known area of `map` in m².
pub fn explored_area(map: &OccupancyGrid) -> f64 {
    map.known_count() as f64 * map.resolution() * map.resolution()
}

/// One episode: ground truth, the robot's map, and its pose.
pub struct Env {
    config: EpisodeConfig,
    /// Walls only.
    base: OccupancyGrid,
    /// Walls plus current obstacles.
    truth: OccupancyGrid,
    obstacles: ObstacleSet,
    map: OccupancyGrid,
    /// Known cells in `map`, kept incrementally so a step never scans the whole map.
    known: usize,
    pose: Pose,
    steps: usize,
    done: bool,
    collisions: usize,
    rng: ChaCha8Rng,
    reward_fn: Box<dyn RewardFn>,
}

impl std::fmt::Debug for Env {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Env")
            .field("pose", &self.pose)
            .field("steps", &self.steps)
            .field("done", &self.done)
            .field("collisions", &self.collisions)
            .finish_non_exhaustive()
    }
}

impl Env {
    /// Rasterize `plan` and start an episode.
    pub fn reset(config: &EpisodeConfig, plan: &FloorPlan) -> Result<(Env, StepResult), EnvError> {
        config.validate()?;
        let base = rasterize(plan, config.resolution, config.wall_thickness)?;
        Self::reset_on_grid(config, base)
    }

    /// Start an episode on an already rasterized ground truth.
    ///
    /// Order of random draws: obstacles, start pose, then per-step noise.
    pub fn reset_on_grid(config: &EpisodeConfig, base: OccupancyGrid) -> Result<(Env, StepResult), EnvError> {
        config.validate()?;
        if (base.resolution() - config.resolution).abs() > 1e-12 {
            return Err(EnvError::Config(format!(
                "ground truth resolution {} differs from config resolution {}",
                base.resolution(),
                config.resolution
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let (truth, obstacles) = generate_obstacles(&base, &config.obstacles, None, &mut rng)?;
        let pose = sample_start_pose(&truth, config.robot.radius, &mut rng)?;
        let map = match config.mode {
            Mode::NavigationKnown => truth.clone(),
            Mode::ExplorationUnknown => OccupancyGrid::filled(
                truth.width(),
                truth.height(),
                truth.resolution(),
                truth.origin(),
                CellState::Unknown,
            )?,
        };
        let reward_fn = reward_by_name(&config.reward.kind)?;
        let mut env = Env {
            config: config.clone(),
            base,
            truth,
            obstacles,
            known: map.known_count(),
            map,
            pose,
            steps: 0,
            done: false,
            collisions: 0,
            rng,
            reward_fn,
        };
        let new_cells = env.sense()?;
        let result = StepResult {
            observation: env.observation()?,
            reward: 0.0,
            done: false,
            info: StepInfo { collision: false, new_cells, explored_area: env.explored_area(), pose },
        };
        Ok((env, result))
    }

    /// Scan the ground truth, disturb the sector, and merge it.
    fn sense(&mut self) -> Result<usize, EnvError> {
        let sector = scan(&self.truth, self.pose, &self.config.sensor)?;
        let sector = perturb_ranges(&sector, &self.config.noise, &mut self.rng);
        let sector = perturb_registration(&sector, &self.config.noise, &mut self.rng);
        let fresh = merge_into(&mut self.map, &sector)?;
        self.known += fresh;
        Ok(fresh)
    }

    /// Known area of the built map, m².
    pub fn explored_area(&self) -> f64 {
        let res = self.map.resolution();
        self.known as f64 * res * res
    }

    pub fn observation(&self) -> Result<OccupancyGrid, EnvError> {
        Ok(crop_local(&self.map, self.pose, self.config.observation_side)?)
    }

    fn collides(&self, pose: Pose) -> bool {
        let cell = self.truth.world_to_cell(pose.x, pose.y);
        !self.truth.contains(cell) || self.truth.disc_hits_obstacle(pose.x, pose.y, self.config.robot.radius)
    }

    pub fn step(&mut self, action: Action) -> Result<StepResult, EnvError> {
        if self.done {
            return Err(EnvError::EpisodeDone);
        }
        let robot = self.config.robot;
        let candidate = match action {
            Action::Forward => self.pose.advanced(robot.linear_step),
            Action::RotateLeft => self.pose.rotated(robot.angular_step.to_radians()),
            Action::RotateRight => self.pose.rotated(-robot.angular_step.to_radians()),
        };
        let collision = self.collides(candidate);
        self.steps += 1;
        let mut new_cells = 0;
        if collision {
            self.collisions += 1;
        } else {
            self.pose = candidate;
            if self.obstacles.has_dynamic() {
                self.advance_obstacles();
            }
            new_cells = self.sense()?;
        }
        let res = self.map.resolution();
        let new_area = new_cells as f64 * res * res;
        let reward = self.reward_fn.reward(&RewardInput { collision, new_area, action }, &self.config.reward);
        self.done = self.steps >= self.config.max_steps || (collision && self.config.terminate_on_collision);
        Ok(StepResult {
            observation: self.observation()?,
            reward,
            done: self.done,
            info: StepInfo { collision, new_cells, explored_area: self.explored_area(), pose: self.pose },
        })
    }

    /// Dynamic obstacles step along their trajectories but hold still rather
    /// than run into the robot.
    fn advance_obstacles(&mut self) {
        let (gx, gy) = self.base.world_to_grid(self.pose.x, self.pose.y);
        let r = self.config.robot.radius / self.base.resolution();
        let clear_of_robot = |cells: &[crate::gridmap::Cell]| {
            cells.iter().all(|c| {
                let dx = (c.x as f64 - gx).max(0.0).max(gx - (c.x + 1) as f64);
                let dy = (c.y as f64 - gy).max(0.0).max(gy - (c.y + 1) as f64);
                dx * dx + dy * dy >= r * r
            })
        };
        // restore the old footprints from the base map, then stamp the new ones
        for o in &self.obstacles.obstacles {
            for &c in &o.cells {
                self.truth.set(c, self.base.get_or_unknown(c));
            }
        }
        self.obstacles.advance_with(&self.base, self.steps, clear_of_robot);
        for o in &self.obstacles.obstacles {
            for &c in &o.cells {
                self.truth.set(c, CellState::Obstacle);
            }
        }
    }

    pub fn pose(&self) -> Pose {
        self.pose
    }

    pub fn map(&self) -> &OccupancyGrid {
        &self.map
    }

    pub fn ground_truth(&self) -> &OccupancyGrid {
        &self.truth
    }

    pub fn obstacles(&self) -> &ObstacleSet {
        &self.obstacles
    }

    pub fn config(&self) -> &EpisodeConfig {
        &self.config
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn collisions(&self) -> usize {
        self.collisions
    }

    pub fn is_done(&self) -> bool {
        self.done
    }
}

/// Uniform over Free cells whose center keeps the robot disc (plus one cell)
/// clear of obstacles; heading uniform.
fn sample_start_pose(truth: &OccupancyGrid, radius: f64, rng: &mut impl Rng) -> Result<Pose, EnvError> {
    let clearance = radius + truth.resolution();
    let candidates: Vec<usize> = (0..truth.len())
        .filter(|&i| truth.cells()[i] == CellState::Free)
        .filter(|&i| {
            let (x, y) = truth.cell_center(truth.cell_at_index(i));
            !truth.disc_hits_obstacle(x, y, clearance)
        })
        .collect();
    if candidates.is_empty() {
        return Err(EnvError::NoStartPose);
    }
    let (x, y) = truth.cell_center(truth.cell_at_index(candidates[rng.random_range(0..candidates.len())]));
    let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    Ok(Pose::new(x, y, theta))
}
