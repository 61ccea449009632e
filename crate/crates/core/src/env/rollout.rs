use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Action, Env, EnvError, StepResult};
use crate::gridmap::{render_raw, Palette, Pose};
use crate::planner::{Policy, PolicyView};

/// One line of the JSON-lines rollout dump.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RolloutRecord {
    pub step: usize,
    pub pose: Pose,
    pub action: Action,
    pub reward: f64,
    pub collision: bool,
    pub new_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpisodeSummary {
    pub policy: String,
    pub seed: u64,
    pub steps: usize,
    pub total_reward: f64,
    pub explored_area: f64,
    pub collisions: usize,
    /// Explored area after reset and after every step, m².
    pub explored_curve: Vec<f64>,
}

/// Where rollout artifacts go: JSON-lines records and, optionally, raw
/// observation frames (observation palette, one side×side frame per step
/// including the initial one).
pub struct RolloutWriter<'a> {
    pub records: &'a mut dyn Write,
    pub observations: Option<&'a mut dyn Write>,
}

/// Independent seed for parallel instance `index` of a run seeded with `base`.
pub fn instance_seed(base: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(base ^ mix(index))
}

/// Policy decisions draw from their own stream so they never perturb the
/// environment's noise sequence.
pub fn policy_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

/// Drive `env` with `policy` for up to `steps` steps (fewer if the episode
/// ends first).
pub fn run_episode(
    env: &mut Env,
    first: &StepResult,
    policy: &mut dyn Policy,
    steps: usize,
    mut out: Option<&mut RolloutWriter<'_>>,
) -> Result<EpisodeSummary, EnvError> {
    let mut rng = policy_rng(env.config().seed);
    policy.reset();
    let mut summary = EpisodeSummary {
        policy: policy.name().to_string(),
        seed: env.config().seed,
        steps: 0,
        total_reward: 0.0,
        explored_area: first.info.explored_area,
        collisions: 0,
        explored_curve: vec![first.info.explored_area],
    };
    if let Some(w) = out.as_deref_mut() {
        if let Some(obs) = w.observations.as_deref_mut() {
            obs.write_all(&render_raw(&first.observation, Palette::Observation))?;
        }
    }
    let mut last_collision = false;
    while summary.steps < steps && !env.is_done() {
        let view = PolicyView { map: env.map(), pose: env.pose(), robot: &env.config().robot, last_collision };
        let action = policy.act(&view, &mut rng);
        let r = env.step(action)?;
        summary.steps += 1;
        summary.total_reward += r.reward;
        summary.collisions += r.info.collision as usize;
        summary.explored_area = r.info.explored_area;
        summary.explored_curve.push(r.info.explored_area);
        last_collision = r.info.collision;
        if let Some(w) = out.as_deref_mut() {
            let record = RolloutRecord {
                step: summary.steps,
                pose: r.info.pose,
                action,
                reward: r.reward,
                collision: r.info.collision,
                new_cells: r.info.new_cells,
            };
            serde_json::to_writer(&mut *w.records, &record).map_err(std::io::Error::from)?;
            w.records.write_all(b"\n")?;
            if let Some(obs) = w.observations.as_deref_mut() {
                obs.write_all(&render_raw(&r.observation, Palette::Observation))?;
            }
        }
    }
    Ok(summary)
}
