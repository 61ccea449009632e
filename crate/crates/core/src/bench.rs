//! Step-throughput benchmark: how long one environment step (scan, noise,
//! merge, observation) takes as the map grows.

use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use serde::Serialize;

use crate::env::{policy_rng, Env, EnvError, EpisodeConfig};
use crate::gridmap::{rasterize, CellState, OccupancyGrid};
use crate::planner::{Policy, PolicyView, RandomPolicy};
use crate::worldgen::synth::{house, SynthSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub map_id: String,
    /// Free area of the ground truth, m².
    pub area_m2: f64,
    pub steps: usize,
    pub mean_us: f64,
    pub p95_us: f64,
    pub steps_per_sec: f64,
}

/// What the numbers were measured with.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fingerprint {
    pub resolution: f64,
    pub sensor_range: f64,
    pub sensor_fov: f64,
    pub steps_per_map: usize,
    pub host: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    /// Sorted by area, then id.
    pub rows: Vec<BenchRow>,
    pub fingerprint: Fingerprint,
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<24} {:>10} {:>7} {:>10} {:>10} {:>10}\n",
            "map", "area_m2", "steps", "mean_us", "p95_us", "steps/s"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<24} {:>10.1} {:>7} {:>10.1} {:>10.1} {:>10.0}",
                r.map_id, r.area_m2, r.steps, r.mean_us, r.p95_us, r.steps_per_sec
            );
        }
        let f = &self.fingerprint;
        let _ = writeln!(
            out,
            "resolution {} m, sensor range {} m, fov {} deg, {} steps/map, {}",
            f.resolution, f.sensor_range, f.sensor_fov, f.steps_per_map, f.host
        );
        out
    }
}

/// Time `steps` random-policy steps on every map. Maps run one after another
/// so they do not compete for cores while being timed.
///
/// Only `Env::step` is timed; policy decisions and reset are not. A tenth of
/// the steps run untimed first so page faults on a fresh map do not count.
pub fn bench_maps(
    maps: &[(String, OccupancyGrid)],
    config: &EpisodeConfig,
    steps: usize,
) -> Result<BenchReport, EnvError> {
    if steps == 0 {
        return Err(EnvError::Config("bench needs at least one step per map".into()));
    }
    let warmup = steps / 10;
    let config = EpisodeConfig { max_steps: steps + warmup, terminate_on_collision: false, ..config.clone() };
    let mut rows = Vec::with_capacity(maps.len());
    for (id, grid) in maps {
        let (mut env, _) = Env::reset_on_grid(&config, grid.clone())?;
        let mut policy = RandomPolicy;
        let mut rng = policy_rng(config.seed);
        let mut times = Vec::with_capacity(steps);
        let mut last_collision = false;
        for i in 0..steps + warmup {
            let view = PolicyView { map: env.map(), pose: env.pose(), robot: &config.robot, last_collision };
            let action = policy.act(&view, &mut rng);
            let t = Instant::now();
            let r = env.step(action)?;
            let elapsed = t.elapsed().as_secs_f64() * 1e6;
            if i >= warmup {
                times.push(elapsed);
            }
            last_collision = r.info.collision;
        }
        let res = grid.resolution();
        rows.push(row(id.clone(), grid.count(CellState::Free) as f64 * res * res, times));
    }
    rows.sort_by(|a, b| a.area_m2.total_cmp(&b.area_m2).then_with(|| a.map_id.cmp(&b.map_id)));
    Ok(BenchReport {
        rows,
        fingerprint: Fingerprint {
            resolution: config.resolution,
            sensor_range: config.sensor.range,
            sensor_fov: config.sensor.fov,
            steps_per_map: steps,
            host: format!(
                "{}-{}, {} threads",
                std::env::consts::OS,
                std::env::consts::ARCH,
                rayon::current_num_threads()
            ),
        },
    })
}

/// A 10×10 m and a 50×50 m synthetic house with rooms of about the same
/// size, so the two differ in extent rather than in what the sensor sees.
pub fn default_maps(resolution: f64, wall_thickness: f64) -> Result<Vec<(String, OccupancyGrid)>, EnvError> {
    [("house-100m2", 10.0, 4), ("house-2500m2", 50.0, 100)]
        .into_iter()
        .map(|(id, side, rooms)| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
            let spec = SynthSpec { width: side, height: side, rooms, ..Default::default() };
            Ok((id.to_string(), rasterize(&house(id, &spec, &mut rng), resolution, wall_thickness)?))
        })
        .collect()
}

fn row(map_id: String, area_m2: f64, mut times: Vec<f64>) -> BenchRow {
    let mean = times.iter().sum::<f64>() / times.len() as f64;
    times.sort_by(f64::total_cmp);
    let p95 = times[((times.len() as f64 * 0.95).ceil() as usize).clamp(1, times.len()) - 1];
    BenchRow { map_id, area_m2, steps: times.len(), mean_us: mean, p95_us: p95, steps_per_sec: 1e6 / mean }
}
