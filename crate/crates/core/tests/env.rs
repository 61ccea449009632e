use gridslam::env::{explored_area, Action, Env, EpisodeConfig, Mode, RewardSpec};
use gridslam::gridmap::{CellState, Pose};
use gridslam::sensing::NoiseSpec;
use gridslam::worldgen::synth::{empty_room, house, SynthSpec};
use gridslam::worldgen::{ObstacleCount, ObstacleSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn noisy() -> NoiseSpec {
    NoiseSpec { range_sigma: 1.0, reg_theta_sigma: 0.01, reg_xy_sigma: 0.02 }
}

fn plan(seed: u64) -> gridslam::floorplan::FloorPlan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    house(&format!("h{seed}"), &SynthSpec::default(), &mut rng)
}

fn drive(
    cfg: &EpisodeConfig,
    plan: &gridslam::floorplan::FloorPlan,
    steps: usize,
    mut check: impl FnMut(&Env, Action, &gridslam::env::StepResult),
) {
    let (mut env, _) = Env::reset(cfg, plan).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xabc);
    for _ in 0..steps {
        // forward-heavy so the robot actually bumps into things
        let action = match rng.random_range(0..4) {
            0 => Action::RotateLeft,
            1 => Action::RotateRight,
            _ => Action::Forward,
        };
        let r = env.step(action).unwrap();
        check(&env, action, &r);
        if r.done {
            break;
        }
    }
}

#[test]
fn explored_area_never_shrinks() {
    for (seed, noise) in [(1, NoiseSpec::default()), (2, noisy())] {
        let cfg = EpisodeConfig { seed, noise, max_steps: 300, ..Default::default() };
        let mut last = 0.0;
        drive(&cfg, &plan(seed), 300, |env, _, r| {
            assert!(r.info.explored_area >= last);
            assert_eq!(r.info.explored_area, explored_area(env.map()));
            last = r.info.explored_area;
        });
    }
}

#[test]
fn robot_never_overlaps_an_obstacle() {
    let obstacles = ObstacleSpec { count: ObstacleCount::Fixed(4), ..Default::default() };
    for seed in 0..5 {
        let cfg = EpisodeConfig { seed, obstacles: obstacles.clone(), max_steps: 400, ..Default::default() };
        let mut collisions = 0;
        drive(&cfg, &plan(seed), 400, |env, _, r| {
            let p = env.pose();
            assert!(!env.ground_truth().disc_hits_obstacle(p.x, p.y, cfg.robot.radius), "seed {seed} at {p:?}");
            collisions += r.info.collision as usize;
        });
        assert!(collisions > 0, "seed {seed}: the walk should hit something");
    }
}

#[test]
fn collision_leaves_pose_and_map_alone() {
    let cfg = EpisodeConfig { seed: 3, noise: noisy(), max_steps: 400, ..Default::default() };
    let (mut env, _) = Env::reset(&cfg, &plan(3)).unwrap();
    let mut seen = 0;
    for _ in 0..400 {
        let (pose, map) = (env.pose(), env.map().clone());
        let r = env.step(Action::Forward).unwrap();
        if r.info.collision {
            seen += 1;
            assert_eq!(env.pose(), pose);
            assert_eq!(env.map(), &map);
            assert_eq!(r.info.new_cells, 0);
            assert_eq!(r.reward, cfg.reward.collision_penalty);
            env.step(Action::RotateLeft).unwrap();
            env.step(Action::RotateLeft).unwrap();
            env.step(Action::RotateLeft).unwrap();
        }
        if env.is_done() {
            break;
        }
    }
    assert!(seen > 0);
}

#[test]
fn rewards_follow_step_info() {
    let cfg = EpisodeConfig { seed: 5, noise: noisy(), max_steps: 300, ..Default::default() };
    let res2 = cfg.resolution * cfg.resolution;
    let spec = cfg.reward.clone();
    drive(&cfg, &plan(5), 300, |_, action, r| {
        let expect = if r.info.collision {
            spec.collision_penalty
        } else {
            spec.alpha_s * r.info.new_cells as f64 * res2 / spec.area_unit
                + if action == Action::Forward { spec.alpha_a } else { 0.0 }
        };
        assert!((r.reward - expect).abs() < 1e-12);
    });
}

#[test]
fn exploration_return_equals_area_gained() {
    let reward =
        RewardSpec { kind: "exploration".into(), exploration_alpha: 2.5, area_unit: 0.5, ..Default::default() };
    for seed in 0..5 {
        let cfg = EpisodeConfig { seed, reward: reward.clone(), noise: noisy(), max_steps: 250, ..Default::default() };
        let (mut env, first) = Env::reset(&cfg, &plan(seed)).unwrap();
        let mut total = 0.0;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while !env.is_done() {
            let r = env.step(Action::ALL[rng.random_range(0..3)]).unwrap();
            if r.info.collision {
                assert_eq!(r.reward, 0.0);
            }
            total += r.reward;
        }
        let gained = explored_area(env.map()) - first.info.explored_area;
        assert!((total - 2.5 * gained / 0.5).abs() < 1e-9, "seed {seed}: {total} vs {gained}");
    }
}

#[test]
fn same_seed_same_episode() {
    let obstacles = ObstacleSpec { count: ObstacleCount::Uniform { lo: 1, hi: 5 }, ..Default::default() };
    let cfg = EpisodeConfig { seed: 9, noise: noisy(), obstacles, max_steps: 150, ..Default::default() };
    let p = plan(9);
    let record = |cfg: &EpisodeConfig| {
        let mut out = Vec::new();
        drive(cfg, &p, 150, |env, _, r| out.push((env.pose(), r.reward, r.observation.clone(), env.map().clone())));
        out
    };
    let a = record(&cfg);
    assert_eq!(a, record(&cfg));
    assert_ne!(a, record(&EpisodeConfig { seed: 10, ..cfg.clone() }));
}

#[test]
fn dynamic_obstacles_move_and_yield() {
    let path: Vec<Pose> = (0..20).map(|i| Pose::new(1.0 + 0.2 * i as f64, 2.5, 0.0)).collect();
    let obstacles = ObstacleSpec { count: ObstacleCount::Fixed(0), trajectories: vec![path], ..Default::default() };
    let room = empty_room("dyn", 6.0, 5.0);
    let mut moved = false;
    for seed in 0..4 {
        let cfg = EpisodeConfig { seed, obstacles: obstacles.clone(), max_steps: 300, ..Default::default() };
        let (env0, _) = Env::reset(&cfg, &room).unwrap();
        let start = env0.obstacles().obstacles[0].pose;
        drive(&cfg, &room, 300, |env, _, _| {
            let p = env.pose();
            assert!(!env.ground_truth().disc_hits_obstacle(p.x, p.y, cfg.robot.radius));
            moved |= env.obstacles().obstacles[0].pose != start;
        });
    }
    assert!(moved);
}

#[test]
fn known_mode_map_is_ground_truth_and_static() {
    let cfg = EpisodeConfig { seed: 2, mode: Mode::NavigationKnown, max_steps: 100, ..Default::default() };
    let (env0, first) = Env::reset(&cfg, &plan(2)).unwrap();
    let truth = env0.ground_truth().clone();
    assert!((first.info.explored_area - truth.known_count() as f64 * 0.01).abs() < 1e-9);
    drive(&cfg, &plan(2), 100, |env, _, r| {
        assert_eq!(env.map(), &truth);
        assert_eq!(r.info.new_cells, 0);
    });
    assert_eq!(truth.count(CellState::Unknown), 0);
}
