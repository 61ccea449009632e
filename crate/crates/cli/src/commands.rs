use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use gridslam::bench::{bench_maps, default_maps};
use gridslam::env::{run_episode, Env, EpisodeSummary, RolloutWriter};
use gridslam::floorplan::{corpus_stats, load_corpus, StatsOptions};
use gridslam::gridmap::{rasterize, render_png, CellState, OccupancyGrid, Palette};
use gridslam::planner::policy_by_name;
use gridslam::worldgen::{dedup, fill_small_cells, refine_and_crop, repair_connectivity};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::input::{emit, list_maps, load_config, load_grid, load_plan, map_id, resolve_seed, schema, write};
use crate::{Cli, Command};

#[derive(Serialize)]
struct GridSummary {
    id: String,
    width: usize,
    height: usize,
    resolution: f64,
    origin: (f64, f64),
    free_area_m2: f64,
    obstacle_cells: usize,
}

impl GridSummary {
    fn of(id: String, g: &OccupancyGrid) -> Self {
        let r = g.resolution();
        GridSummary {
            id,
            width: g.width(),
            height: g.height(),
            resolution: r,
            origin: g.origin(),
            free_area_m2: g.count(CellState::Free) as f64 * r * r,
            obstacle_cells: g.count(CellState::Obstacle),
        }
    }

    fn table(&self) -> String {
        format!(
            "{}: {}x{} cells at {} m, origin ({:.3}, {:.3}), free area {:.2} m2, {} obstacle cells\n",
            self.id,
            self.width,
            self.height,
            self.resolution,
            self.origin.0,
            self.origin.1,
            self.free_area_m2,
            self.obstacle_cells
        )
    }
}

fn palette(name: &str) -> Result<Palette, CliError> {
    name.parse().map_err(|e: gridslam::gridmap::GridError| CliError::Usage(e.to_string()))
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    let (mut config, pinned) = load_config(cli.config.as_deref())?;
    config.seed = resolve_seed(cli.seed, pinned);
    let (format, out) = (cli.format, cli.out.as_deref());
    match cli.command {
        Command::Rasterize { plan, schema: s } => {
            let out = out.ok_or_else(|| CliError::Usage("rasterize needs --out <file.png>".into()))?;
            let plan = load_plan(&plan, schema(&s.schema)?.as_ref())?;
            let grid = rasterize(&plan, config.resolution, config.wall_thickness)?;
            write(out, &render_png(&grid, Palette::Dataset)?)?;
            let summary = GridSummary::of(plan.id.clone(), &grid);
            emit(format, &summary, || summary.table());
        }
        Command::Render { input, schema: s, palette: p } => {
            let palette = palette(&p)?;
            let grid = load_grid(&input, schema(&s.schema)?.as_ref(), &config)?;
            match out {
                Some(out) => {
                    write(out, &render_png(&grid, palette)?)?;
                    let summary = GridSummary::of(map_id(&input), &grid);
                    emit(format, &summary, || summary.table());
                }
                None => {
                    let ascii = grid.to_ascii();
                    let rows: Vec<&str> = ascii.lines().collect();
                    emit(format, &json!({ "width": grid.width(), "height": grid.height(), "rows": rows }), || {
                        ascii.clone()
                    });
                }
            }
        }
        Command::Stats { dir, schema: s, implicit_room } => {
            let dir = match dir.or_else(|| std::env::var_os("GRIDSLAM_DATA").map(Into::into)) {
                Some(d) if d.join("json").is_dir() => d.join("json"),
                Some(d) => d,
                None => return Err(CliError::Usage("stats needs a directory or GRIDSLAM_DATA".into())),
            };
            let plans = load_corpus(&dir, schema(&s)?.as_ref())?;
            let report = corpus_stats(plans.iter().map(|(_, p)| p), StatsOptions { implicit_room })?;
            if let Some(out) = out {
                write(out, serde_json::to_string_pretty(&report).expect("report serializes").as_bytes())?;
            }
            emit(format, &report, || report.to_table());
        }
        Command::Repair { input, schema: s, m, opening_width, fill_area, no_refine } => {
            let grid = load_grid(&input, schema(&s.schema)?.as_ref(), &config)?;
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let filled = fill_small_cells(&grid, fill_area)?;
            let (repaired, report) = repair_connectivity(&filled, m, opening_width, &mut rng)?;
            let result = if no_refine { repaired } else { refine_and_crop(&repaired)? };
            if let Some(out) = out {
                write(out, &render_png(&result, Palette::Dataset)?)?;
            }
            let cleared: usize = report.carved.iter().map(|c| c.cells_cleared).sum();
            let summary = json!({
                "map": GridSummary::of(map_id(&input), &result),
                "seed": config.seed,
                "m": report.m,
                "pairs_checked": report.pairs_checked,
                "openings": report.carved,
                "cells_cleared": cleared,
                "connected": report.connected,
            });
            emit(format, &summary, || {
                format!(
                    "{} openings carved ({cleared} cells) after {} pair checks, m={}, connected={}\n{}",
                    report.carved.len(),
                    report.pairs_checked,
                    report.m,
                    report.connected,
                    GridSummary::of(map_id(&input), &result).table()
                )
            });
        }
        Command::Dedup { dir, schema: s, threshold } => {
            let paths = list_maps(&dir)?;
            let schema = schema(&s.schema)?;
            let grids =
                paths.par_iter().map(|p| load_grid(p, schema.as_ref(), &config)).collect::<Result<Vec<_>, _>>()?;
            let report = dedup(&grids, threshold)?;
            let name = |i: usize| paths[i].file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let kept: Vec<String> = report.kept.iter().map(|&i| name(i)).collect();
            let removed: Vec<_> =
                report.removed.iter().map(|&(d, r)| json!({ "duplicate": name(d), "of": name(r) })).collect();
            let doc = json!({ "threshold": threshold, "kept": kept, "removed": removed });
            if let Some(out) = out {
                write(out, serde_json::to_string_pretty(&doc).expect("report serializes").as_bytes())?;
            }
            emit(format, &doc, || {
                let mut t =
                    format!("{} maps, {} kept, {} duplicates\n", paths.len(), report.kept.len(), report.removed.len());
                for &(d, r) in &report.removed {
                    t += &format!("duplicate {} of {}\n", name(d), name(r));
                }
                t
            });
        }
        Command::Run { plan, schema: s, policy, steps, dump } => {
            let steps = steps.unwrap_or(config.max_steps);
            config.max_steps = config.max_steps.max(steps);
            config.validate()?;
            let mut policy = policy_by_name(&policy)?;
            let grid = load_grid(&plan, schema(&s.schema)?.as_ref(), &config)?;
            let (mut env, first) = Env::reset_on_grid(&config, grid)?;
            let summary = match dump.as_deref() {
                Some(dir) => run_with_dump(&mut env, &first, policy.as_mut(), steps, dir)?,
                None => run_episode(&mut env, &first, policy.as_mut(), steps, None)?,
            };
            if let Some(out) = out {
                write(out, &render_png(env.map(), Palette::Dataset)?)?;
            }
            emit(format, &summary, || run_table(&summary));
        }
        Command::Bench { plans, schema: s, steps } => {
            let maps = if plans.is_empty() {
                default_maps(config.resolution, config.wall_thickness)?
            } else {
                let schema = schema(&s.schema)?;
                plans.par_iter().map(|p| Ok((map_id(p), load_grid(p, schema.as_ref(), &config)?))).collect::<Result<
                    Vec<_>,
                    CliError,
                >>(
                )?
            };
            let report = bench_maps(&maps, &config, steps)?;
            if let Some(out) = out {
                write(out, report.to_json().as_bytes())?;
            }
            emit(format, &report, || report.to_table());
        }
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn run_with_dump(
    env: &mut Env,
    first: &gridslam::env::StepResult,
    policy: &mut dyn gridslam::planner::Policy,
    steps: usize,
    dir: &Path,
) -> Result<EpisodeSummary, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let (rec_path, obs_path) = (dir.join("rollout.jsonl"), dir.join("observations.raw"));
    let (mut rec, mut obs) = (create(&rec_path)?, create(&obs_path)?);
    let mut writer = RolloutWriter { records: &mut rec, observations: Some(&mut obs) };
    let summary = run_episode(env, first, policy, steps, Some(&mut writer))?;
    rec.flush().map_err(|e| CliError::io(&rec_path, e))?;
    obs.flush().map_err(|e| CliError::io(&obs_path, e))?;
    write(&dir.join("map.png"), &render_png(env.map(), Palette::Dataset)?)?;
    let side = first.observation.width();
    let meta = json!({ "summary": summary, "observation_side_cells": side, "palette": "observation" });
    write(&dir.join("summary.json"), serde_json::to_string_pretty(&meta).expect("summary serializes").as_bytes())?;
    Ok(summary)
}

fn run_table(s: &EpisodeSummary) -> String {
    format!(
        "policy {}  seed {}  steps {}\ntotal reward {:.4}\nexplored area {:.2} m2\ncollisions {}\n",
        s.policy, s.seed, s.steps, s.total_reward, s.explored_area, s.collisions
    )
}
