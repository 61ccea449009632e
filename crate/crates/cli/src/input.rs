use std::path::{Path, PathBuf};

use gridslam::env::EpisodeConfig;
use gridslam::floorplan::{load_json_with, schema_by_name, FloorPlan, SchemaAdapter, SCHEMA_NAMES};
use gridslam::gridmap::{parse_png, rasterize, OccupancyGrid, Palette};
use serde::Serialize;

use crate::error::CliError;
use crate::Format;

/// Config file contents plus the seed, if the file pins one.
pub fn load_config(path: Option<&Path>) -> Result<(EpisodeConfig, Option<u64>), CliError> {
    let Some(path) = path else {
        return Ok((EpisodeConfig::default(), None));
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let config = EpisodeConfig::from_json(&text)?;
    let pinned = serde_json::from_str::<serde_json::Value>(&text)
        .ok()
        .and_then(|v| v.get("seed").and_then(serde_json::Value::as_u64));
    Ok((config, pinned))
}

/// `--seed` wins over the config file; with neither, draw one and say so.
pub fn resolve_seed(flag: Option<u64>, pinned: Option<u64>) -> u64 {
    flag.or(pinned).unwrap_or_else(|| {
        let seed = rand::random::<u64>();
        eprintln!("seed: {seed}");
        seed
    })
}

pub fn schema(name: &str) -> Result<Box<dyn SchemaAdapter>, CliError> {
    schema_by_name(name).ok_or_else(|| {
        CliError::Usage(format!("unknown schema {name:?} (expected one of: {})", SCHEMA_NAMES.join(", ")))
    })
}

pub fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn is_png(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"))
}

pub fn load_plan(path: &Path, schema: &dyn SchemaAdapter) -> Result<FloorPlan, CliError> {
    load_json_with(&read(path)?, schema).map_err(|e| {
        gridslam::floorplan::PlanError::InFile { path: path.display().to_string(), source: Box::new(e) }.into()
    })
}

/// A ground-truth grid from a PNG (dataset palette, configured resolution,
/// origin at 0,0) or from a plan rasterized with the configured settings.
pub fn load_grid(path: &Path, schema: &dyn SchemaAdapter, config: &EpisodeConfig) -> Result<OccupancyGrid, CliError> {
    if is_png(path) {
        Ok(parse_png(&read(path)?, Palette::Dataset, config.resolution, (0.0, 0.0))?)
    } else {
        Ok(rasterize(&load_plan(path, schema)?, config.resolution, config.wall_thickness)?)
    }
}

/// Plans and PNG grids in `dir`, sorted by path.
pub fn list_maps(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && (is_png(p) || p.extension().is_some_and(|e| e == "json")))
        .collect();
    paths.sort();
    Ok(paths)
}

pub fn map_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// Print `value` as JSON, or the table rendering.
pub fn emit<T: Serialize>(format: Format, value: &T, table: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("output serializes")),
        Format::Table => print!("{}", table()),
    }
}
