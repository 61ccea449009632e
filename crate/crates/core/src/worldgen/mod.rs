//! Map sanitation and scene dressing: small-cell filling, connectivity
//! repair, wall refinement and cropping, duplicate removal, obstacle
//! placement, and a small synthetic house generator for testing.

mod components;
mod dedup;
mod obstacles;
mod refine;
mod repair;
pub mod synth;

pub use components::{fill_small_cells, free_components, sample_free_points, Components};
pub use dedup::{dedup, diff_fraction, DedupReport, DEFAULT_DIFF_THRESHOLD};
pub use obstacles::{
    advance_obstacles, generate_obstacles, ObstacleCount, ObstacleSet, ObstacleSpec, PlacedObstacle, Placement,
    ShapeSpec,
};
pub use refine::refine_and_crop;
pub use repair::{repair_connectivity, CarvedOpening, RepairReport, DEFAULT_OPENING_WIDTH, MAX_CARVE_RETRIES};

use thiserror::Error;

use crate::gridmap::{Cell, GridError};

/// Free-pocket area below which cells are filled, in square meters.
pub const DEFAULT_FILL_AREA: f64 = 2.0;

#[derive(Debug, Error)]
pub enum WorldgenError {
    #[error("{name} must be {expect}, got {value}")]
    InvalidParameter { name: &'static str, expect: &'static str, value: f64 },
    #[error("requested {requested} free cells but the map only has {available}")]
    NotEnoughFree { requested: usize, available: usize },
    #[error("could not connect sample points {a} and {b} after {retries} carves")]
    RepairFailed { a: Cell, b: Cell, retries: usize, report: Box<RepairReport> },
    #[error("map has no free cells")]
    AllObstacle,
    #[error("obstacle {index}: no free placement found after {attempts} attempts")]
    PlacementFailed { index: usize, attempts: usize },
    #[error("obstacle {index} overlaps {what}")]
    PlacementOverlap { index: usize, what: &'static str },
    #[error("obstacle {index} trajectory step {step} overlaps a wall")]
    TrajectoryCollision { index: usize, step: usize },
    #[error("invalid obstacle spec: {0}")]
    InvalidObstacleSpec(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}
