//! Scan simulation straight from the ground truth: cast a fan of rays,
//! occlude everything behind the first obstacle, optionally disturb the
//! sector with range and registration noise, then merge it into the map.

mod merge;
mod noise;
pub mod ray;
mod scan;

pub use merge::{merge, merge_into};
pub use noise::{
    perturb_ranges, perturb_registration, sample_range_shift, sample_registration, transform_sector, NoiseSpec,
    RegistrationError,
};
pub use scan::{scan, RayEnd, SectorScan, SensorSpec};

use thiserror::Error;

use crate::gridmap::Pose;

#[derive(Debug, Error)]
pub enum SensingError {
    #[error("robot pose ({:.3}, {:.3}) lies inside an obstacle", .0.x, .0.y)]
    PoseInObstacle(Pose),
    #[error("robot pose ({:.3}, {:.3}) lies outside the ground-truth map", .0.x, .0.y)]
    PoseOutsideMap(Pose),
    #[error("invalid sensor: {0}")]
    InvalidSensor(String),
    #[error("invalid noise: {0}")]
    InvalidNoise(String),
    #[error("sector lattice does not line up with the map (resolution or origin mismatch)")]
    LatticeMismatch,
}
